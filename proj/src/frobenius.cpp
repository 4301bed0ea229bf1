#include "heun/frobenius.hpp"

#include <algorithm>
#include <cmath>

namespace heun {

RecurrenceCoeffs rec_at(const HeunParams& p, int n) {
  const double nd = static_cast<double>(n);
  const cplx a = p.a, q = p.q, al = p.alpha, be = p.beta, g = p.gamma, de = p.delta,
             ep = p.epsilon;
  // gamma + integer is added in one step: near the poles gamma = -n_star + h
  // the offset h survives exactly, while (gamma - 1.0) + nd would shred it.
  RecurrenceCoeffs r;
  r.P = a * nd * (g + (nd - 1.0));
  r.Q = q + (nd - 1.0) * ((a + 1.0) * (g + (nd - 2.0)) + ep + a * de);
  r.R = -(nd - 2.0 + al) * (nd - 2.0 + be);
  r.S = -a * (g + (2.0 * nd - 1.0));
  r.T = ep + a * de + (a + 1.0) * (g + (2.0 * nd - 3.0));
  r.U = 4.0 - 2.0 * nd - al - be;
  return r;
}

namespace {

double local_radius(const HeunParams& p) { return std::min(1.0, std::abs(p.a)); }

void require_order(int N, int min_order) {
  if (N < min_order) raise(errc::bad_argument, "series order too small");
  if (N > kSeriesMaxTerms) raise(errc::non_convergence, "series order exceeds cap");
}

}  // namespace

SeriesLocal coeffs_plain(const HeunParams& p, int N) {
  require_order(N, 1);
  const GammaClass gc = classify_gamma(p.gamma);
  if (gc.dist_nonpositive < kAtIntegerTol)
    raise(errc::pole_at_gamma, "gamma at a non-positive integer; use the log case",
          gc.n_star);

  SeriesLocal s;
  s.kind = SeriesKind::plain;
  s.radius = local_radius(p);
  s.coeff_main.resize(N + 1);
  s.coeff_main[0] = 1.0;
  cplx bm2 = 0.0, bm1 = 1.0;
  for (int n = 1; n <= N; ++n) {
    const RecurrenceCoeffs r = rec_at(p, n);
    const cplx bn = (r.Q * bm1 + r.R * bm2) / r.P;
    s.coeff_main[n] = bn;
    bm2 = bm1;
    bm1 = bn;
  }
  return s;
}

SeriesLocal coeffs_log_nonpositive(const HeunParams& p, int n_star, int N) {
  if (n_star < 0) raise(errc::bad_argument, "n_star must be non-negative");
  require_order(N, n_star + 2);
  if (std::abs(p.gamma + static_cast<double>(n_star)) > kAtIntegerTol)
    raise(errc::bad_argument, "caller must fix gamma = -n_star before the log case");

  // Work with the exact integer; epsilon in p is already consistent with it.
  const HeunParams pf = with_gamma(p, cplx(-static_cast<double>(n_star), 0.0));

  SeriesLocal s;
  s.kind = SeriesKind::log_nonpositive;
  s.n_star = n_star;
  s.radius = local_radius(pf);
  s.coeff_main.assign(N + 1, cplx(0.0));
  s.coeff_aux.assign(N + 1, cplx(0.0));

  // c_n for n <= n_star by the plain recurrence (P_n != 0 there), c_{-1} = 0.
  s.coeff_main[0] = 1.0;
  for (int n = 1; n <= n_star; ++n) {
    const RecurrenceCoeffs r = rec_at(pf, n);
    const cplx cm1 = s.coeff_main[n - 1];
    const cplx cm2 = (n >= 2) ? s.coeff_main[n - 2] : cplx(0.0);
    s.coeff_main[n] = (r.Q * cm1 + r.R * cm2) / r.P;
  }

  // s_n seeded s_{n_star} = 0, s_{n_star+1} = 1, plain recurrence above that.
  s.coeff_aux[n_star + 1] = 1.0;
  for (int n = n_star + 2; n <= N; ++n) {
    const RecurrenceCoeffs r = rec_at(pf, n);
    s.coeff_aux[n] = (r.Q * s.coeff_aux[n - 1] + r.R * s.coeff_aux[n - 2]) / r.P;
  }

  // C by the closed form; the recurrence row n_star+1 is then consistent.
  const cplx g = pf.gamma, a = pf.a, q = pf.q, al = pf.alpha, be = pf.beta, de = pf.delta,
             ep = pf.epsilon;
  const cplx c_ns = s.coeff_main[n_star];
  const cplx c_ns1 = (n_star >= 1) ? s.coeff_main[n_star - 1] : cplx(0.0);
  s.log_constant = (c_ns * (q - g * (ep + a * de - a - 1.0)) -
                    c_ns1 * ((1.0 + g) * (2.0 - de - ep) + al * be)) /
                   (a * static_cast<double>(n_star + 1));
  s.free_constant = 0.0;  // A convention

  // c_{n_star+1} = 0 convention; higher c_n by the S/T/U-augmented recurrence.
  s.coeff_main[n_star + 1] = 0.0;
  for (int n = n_star + 2; n <= N; ++n) {
    const RecurrenceCoeffs r = rec_at(pf, n);
    const cplx inhom = s.log_constant * (r.S * s.coeff_aux[n] + r.T * s.coeff_aux[n - 1] +
                                         r.U * s.coeff_aux[n - 2]);
    s.coeff_main[n] = (r.Q * s.coeff_main[n - 1] + r.R * s.coeff_main[n - 2] + inhom) / r.P;
  }
  return s;
}

SeriesLocal coeffs_log_gamma_one(const HeunParams& p, int N) {
  require_order(N, 2);
  if (std::abs(p.gamma - 1.0) > kAtIntegerTol)
    raise(errc::bad_argument, "caller must fix gamma = 1 before the log case");
  const HeunParams pf = with_gamma(p, 1.0);

  SeriesLocal s;
  s.kind = SeriesKind::log_gamma_one;
  s.radius = local_radius(pf);
  s.coeff_aux = coeffs_plain(pf, N).coeff_main;  // t_n = b_n at gamma = 1
  s.coeff_main.assign(N + 1, cplx(0.0));
  s.log_constant = 1.0;
  s.free_constant = 0.0;  // B convention

  // d_{-1} = d_0 = 0; P_n = a n^2 never vanishes here.
  for (int n = 1; n <= N; ++n) {
    const RecurrenceCoeffs r = rec_at(pf, n);
    const cplx dm1 = s.coeff_main[n - 1];
    const cplx dm2 = (n >= 2) ? s.coeff_main[n - 2] : cplx(0.0);
    const cplx tn = s.coeff_aux[n];
    const cplx tn1 = s.coeff_aux[n - 1];
    const cplx tn2 = (n >= 2) ? s.coeff_aux[n - 2] : cplx(0.0);
    s.coeff_main[n] = (r.Q * dm1 + r.R * dm2 + r.S * tn + r.T * tn1 + r.U * tn2) / r.P;
  }
  return s;
}

cplx residue_K(const HeunParams& p, int n_star) {
  if (n_star < 0) raise(errc::bad_argument, "n_star must be non-negative");
  // "fix gamma = -n_star": rebuild the parameters at the integer.
  const HeunParams pf = with_gamma(p, cplx(-static_cast<double>(n_star), 0.0));

  cplx cm2 = 0.0, cm1 = 1.0;  // c_{n-2}, c_{n-1} rolling, c_0 = 1
  for (int n = 1; n <= n_star; ++n) {
    const RecurrenceCoeffs r = rec_at(pf, n);
    const cplx cn = (r.Q * cm1 + r.R * cm2) / r.P;
    cm2 = cm1;
    cm1 = cn;
  }
  const RecurrenceCoeffs r = rec_at(pf, n_star + 1);
  return (r.Q * cm1 + r.R * cm2) / (pf.a * static_cast<double>(n_star + 1));
}

SumResult sum_series(const SeriesLocal& s, cplx z, double tol) {
  if (s.radius <= 0.0 || s.coeff_main.empty())
    raise(errc::bad_argument, "empty series");
  if (std::abs(z) > kDiskSafety * s.radius)
    raise(errc::out_of_disk, "z outside the trusted part of the convergence disk");

  const bool log_kind = s.kind != SeriesKind::plain;
  const bool has_log =
      log_kind && !(s.kind == SeriesKind::log_nonpositive && s.log_constant == cplx(0.0));
  if (has_log) {
    // distance to B0 = (-inf, 0]; covers z = 0 as well
    const double d0 = (z.real() >= 0.0) ? std::abs(z) : std::abs(z.imag());
    if (d0 < 1e-12)
      raise(errc::on_cut, "log-case series needs z off the branch cut B0");
  }

  const cplx logz = has_log ? std::log(z) : cplx(0.0);
  const cplx L = has_log ? s.log_constant * logz + s.free_constant : cplx(0.0);
  const cplx C = has_log ? s.log_constant : cplx(0.0);

  const std::size_t N = s.coeff_main.size();
  cplx Sm = 0.0, Sa = 0.0;    // value partial sums, main and aux part
  cplx Dm = 0.0, Da = 0.0;    // derivative partial sums (sum n c_n z^{n-1})
  cplx zp = 1.0;              // z^n
  cplx zp_prev = 0.0;         // z^{n-1}
  double tau = 0.0, tau_prev = 0.0;
  int small_run = 0;
  SumResult out;

  for (std::size_t n = 0; n < N; ++n) {
    const cplx tm = s.coeff_main[n] * zp;
    const cplx ta = (n < s.coeff_aux.size()) ? s.coeff_aux[n] * zp : cplx(0.0);
    Sm += tm;
    Sa += ta;
    if (n >= 1) {
      const double nd = static_cast<double>(n);
      Dm += nd * s.coeff_main[n] * zp_prev;
      if (n < s.coeff_aux.size()) Da += nd * s.coeff_aux[n] * zp_prev;
    }
    tau_prev = tau;
    tau = std::abs(tm) + (has_log ? std::abs(L) * std::abs(ta) : 0.0);

    const double partial = std::abs(Sm + (has_log ? L * Sa : cplx(0.0)));
    if (tau < tol * std::max(partial, 1e-300))
      ++small_run;
    else
      small_run = 0;

    if (small_run >= 4 && n > 20) {
      double ratio = (tau_prev > 0.0 && tau > 0.0) ? tau / tau_prev : std::abs(z) / s.radius;
      ratio = std::min(ratio, 0.97);
      out.err_est = tau * ratio / (1.0 - ratio);
      out.converged = true;
      break;
    }
    zp_prev = zp;
    zp *= z;
  }

  out.H = Sm + (has_log ? L * Sa : cplx(0.0));
  if (has_log) {
    // d/dz [ (C log z + A) sum s_n z^n ] = (C log z + A) sum n s_n z^{n-1}
    //                                      + C/z * sum s_n z^n
    out.dH = Dm + L * Da + C * Sa / z;
  } else {
    out.dH = Dm;
  }
  if (!out.converged) {
    // conservative: report the last term as the scale of what is missing
    out.err_est = std::max(tau, tau_prev);
  }
  return out;
}

}  // namespace heun
