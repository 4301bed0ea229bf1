#include "heun/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace heun {

namespace {

// Taylor shift: returns the ascending coefficients of poly(z0 + u).
std::vector<cplx> shift_poly(std::vector<cplx> c, cplx z0) {
  const int n = static_cast<int>(c.size());
  for (int i = 0; i < n - 1; ++i)
    for (int j = n - 2; j >= i; --j) c[j] += z0 * c[j + 1];
  return c;
}

// Truncated quotient num/den to `terms` coefficients; den[0] != 0.
std::vector<cplx> series_div(const std::vector<cplx>& num, const std::vector<cplx>& den,
                             int terms) {
  std::vector<cplx> q(terms);
  for (int m = 0; m < terms; ++m) {
    cplx s = (m < static_cast<int>(num.size())) ? num[m] : cplx(0.0);
    const int kmax = std::min<int>(m, static_cast<int>(den.size()) - 1);
    for (int k = 1; k <= kmax; ++k) s -= den[k] * q[m - k];
    q[m] = s / den[0];
  }
  return q;
}

struct StepResult {
  cplx H, dH;
  double tail;  // magnitude of the last two retained terms at the step size
};

// One Taylor step of length h from z0.  The local expansion solves
// H'' = -(B(u) H' + C(u) H) / A(u) with the polynomials shifted to z0.
StepResult taylor_step(const HeunParams& p, cplx z0, cplx H, cplx dH, cplx h, int order) {
  const std::vector<cplx> A =
      shift_poly({cplx(0.0), p.a, -(1.0 + p.a), cplx(1.0)}, z0);
  const std::vector<cplx> B = shift_poly(
      {p.gamma * p.a, -(p.gamma * (1.0 + p.a) + p.delta * p.a + p.epsilon),
       p.gamma + p.delta + p.epsilon},
      z0);
  const std::vector<cplx> C = shift_poly({-p.q, p.alpha * p.beta}, z0);

  const std::vector<cplx> pr = series_div(B, A, order);
  const std::vector<cplx> rr = series_div(C, A, order);

  std::vector<cplx> c(order + 1);
  c[0] = H;
  c[1] = dH;
  for (int m = 0; m + 2 <= order; ++m) {
    cplx s = 0.0;
    for (int j = 0; j <= m; ++j) {
      s += pr[j] * static_cast<double>(m + 1 - j) * c[m + 1 - j];
      s += rr[j] * c[m - j];
    }
    c[m + 2] = -s / static_cast<double>((m + 1) * (m + 2));
  }

  // Horner for value and derivative at u = h.
  cplx v = 0.0, dv = 0.0;
  for (int m = order; m >= 1; --m) dv = dv * h + static_cast<double>(m) * c[m];
  for (int m = order; m >= 0; --m) v = v * h + c[m];

  const double ah = std::abs(h);
  StepResult out;
  out.H = v;
  out.dH = dv;
  out.tail = std::abs(c[order]) * std::pow(ah, order) +
             std::abs(c[order - 1]) * std::pow(ah, order - 1);
  return out;
}

double dist_point_segment(cplx pt, cplx s0, cplx s1) {
  const cplx d = s1 - s0;
  const double L2 = std::norm(d);
  if (L2 == 0.0) return std::abs(pt - s0);
  double t = ((pt - s0) * std::conj(d)).real() / L2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(pt - (s0 + t * d));
}

}  // namespace

OracleResult integrate_fixed(const HeunParams& p, cplx z_from, cplx H, cplx dH,
                             cplx z_to, double step_fraction, int order) {
  OracleResult out;
  out.H = H;
  out.dH = dH;
  cplx pos = z_from;
  const int max_steps = 200000;
  for (int k = 0; k < max_steps; ++k) {
    const double remaining = std::abs(z_to - pos);
    if (remaining == 0.0) return out;
    const double dmin = std::min({std::abs(pos), std::abs(pos - 1.0), std::abs(pos - p.a)});
    const double hmax = step_fraction * dmin;
    const cplx dir = (z_to - pos) / remaining;
    const cplx h = dir * std::min(hmax, remaining);
    const StepResult st = taylor_step(p, pos, out.H, out.dH, h, order);
    out.H = st.H;
    out.dH = st.dH;
    pos += h;
    if (std::abs(z_to - pos) < 1e-15 * std::max(1.0, std::abs(z_to))) return out;
  }
  raise(errc::tolerance_unreachable, "oracle step count exceeded");
}

OracleResult integrate(const HeunParams& p, cplx z_from, cplx H, cplx dH, cplx z_to,
                       double tol) {
  for (const cplx s : {cplx(0.0), cplx(1.0), p.a})
    if (dist_point_segment(s, z_from, z_to) < kOracleSegmentClearance)
      raise(errc::segment_near_singularity,
            "integration segment passes too close to a singular point");

  // Adaptive pass: fixed fraction, halving the step while the Taylor tail
  // exceeds the local budget.
  const auto run = [&](double fraction) -> OracleResult {
    OracleResult out;
    out.H = H;
    out.dH = dH;
    cplx pos = z_from;
    const int max_steps = 400000;
    for (int k = 0; k < max_steps; ++k) {
      const double remaining = std::abs(z_to - pos);
      if (remaining < 1e-15 * std::max(1.0, std::abs(z_to))) return out;
      const double dmin =
          std::min({std::abs(pos), std::abs(pos - 1.0), std::abs(pos - p.a)});
      double hlen = std::min(fraction * dmin, remaining);
      const cplx dir = (z_to - pos) / remaining;
      StepResult st{};
      int halvings = 0;
      for (;;) {
        st = taylor_step(p, pos, out.H, out.dH, dir * hlen, kOracleOrder);
        const double scale = std::abs(st.H) + hlen * std::abs(st.dH) + 1e-300;
        if (st.tail <= tol * scale) break;
        if (++halvings > 60)
          raise(errc::tolerance_unreachable, "oracle local tolerance unreachable");
        hlen *= 0.5;
      }
      out.H = st.H;
      out.dH = st.dH;
      pos += dir * hlen;
    }
    raise(errc::tolerance_unreachable, "oracle step count exceeded");
  };

  const OracleResult full = run(kOracleStepFraction);
  OracleResult half = run(0.5 * kOracleStepFraction);
  half.err_est = std::abs(full.H - half.H) + std::abs(full.dH - half.dH);
  return half;
}

}  // namespace heun
