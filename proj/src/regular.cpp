#include "heun/regular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace heun {

double rho(double r) {
  if (!std::isfinite(r)) raise(errc::bad_argument, "rho needs a finite argument");
  if (r <= 0.0) return 1.0;
  if (r >= 0.5) return 0.0;
  const double x = 1.0 / (2.0 * r) + 1.0 / (2.0 * r - 1.0);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void check_config(const RegConfig& cfg) {
  if (!(cfg.near_threshold > 0.0 && cfg.near_threshold < cfg.contour_radius &&
        cfg.contour_radius < 0.5))
    raise(errc::bad_argument, "need 0 < near_threshold < contour_radius < 1/2");
  if (cfg.quadrature_nodes < 4) raise(errc::bad_argument, "too few quadrature nodes");
}

EvalFlags merge_flags(const EvalFlags& x, const EvalFlags& y) {
  EvalFlags f;
  f.used_log_case = x.used_log_case || y.used_log_case;
  f.used_index_transform = x.used_index_transform || y.used_index_transform;
  f.used_contour = x.used_contour || y.used_contour;
  f.path_elements = std::max(x.path_elements, y.path_elements);
  return f;
}

}  // namespace

EvalResult cauchy_disc(cplx center, double radius, int nodes, cplx gamma_eval,
                       const std::function<EvalResult(cplx)>& f, double tol) {
  if (std::abs(gamma_eval - center) >= radius)
    raise(errc::bad_argument, "evaluation point must lie inside the contour");

  // Evaluate once at 2*nodes points; the even-indexed subset gives the
  // coarse rule for the self-check.  One doubling retry before giving up.
  int M = nodes;
  std::vector<EvalResult> vals;
  std::vector<cplx> pts;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fine = 2 * M;
    vals.assign(fine, EvalResult{});
    pts.assign(fine, cplx(0.0));
    for (int j = 0; j < fine; ++j) {
      const double th = 2.0 * std::numbers::pi * j / fine;
      pts[j] = center + radius * std::exp(cplx(0.0, th));
      vals[j] = f(pts[j]);
    }
    cplx v_c = 0.0, d_c = 0.0, v_f = 0.0, d_f = 0.0;
    double node_err = 0.0, fmax = 0.0;
    for (int j = 0; j < fine; ++j) {
      const cplx w = (pts[j] - center) / (pts[j] - gamma_eval);
      v_f += w * vals[j].value;
      d_f += w * vals[j].derivative;
      node_err += std::abs(w) * vals[j].err_est;
      fmax = std::max(fmax, std::abs(vals[j].value));
      if (j % 2 == 0) {
        v_c += w * vals[j].value;
        d_c += w * vals[j].derivative;
      }
    }
    v_f /= static_cast<double>(fine);
    d_f /= static_cast<double>(fine);
    v_c /= static_cast<double>(M);
    d_c /= static_cast<double>(M);
    node_err /= static_cast<double>(fine);

    const double diff = std::abs(v_f - v_c);
    const double scale = std::max(std::abs(v_f), fmax) + 1e-300;
    if (diff <= 10.0 * tol * scale) {
      EvalResult out;
      out.value = v_f;
      out.derivative = d_f;
      out.err_est = diff + node_err;
      out.flags.used_contour = true;
      return out;
    }
    M = fine;
  }
  raise(errc::quadrature_unresolved,
        "node doubling moved the contour result by more than 10x the tolerance");
}

EvalResult heunl_reg(const HeunParams& p, cplx z, const RegConfig& cfg, double tol) {
  check_config(cfg);
  const GammaClass gc = classify_gamma(p.gamma);
  const double d = gc.dist_nonpositive;
  if (d >= kVicinityRadius) return heunl(p, z, tol);

  const int ns = gc.n_star;
  const cplx center(-static_cast<double>(ns), 0.0);
  const cplx K = residue_K(p, ns);

  if (d >= cfg.near_threshold) {
    // Direct blend: HeunL - K/(gamma+n*) rho(|gamma+n*|) HeunS.
    const EvalResult L = heunl(p, z, tol);
    const EvalResult S = heuns(p, z, tol);
    const cplx factor = K / (p.gamma - center) * rho(d);
    EvalResult out;
    out.value = L.value - factor * S.value;
    out.derivative = L.derivative - factor * S.derivative;
    out.err_est = L.err_est + std::abs(factor) * S.err_est +
                  1e-16 * (std::abs(L.value) + std::abs(factor * S.value));
    out.flags = merge_flags(L.flags, S.flags);
    return out;
  }

  // Near/at the integer: Cauchy contour of the analytic core (rho omitted;
  // it deviates from 1 by less than exp(-1/(2 near_threshold)) here).
  const auto core = [&](cplx g) -> EvalResult {
    const HeunParams pg = with_gamma(p, g);
    const EvalResult L = heunl(pg, z, tol);
    const EvalResult S = heuns(pg, z, tol);
    const cplx factor = K / (g - center);
    EvalResult r;
    r.value = L.value - factor * S.value;
    r.derivative = L.derivative - factor * S.derivative;
    r.err_est = L.err_est + std::abs(factor) * S.err_est;
    r.flags = merge_flags(L.flags, S.flags);
    return r;
  };
  EvalResult out =
      cauchy_disc(center, cfg.contour_radius, cfg.quadrature_nodes, p.gamma, core, tol);
  out.flags.used_index_transform = true;
  return out;
}

EvalResult heuns_ring(const HeunParams& p, cplx z, const RegConfig& cfg, double tol) {
  check_config(cfg);
  const BranchCuts cuts = BranchCuts::for_params(p);
  if (cuts.dist_cut_zero(z) < cuts.on_cut_tolerance)
    raise(errc::on_cut, "the z^{1-gamma} prefactor needs z off the branch cut B0");

  const HeunParams pt = index_transform(p);
  const EvalResult inner = heunl_reg(pt, z, cfg, tol);
  const cplx one_mg = 1.0 - p.gamma;
  const cplx pref = std::pow(z, one_mg);
  EvalResult out;
  out.value = pref * inner.value;
  out.derivative = pref * inner.derivative + one_mg * std::pow(z, -p.gamma) * inner.value;
  out.err_est = std::abs(pref) * inner.err_est * (1.0 + std::abs(one_mg) / std::abs(z));
  out.flags = inner.flags;
  out.flags.used_index_transform = true;
  return out;
}

EvalResult heuns_reg(const HeunParams& p, cplx z, const RegConfig& cfg, double tol) {
  check_config(cfg);
  const double e = std::abs(p.gamma - 1.0);
  if (e >= kVicinityRadius) return heuns_ring(p, z, cfg, tol);

  if (e >= cfg.near_threshold) {
    const EvalResult ring = heuns_ring(p, z, cfg, tol);
    const EvalResult L = heunl(p, z, tol);
    const cplx inv = 1.0 / (1.0 - p.gamma);
    const double re = rho(e);
    EvalResult out;
    out.value = re * inv * (ring.value - L.value) + (1.0 - re) * ring.value;
    out.derivative =
        re * inv * (ring.derivative - L.derivative) + (1.0 - re) * ring.derivative;
    out.err_est = (re * std::abs(inv) + (1.0 - re)) * ring.err_est +
                  re * std::abs(inv) * L.err_est +
                  1e-16 * (std::abs(ring.value) + std::abs(L.value)) * std::abs(inv);
    out.flags = merge_flags(ring.flags, L.flags);
    return out;
  }

  // Near/at gamma = 1: contour of the analytic core (ring - HeunL)/(1-gamma'),
  // which has a removable singularity at 1.
  const auto core = [&](cplx g) -> EvalResult {
    const HeunParams pg = with_gamma(p, g);
    const EvalResult ring = heuns_ring(pg, z, cfg, tol);
    const EvalResult L = heunl(pg, z, tol);
    const cplx inv = 1.0 / (1.0 - g);
    EvalResult r;
    r.value = inv * (ring.value - L.value);
    r.derivative = inv * (ring.derivative - L.derivative);
    r.err_est = std::abs(inv) * (ring.err_est + L.err_est);
    r.flags = merge_flags(ring.flags, L.flags);
    return r;
  };
  EvalResult out =
      cauchy_disc(cplx(1.0), cfg.contour_radius, cfg.quadrature_nodes, p.gamma, core, tol);
  out.flags.used_index_transform = true;
  return out;
}

}  // namespace heun
