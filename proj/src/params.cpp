#include "heun/params.hpp"

#include <algorithm>
#include <cmath>

namespace heun {

const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_singular_point: return "invalid_singular_point";
    case errc::pole_at_gamma: return "pole_at_gamma";
    case errc::on_cut: return "on_cut";
    case errc::outside_sheet: return "outside_sheet";
    case errc::out_of_disk: return "out_of_disk";
    case errc::singular_center: return "singular_center";
    case errc::target_on_cut: return "target_on_cut";
    case errc::target_outside_sheet: return "target_outside_sheet";
    case errc::non_convergence: return "non_convergence";
    case errc::segment_near_singularity: return "segment_near_singularity";
    case errc::tolerance_unreachable: return "tolerance_unreachable";
    case errc::quadrature_unresolved: return "quadrature_unresolved";
    case errc::bad_argument: return "bad_argument";
  }
  return "unknown";
}

bool errc_is_domain(errc c) {
  switch (c) {
    case errc::non_convergence:
    case errc::tolerance_unreachable:
    case errc::quadrature_unresolved:
      return false;
    default:
      return true;
  }
}

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Distance from z to the ray {anchor + t * dir, t >= 0}, |dir| = 1.
double dist_to_ray(cplx z, cplx anchor, cplx dir) {
  const cplx w = (z - anchor) * std::conj(dir);
  if (w.real() <= 0.0) return std::abs(z - anchor);
  return std::abs(w.imag());
}

}  // namespace

HeunParams make_params(cplx a, cplx q, cplx alpha, cplx beta, cplx gamma, cplx delta) {
  if (!finite(a) || !finite(q) || !finite(alpha) || !finite(beta) || !finite(gamma) ||
      !finite(delta))
    raise(errc::bad_argument, "all parameters must be finite");
  if (std::abs(a) <= 1e-12 || std::abs(a - 1.0) <= 1e-12)
    raise(errc::invalid_singular_point, "a must stay away from {0, 1}");
  HeunParams p;
  p.a = a;
  p.q = q;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.delta = delta;
  p.epsilon = alpha + beta + 1.0 - gamma - delta;
  return p;
}

HeunParams with_gamma(const HeunParams& p, cplx gamma) {
  return make_params(p.a, p.q, p.alpha, p.beta, gamma, p.delta);
}

HeunParams index_transform(const HeunParams& p) {
  const cplx g = p.gamma;
  return make_params(p.a, p.q - (g - 1.0) * (p.epsilon + p.a * p.delta),
                     p.alpha - g + 1.0, p.beta - g + 1.0, 2.0 - g, p.delta);
}

GammaClass classify_gamma(cplx gamma) {
  if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag()))
    raise(errc::bad_argument, "gamma must be finite");

  GammaClass gc;
  long n = std::lround(std::clamp(-gamma.real(), 0.0, 1e9));
  gc.n_star = static_cast<int>(n);
  gc.dist_nonpositive = std::abs(gamma + cplx(static_cast<double>(n), 0.0));
  gc.dist_one = std::abs(gamma - 1.0);

  if (gc.dist_nonpositive < kAtIntegerTol) {
    gc.kind = GammaClass::Kind::at_nonpositive;
    gc.offset = gamma + cplx(static_cast<double>(n), 0.0);
  } else if (gc.dist_one < kAtIntegerTol) {
    gc.kind = GammaClass::Kind::at_one;
    gc.offset = gamma - 1.0;
  } else if (gc.dist_nonpositive < kVicinityRadius) {
    gc.kind = GammaClass::Kind::near_nonpositive;
    gc.offset = gamma + cplx(static_cast<double>(n), 0.0);
  } else if (gc.dist_one < kVicinityRadius) {
    gc.kind = GammaClass::Kind::near_one;
    gc.offset = gamma - 1.0;
  } else {
    gc.kind = GammaClass::Kind::regular;
    gc.offset = (gc.dist_nonpositive <= gc.dist_one)
                    ? gamma + cplx(static_cast<double>(n), 0.0)
                    : gamma - 1.0;
  }
  return gc;
}

double BranchCuts::dist_cut_one(cplx z) const { return dist_to_ray(z, 1.0, 1.0); }

double BranchCuts::dist_cut_a(cplx z) const { return dist_to_ray(z, a, a / std::abs(a)); }

double BranchCuts::dist_cut_zero(cplx z) const { return dist_to_ray(z, 0.0, -1.0); }

double BranchCuts::min_active_dist(cplx z, bool cut_zero_active) const {
  double d = std::min(dist_cut_one(z), dist_cut_a(z));
  if (cut_zero_active) d = std::min(d, dist_cut_zero(z));
  return d;
}

StarVerdict in_star_domain(cplx z, const BranchCuts& cuts, bool needs_cut_zero) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    raise(errc::bad_argument, "z must be finite");
  if (cuts.min_active_dist(z, needs_cut_zero) < cuts.on_cut_tolerance)
    return StarVerdict::on_cut;
  // The three cuts are radial rays, so every off-cut point is reachable from
  // the origin along its own ray; there is no "behind a cut" region on this
  // sheet.  The verdict is kept for interface completeness.
  return StarVerdict::inside;
}

}  // namespace heun
