#include "heun/heun.hpp"

#include <algorithm>
#include <cmath>

#include "heun/continuation.hpp"

namespace heun {

namespace {

SeriesLocal build_series(const HeunParams& p, SeriesKind kind, int n_star, int N) {
  switch (kind) {
    case SeriesKind::plain: return coeffs_plain(p, N);
    case SeriesKind::log_nonpositive: return coeffs_log_nonpositive(p, n_star, N);
    case SeriesKind::log_gamma_one: return coeffs_log_gamma_one(p, N);
  }
  raise(errc::bad_argument, "unknown series kind");
}

// Sums the local series at z, growing the order until the stopping rule fires.
SumResult sum_adaptive(const HeunParams& p, SeriesKind kind, int n_star, cplx z,
                       double tol) {
  int N = std::max(80, n_star + 20);
  for (;;) {
    const SeriesLocal s = build_series(p, kind, n_star, N);
    const SumResult r = sum_series(s, z, tol);
    if (r.converged) return r;
    if (N >= kSeriesMaxTerms)
      raise(errc::non_convergence, "local series did not converge within the term cap");
    N = std::min(2 * N, kSeriesMaxTerms);
  }
}

// Shared evaluation pipeline: local series inside the trusted disk, series
// seed at z* plus chained Taylor elements elsewhere.
EvalResult evaluate_local_solution(const HeunParams& p, SeriesKind kind, int n_star,
                                   cplx z, double tol, bool needs_cut_zero) {
  const BranchCuts cuts = BranchCuts::for_params(p);
  switch (in_star_domain(z, cuts, needs_cut_zero)) {
    case StarVerdict::on_cut:
      raise(errc::on_cut, "z lies on an active branch cut");
    case StarVerdict::outside_sheet:
      raise(errc::outside_sheet, "z not on the principal sheet");
    case StarVerdict::inside:
      break;
  }

  EvalResult out;
  const double m = std::min(1.0, std::abs(p.a));
  if (std::abs(z) < kDirectSeriesFactor * m) {
    const SumResult r = sum_adaptive(p, kind, n_star, z, tol);
    out.value = r.H;
    out.derivative = r.dH;
    out.err_est = r.err_est;
    return out;
  }

  const PathPlan plan = plan_path(p, z, cuts, needs_cut_zero);
  const SumResult seed = sum_adaptive(p, kind, n_star, plan.start, tol);
  const ContResult c = continue_along(p, plan, seed.H, seed.dH, tol);
  out.value = c.H;
  out.derivative = c.dH;
  out.err_est = seed.err_est + c.err_est;
  out.flags.path_elements = static_cast<int>(plan.waypoints.size());
  return out;
}

}  // namespace

EvalResult heunl(const HeunParams& p, cplx z, double tol) {
  const GammaClass gc = classify_gamma(p.gamma);

  if (gc.kind == GammaClass::Kind::at_nonpositive) {
    const HeunParams pf = with_gamma(p, cplx(-static_cast<double>(gc.n_star), 0.0));
    SeriesLocal probe = coeffs_log_nonpositive(pf, gc.n_star, gc.n_star + 2);
    const bool needs_cut_zero = probe.log_constant != cplx(0.0);
    EvalResult out = evaluate_local_solution(pf, SeriesKind::log_nonpositive, gc.n_star,
                                             z, tol, needs_cut_zero);
    out.flags.used_log_case = true;
    return out;
  }

  EvalResult out = evaluate_local_solution(p, SeriesKind::plain, 0, z, tol, false);
  if (gc.kind == GammaClass::Kind::near_nonpositive &&
      gc.dist_nonpositive < kNearPoleThreshold) {
    // Answering policy near the pole: the two local solutions nearly cancel
    // against the 1/dist blow-up, so rounding is amplified accordingly.
    out.err_est += std::abs(out.value) * 1e-16 / gc.dist_nonpositive;
  }
  return out;
}

EvalResult heuns(const HeunParams& p, cplx z, double tol) {
  const GammaClass gc = classify_gamma(p.gamma);

  if (gc.kind == GammaClass::Kind::at_one) {
    const HeunParams pf = with_gamma(p, 1.0);
    EvalResult out =
        evaluate_local_solution(pf, SeriesKind::log_gamma_one, 0, z, tol, true);
    out.flags.used_log_case = true;
    return out;
  }

  // Poles of the index transform: gamma in {2, 3, 4, ...}.
  const long mround = std::lround(p.gamma.real());
  if (mround >= 2 && std::abs(p.gamma - static_cast<double>(mround)) < kAtIntegerTol)
    raise(errc::pole_at_gamma, "HeunS is singular at integer gamma >= 2",
          static_cast<int>(mround));

  // The prefactor z^{1-gamma} needs the cut B0 regardless of gamma.
  const BranchCuts cuts = BranchCuts::for_params(p);
  if (cuts.dist_cut_zero(z) < cuts.on_cut_tolerance)
    raise(errc::on_cut, "HeunS needs z off the branch cut B0");

  const HeunParams pt = index_transform(p);
  const EvalResult inner = heunl(pt, z, tol);
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

}  // namespace heun
