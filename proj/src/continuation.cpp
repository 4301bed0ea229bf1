#include "heun/continuation.hpp"

#include <algorithm>
#include <cmath>

namespace heun {

double element_radius_limit(const HeunParams& p, cplx z0) {
  const double d = std::min({std::abs(z0), std::abs(z0 - 1.0), std::abs(z0 - p.a)});
  return kElementRadiusSafety * d;
}

CircularElement taylor_element(const HeunParams& p, cplx z0, cplx H0, cplx dH0, int N) {
  if (N < 2) raise(errc::bad_argument, "element order too small");
  const double dmin = std::min({std::abs(z0), std::abs(z0 - 1.0), std::abs(z0 - p.a)});
  if (dmin < 1e-10) raise(errc::singular_center, "element center at a singular point");

  // z(z-1)(z-a), the H' polynomial and alpha*beta*z - q, expanded in u = z - z0.
  const cplx a = p.a, g = p.gamma, de = p.delta, ep = p.epsilon;
  const cplx A0 = z0 * (z0 - 1.0) * (z0 - a);
  const cplx A1 = 3.0 * z0 * z0 - 2.0 * (1.0 + a) * z0 + a;
  const cplx A2 = 3.0 * z0 - (1.0 + a);
  const cplx A3 = 1.0;
  const cplx gde = g + de + ep;
  const cplx lin = g * (1.0 + a) + de * a + ep;
  const cplx B0 = gde * z0 * z0 - lin * z0 + g * a;
  const cplx B1 = 2.0 * gde * z0 - lin;
  const cplx B2 = gde;
  const cplx C0 = p.alpha * p.beta * z0 - p.q;
  const cplx C1 = p.alpha * p.beta;

  CircularElement e;
  e.center = z0;
  e.radius = element_radius_limit(p, z0);
  e.coeffs.resize(N + 1);
  e.coeffs[0] = H0;
  e.coeffs[1] = dH0;
  for (int m = 0; m + 2 <= N; ++m) {
    const double md = static_cast<double>(m);
    const cplx hm1 = e.coeffs[m + 1];
    const cplx hm0 = e.coeffs[m];
    const cplx hmm = (m >= 1) ? e.coeffs[m - 1] : cplx(0.0);
    const cplx num = (A1 * (md + 1.0) * md + B0 * (md + 1.0)) * hm1 +
                     (A2 * md * (md - 1.0) + B1 * md + C0) * hm0 +
                     (A3 * (md - 1.0) * (md - 2.0) + B2 * (md - 1.0) + C1) * hmm;
    e.coeffs[m + 2] = -num / (A0 * (md + 2.0) * (md + 1.0));
  }
  return e;
}

ElementEval eval_element(const CircularElement& e, cplx z, double tol) {
  const cplx u = z - e.center;
  ElementEval out;
  if (std::abs(u) > e.radius * (1.0 + 1e-12))
    raise(errc::out_of_disk, "evaluation point outside the element radius");

  cplx H = 0.0, dH = 0.0, up = 1.0, up_prev = 0.0;
  double tau = 0.0, tau_prev = 0.0;
  int small_run = 0;
  for (std::size_t m = 0; m < e.coeffs.size(); ++m) {
    H += e.coeffs[m] * up;
    if (m >= 1) dH += static_cast<double>(m) * e.coeffs[m] * up_prev;
    tau_prev = tau;
    tau = std::abs(e.coeffs[m]) * std::abs(up);
    if (tau < tol * std::max(std::abs(H), 1e-300))
      ++small_run;
    else
      small_run = 0;
    if (small_run >= 4 && m > 20) {
      double ratio = (tau_prev > 0.0 && tau > 0.0) ? tau / tau_prev : 0.5;
      ratio = std::min(ratio, 0.97);
      out.err_est = tau * ratio / (1.0 - ratio);
      out.converged = true;
      break;
    }
    up_prev = up;
    up *= u;
  }
  out.H = H;
  out.dH = dH;
  if (!out.converged) out.err_est = std::max(tau, tau_prev);
  return out;
}

namespace {

cplx nearest_on_ray(cplx z, cplx anchor, cplx dir) {
  const double t = std::max(((z - anchor) * std::conj(dir)).real(), 0.0);
  return anchor + t * dir;
}

// Nearest point among the singular points {1, a} and the active cuts.
cplx nearest_obstacle(cplx z, const HeunParams& p, const BranchCuts& cuts,
                      bool cut_zero_active) {
  cplx best = 1.0;
  double dbest = std::abs(z - 1.0);
  const auto consider = [&](cplx pt) {
    const double d = std::abs(z - pt);
    if (d < dbest) {
      dbest = d;
      best = pt;
    }
  };
  consider(p.a);
  consider(nearest_on_ray(z, 1.0, 1.0));
  consider(nearest_on_ray(z, p.a, p.a / std::abs(p.a)));
  if (cut_zero_active) consider(nearest_on_ray(z, 0.0, -1.0));
  return best;
}

}  // namespace

std::vector<cplx> march_segment(const HeunParams& p, const BranchCuts& cuts,
                                bool cut_zero_active, cplx from, cplx to) {
  std::vector<cplx> centers;
  centers.push_back(from);
  cplx c = from;
  for (int k = 0; k < kMaxWaypoints; ++k) {
    const double r = element_radius_limit(p, c);
    const double gap = std::abs(to - c);
    if (gap <= kOverlapStride * r) return centers;

    const cplx d = (to - c) / gap;
    double fwd = std::min(kOverlapStride * r, gap);
    cplx next = c + fwd * d;

    // Detour: when the march comes within 0.05 of a singular point or an
    // active cut, push the waypoint perpendicular to the march, away from
    // the obstacle, shortening the stride so the overlap rule still holds.
    const cplx obstacle = nearest_obstacle(next, p, cuts, cut_zero_active);
    if (std::abs(next - obstacle) < kDetourTrigger) {
      const double perp = std::imag((next - obstacle) * std::conj(d));
      const double side = (perp >= 0.0) ? 1.0 : -1.0;
      const double off = kDetourOffsetFactor * r;
      fwd = std::sqrt(std::max((kOverlapStride * r) * (kOverlapStride * r) - off * off,
                               0.0625 * r * r));
      fwd = std::min(fwd, gap);
      next = c + fwd * d + side * off * (cplx(0.0, 1.0) * d);
    }

    if (in_star_domain(next, cuts, cut_zero_active) != StarVerdict::inside)
      raise(errc::on_cut, "continuation path touched a branch cut");
    centers.push_back(next);
    c = next;
  }
  raise(errc::non_convergence, "continuation path did not reach the target");
}

PathPlan plan_path(const HeunParams& p, cplx z, const BranchCuts& cuts,
                   bool active_cut_zero) {
  switch (in_star_domain(z, cuts, active_cut_zero)) {
    case StarVerdict::on_cut:
      raise(errc::target_on_cut, "target lies on an active branch cut");
    case StarVerdict::outside_sheet:
      raise(errc::target_outside_sheet, "target not on the principal sheet");
    case StarVerdict::inside:
      break;
  }

  PathPlan plan;
  plan.target = z;
  plan.cut_zero_active = active_cut_zero;
  const double m = std::min(1.0, std::abs(p.a));
  if (std::abs(z) < kDirectSeriesFactor * m) {
    plan.start = z;
    plan.direct = true;
    return plan;
  }
  plan.start = kStartRadiusFactor * m * std::exp(cplx(0.0, std::arg(z)));
  plan.waypoints = march_segment(p, cuts, active_cut_zero, plan.start, z);
  return plan;
}

ContResult continue_along(const HeunParams& p, const PathPlan& plan, cplx H, cplx dH,
                          double tol) {
  if (!std::isfinite(H.real()) || !std::isfinite(H.imag()) || !std::isfinite(dH.real()) ||
      !std::isfinite(dH.imag()))
    raise(errc::bad_argument, "seed values must be finite");

  ContResult out;
  out.H = H;
  out.dH = dH;
  if (plan.direct || plan.waypoints.empty()) {
    if (std::abs(plan.target - plan.start) > 1e-14 * std::max(1.0, std::abs(plan.target)))
      raise(errc::bad_argument, "direct plan with a displaced target needs no continuation");
    return out;
  }

  for (std::size_t k = 0; k < plan.waypoints.size(); ++k) {
    const cplx c = plan.waypoints[k];
    const cplx next = (k + 1 < plan.waypoints.size()) ? plan.waypoints[k + 1] : plan.target;
    int order = 64;
    for (;;) {
      const CircularElement e = taylor_element(p, c, out.H, out.dH, order);
      const ElementEval ev = eval_element(e, next, tol);
      if (ev.converged) {
        out.H = ev.H;
        out.dH = ev.dH;
        out.err_est += ev.err_est;
        break;
      }
      if (order >= kElementMaxOrder)
        raise(errc::non_convergence, "element series did not converge at cap order");
      order = std::min(order * 2, kElementMaxOrder);
    }
  }
  return out;
}

}  // namespace heun
