#pragma once

#include <vector>

#include "heun/params.hpp"

namespace heun {

// One Taylor element of a continuation chain: the expansion of a solution
// around an ordinary point z0 with prescribed (H, H') there.  Inside the
// validity radius the element is evaluated by its series and the term-wise
// derivative series.
struct CircularElement {
  cplx center;
  std::vector<cplx> coeffs;  // h_m; h_0 = H(z0), h_1 = H'(z0)
  double radius = 0.0;       // 0.6 * min(|z0|, |z0-1|, |z0-a|)
};

struct PathPlan {
  cplx start{0.0};             // z* = rho e^{i arg z}, or z itself for direct plans
  std::vector<cplx> waypoints; // element centers, starting at start
  cplx target{0.0};
  bool direct = false;         // target inside the trusted series disk
  bool cut_zero_active = false;
};

struct ContResult {
  cplx H{0.0}, dH{0.0};
  double err_est = 0.0;
};

inline constexpr double kElementRadiusSafety = 0.6;
inline constexpr double kOverlapStride = 0.8;
inline constexpr double kStartRadiusFactor = 0.3;  // rho = 0.3 min(1, |a|)
inline constexpr double kDirectSeriesFactor = 0.5;
inline constexpr int kElementMaxOrder = 2000;
inline constexpr int kMaxWaypoints = 10000;
inline constexpr double kDetourTrigger = 0.05;
inline constexpr double kDetourOffsetFactor = 0.2;

// 0.6 * distance from z0 to the nearest of {0, 1, a}.
double element_radius_limit(const HeunParams& p, cplx z0);

// Builds the element by the ordinary-point recurrence: multiply the equation
// by z(z-1)(z-a), expand the polynomial coefficients around z0 and collect
// powers of u = z - z0; h_{m+2} follows from h_{m+1}, h_m, h_{m-1}.
CircularElement taylor_element(const HeunParams& p, cplx z0, cplx H0, cplx dH0, int N);

// Series value/derivative at z plus a geometric tail estimate.  `converged`
// reports whether the truncation rule fired within the stored order.
struct ElementEval {
  cplx H{0.0}, dH{0.0};
  double err_est = 0.0;
  bool converged = false;
};
ElementEval eval_element(const CircularElement& e, cplx z, double tol);

// Element centers along [from, to], spaced by the overlap rule
// |c_{k+1} - c_k| <= 0.8 radius_k, with small perpendicular detours when the
// segment passes within 0.05 of a singular point or an active cut.
std::vector<cplx> march_segment(const HeunParams& p, const BranchCuts& cuts,
                                bool cut_zero_active, cplx from, cplx to);

PathPlan plan_path(const HeunParams& p, cplx z, const BranchCuts& cuts,
                   bool active_cut_zero);

// Carries (H, H') from plan.start to plan.target, one element per waypoint,
// each with adaptive order.  err_est accumulates per-element tail bounds.
ContResult continue_along(const HeunParams& p, const PathPlan& plan, cplx H, cplx dH,
                          double tol);

}  // namespace heun
