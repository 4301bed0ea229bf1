#pragma once

#include <functional>

#include "heun/heun.hpp"

namespace heun {

// Configuration of the regularization layer.  The cutoff half-width is fixed
// at 1/2 so the blend support and the gamma classification stay consistent.
struct RegConfig {
  double near_threshold = 0.05;  // below: contour evaluation, above: direct blend
  double contour_radius = 0.25;
  int quadrature_nodes = 64;     // uniform on the circle, doubled on self-check failure
};

// C-infinity cutoff: 1 for r <= 0, 0 for r >= 1/2,
// exp(1/(2r) + 1/(2r-1)) / (1 + exp(...)) in between.
double rho(double r);

// HeunL with the gamma-smooth redefinition near Z<=0:
//   dist(gamma, Z<=0) >= 1/2          -> HeunL itself (same code path)
//   near_threshold <= |gamma+n*| < 1/2 -> HeunL - K/(gamma+n*) rho(|gamma+n*|) HeunS
//   |gamma+n*| < near_threshold        -> Cauchy contour of the analytic core
//                                         HeunL - K/(gamma'+n*) HeunS on
//                                         |gamma'+n*| = contour_radius
EvalResult heunl_reg(const HeunParams& p, cplx z, const RegConfig& cfg = {},
                     double tol = 1e-12);

// z^{1-gamma} HeunL_reg(transformed; z); analytic in gamma except the
// C-infinity vicinities of {2, 3, 4, ...}.
EvalResult heuns_ring(const HeunParams& p, cplx z, const RegConfig& cfg = {},
                      double tol = 1e-12);

// The regularized second function:
//   |gamma-1| >= 1/2                  -> heuns_ring (same code path)
//   near_threshold <= |gamma-1| < 1/2 -> rho (ring - HeunL)/(1-gamma) + (1-rho) ring
//   |gamma-1| < near_threshold        -> contour of (ring - HeunL)/(1-gamma')
EvalResult heuns_reg(const HeunParams& p, cplx z, const RegConfig& cfg = {},
                     double tol = 1e-12);

// Trapezoidal Cauchy evaluation on a circle: (1/2 pi i) oint f(g')/(g'-g) dg'
// sampled at `nodes` uniform points, with one automatic node doubling when
// the self-check fails.  Exposed for the cross-branch consistency tests.
EvalResult cauchy_disc(cplx center, double radius, int nodes, cplx gamma_eval,
                       const std::function<EvalResult(cplx)>& f, double tol);

}  // namespace heun
