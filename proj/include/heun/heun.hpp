#pragma once

#include "heun/frobenius.hpp"
#include "heun/params.hpp"

namespace heun {

// Single-valued local Heun functions on the star domain with the fixed cuts.
//
// heunl: HeunL(0) = 1 normalization; plain series for gamma off Z<=0, the
// logarithmic representation (A = 0 convention) at gamma in Z<=0, analytic
// continuation elsewhere.  For 1e-14 <= dist(gamma, Z<=0) < 0.05 the result
// is still returned but err_est carries the 1/dist cancellation factor; the
// regularized module is the intended entry point there.
//
// heuns: z^{1-gamma} HeunL(transformed; z) for gamma != 1 (principal branch,
// cut B0), the gamma = 1 logarithmic representation (B = 0 convention) at
// gamma = 1; gamma within 1e-14 of {2, 3, ...} raises pole_at_gamma.
EvalResult heunl(const HeunParams& p, cplx z, double tol = 1e-12);
EvalResult heuns(const HeunParams& p, cplx z, double tol = 1e-12);

inline constexpr double kNearPoleThreshold = 0.05;

}  // namespace heun
