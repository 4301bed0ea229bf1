#pragma once

#include "heun/params.hpp"

namespace heun {

// Independent ground truth for the library: a high-order Taylor-step complex
// ODE integrator for the Heun equation.  It shares the derivation with the
// continuation module but none of the code: local expansions are produced by
// polynomial Taylor shifts and power-series division instead of the
// closed-form ordinary-point recurrence.
//
// Shipped (not test-only) so the CLI can offer --verify cross-checks.

struct OracleResult {
  cplx H{0.0}, dH{0.0};
  double err_est = 0.0;
};

inline constexpr int kOracleOrder = 20;
inline constexpr double kOracleStepFraction = 0.4;
inline constexpr double kOracleSegmentClearance = 1e-3;

// Integrates along the straight segment [z_from, z_to] from the seed (H, dH).
// The segment must stay >= 1e-3 away from {0, 1, a}.  Local error per step is
// kept <= tol; the global err_est is a step-halving Richardson comparison
// (the half-step result is returned).
OracleResult integrate(const HeunParams& p, cplx z_from, cplx H, cplx dH, cplx z_to,
                       double tol);

// Fixed-step core used by integrate(); exposed so tests can measure the
// convergence order directly.  No step-size control beyond the fraction.
OracleResult integrate_fixed(const HeunParams& p, cplx z_from, cplx H, cplx dH,
                             cplx z_to, double step_fraction, int order);

}  // namespace heun
