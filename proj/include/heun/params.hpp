#pragma once

#include "heun/types.hpp"

namespace heun {

// Parameters of Heun's equation in the standard form
//
//   H''(z) + (gamma/z + delta/(z-1) + epsilon/(z-a)) H'(z)
//          + (alpha*beta*z - q) / (z(z-1)(z-a)) H(z) = 0,
//
// with regular singular points 0, 1, a, infinity.  epsilon is always derived
// from the Fuchsian relation alpha+beta+1 = gamma+delta+epsilon; it is never
// accepted as input, so the constraint holds by construction.
struct HeunParams {
  cplx a;        // third finite singular point, a not in {0, 1}
  cplx q;        // accessory parameter
  cplx alpha, beta, gamma, delta;
  cplx epsilon;  // alpha + beta + 1 - gamma - delta
};

// Rejects a within 1e-12 of {0, 1} and any non-finite input.
HeunParams make_params(cplx a, cplx q, cplx alpha, cplx beta, cplx gamma, cplx delta);

// Same parameters with another gamma; epsilon is re-derived.
HeunParams with_gamma(const HeunParams& p, cplx gamma);

// Index transform [0-][1+][a+][inf-]:  HeunS(p; z) = z^{1-gamma} HeunL(T p; z)
// with q' = q - (gamma-1)(epsilon + a delta), alpha' = alpha - gamma + 1,
// beta' = beta - gamma + 1, gamma' = 2 - gamma.  Involution; epsilon unchanged.
HeunParams index_transform(const HeunParams& p);

// Classification of gamma relative to the degenerate sets Z<=0 and {1}.
// The "at" variants require distance below 1e-14; the "near" variants cover
// the rest of the open radius-1/2 vicinities, which matches the support of
// the cutoff blend.  Everything else is regular.
struct GammaClass {
  enum class Kind { regular, near_nonpositive, at_nonpositive, near_one, at_one };
  Kind kind = Kind::regular;
  int n_star = 0;           // nearest non-positive integer is -n_star
  cplx offset{0.0};         // gamma minus the class anchor integer
  double dist_nonpositive = 0.0;  // dist(gamma, Z<=0)
  double dist_one = 0.0;          // |gamma - 1|
};

inline constexpr double kAtIntegerTol = 1e-14;
inline constexpr double kVicinityRadius = 0.5;

GammaClass classify_gamma(cplx gamma);

// The fixed branch cuts: B1 = (1, +inf), B_a = a + t e^{i arg a} (t >= 0),
// B0 = (-inf, 0).  All three are radial rays, so the star domain is the
// plane minus the active rays.  B0 participates only when the routed
// evaluation involves log(z) or z^{1-gamma} with non-integer gamma.
struct BranchCuts {
  cplx a;
  double on_cut_tolerance = 1e-12;

  static BranchCuts for_params(const HeunParams& p) { return BranchCuts{p.a}; }

  double dist_cut_one(cplx z) const;
  double dist_cut_a(cplx z) const;
  double dist_cut_zero(cplx z) const;
  double min_active_dist(cplx z, bool cut_zero_active) const;
};

enum class StarVerdict { inside, on_cut, outside_sheet };

StarVerdict in_star_domain(cplx z, const BranchCuts& cuts, bool needs_cut_zero);

}  // namespace heun
