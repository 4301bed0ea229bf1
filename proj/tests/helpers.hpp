#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "heun/params.hpp"

namespace testutil {

using heun::cplx;

inline double rel_diff(cplx got, cplx want) {
  return std::abs(got - want) / std::max({std::abs(got), std::abs(want), 1e-300});
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  cplx disk(double radius) {
    const double r = std::sqrt(uniform(0.0, 1.0)) * radius;
    return r * std::exp(cplx(0.0, uniform(-std::numbers::pi, std::numbers::pi)));
  }
  cplx box(double re_lo, double re_hi, double im_lo, double im_hi) {
    return {uniform(re_lo, re_hi), uniform(im_lo, im_hi)};
  }
};

// Random parameter draw matching the acceptance corpus shape: |a| in [0.5,3],
// moduli of q, alpha, beta, delta up to 5, gamma kept a margin away from the
// degenerate integers.
inline heun::HeunParams random_params(Rng& rng, double gamma_margin = 0.01) {
  for (;;) {
    const double ra = rng.uniform(0.5, 3.0);
    const cplx a = ra * std::exp(cplx(0.0, rng.uniform(-std::numbers::pi, std::numbers::pi)));
    if (std::abs(a) < 0.1 || std::abs(a - 1.0) < 0.1) continue;
    cplx gamma;
    for (;;) {
      gamma = rng.box(-3.4, 2.4, -1.0, 1.0);
      const heun::GammaClass gc = heun::classify_gamma(gamma);
      const double dmin = std::min({gc.dist_nonpositive, gc.dist_one,
                                    std::abs(gamma - 2.0), std::abs(gamma - 3.0)});
      if (dmin >= gamma_margin) break;
    }
    return heun::make_params(a, rng.disk(5.0), rng.disk(5.0), rng.disk(5.0), gamma,
                             rng.disk(5.0));
  }
}

// z clear of all three cuts and singular points, with the radial seed segment
// equally clear.  Segments squeezing past 1 or a where the local exponent
// grows strongly are rejected: the dominant/recessive amplification there
// exceeds what double precision can transport.
inline cplx random_star_z(Rng& rng, const heun::HeunParams& p, double margin = 0.05) {
  const heun::BranchCuts cuts = heun::BranchCuts::for_params(p);
  for (int tries = 0; tries < 2000; ++tries) {
    const cplx z = rng.uniform(0.15, 2.0) *
                   std::exp(cplx(0.0, rng.uniform(-std::numbers::pi, std::numbers::pi)));
    if (cuts.min_active_dist(z, true) < margin) continue;
    if (std::abs(z - 1.0) < margin || std::abs(z - p.a) < margin) continue;
    const cplx d = z / std::abs(z);
    const auto seg_clear = [&](cplx w) {
      const double t = std::clamp((w * std::conj(d)).real(), 0.0, std::abs(z));
      return std::abs(w - t * d);
    };
    const double c1 = seg_clear(1.0), ca = seg_clear(p.a);
    if (c1 < 5e-3 || ca < 5e-3) continue;
    const double amp =
        std::max(std::pow(std::min(c1, 1.0), -std::max(0.0, p.delta.real() - 1.0)),
                 std::pow(std::min(ca, 1.0), -std::max(0.0, p.epsilon.real() - 1.0)));
    if (amp > 3e3) continue;
    return z;
  }
  throw std::runtime_error("no safe z found");
}

// Parameter set of the reference gamma-surface sweeps (gamma varies).
inline heun::HeunParams figure_params(cplx gamma) {
  return heun::make_params(cplx(1.0, 1.0), 0.3, cplx(1.4, 0.9), 1.1, gamma, 6.7);
}

// log(z - w) continued along a chain of nearby points.
inline cplx cont_log(const std::vector<cplx>& pts, cplx w) {
  cplx L = std::log(pts.front() - w);
  for (std::size_t k = 1; k < pts.size(); ++k)
    L += std::log((pts[k] - w) / (pts[k - 1] - w));
  return L;
}

inline std::vector<cplx> chain(cplx from, cplx to, int steps) {
  std::vector<cplx> pts;
  for (int k = 0; k <= steps; ++k)
    pts.push_back(from + (to - from) * (static_cast<double>(k) / steps));
  return pts;
}

}  // namespace testutil
