#include "doctest.h"
#include "helpers.hpp"
#include "heun/frobenius.hpp"
#include "heun/oracle.hpp"

using heun::cplx;
using testutil::rel_diff;

TEST_SUITE("oracle") {

TEST_CASE("constant solution is preserved") {
  const heun::HeunParams p = heun::make_params(cplx(2.0, 0.5), 0.0, 0.0, 1.3, 0.7, -0.4);
  const heun::OracleResult r = heun::integrate(p, 0.1, 1.0, 0.0, cplx(0.4, 0.9), 1e-12);
  CHECK(rel_diff(r.H, cplx(1.0)) < 1e-13);
  CHECK(std::abs(r.dH) < 1e-13);
}

TEST_CASE("forward then backward returns the seed") {
  const heun::HeunParams p = testutil::figure_params(0.5);
  const cplx z0(0.1, 0.05), z1(0.2, 0.4);
  const cplx H0(1.0, -0.25), dH0(0.4, 0.3);
  const heun::OracleResult fwd = heun::integrate(p, z0, H0, dH0, z1, 1e-14);
  const heun::OracleResult back = heun::integrate(p, z1, fwd.H, fwd.dH, z0, 1e-14);
  CHECK(std::abs(back.H - H0) < 1e-12 * std::max(1.0, std::abs(H0)));
  CHECK(std::abs(back.dH - dH0) < 1e-12 * std::max(1.0, std::abs(dH0)));
}

TEST_CASE("linearity in the seed") {
  testutil::Rng rng(41);
  const heun::HeunParams p = testutil::random_params(rng);
  const cplx z0 = 0.2 * std::min(1.0, std::abs(p.a));
  const cplx z1 = testutil::random_star_z(rng, p, 0.08);
  const heun::OracleResult e1 = heun::integrate(p, z0, 1.0, 0.0, z1, 1e-13);
  const heun::OracleResult e2 = heun::integrate(p, z0, 0.0, 1.0, z1, 1e-13);
  const cplx u = rng.disk(2.0), v = rng.disk(2.0);
  const heun::OracleResult mix = heun::integrate(p, z0, u, v, z1, 1e-13);
  const cplx expect = u * e1.H + v * e2.H;
  CHECK(std::abs(mix.H - expect) < 1e-11 * std::max(1.0, std::abs(expect)));
}

TEST_CASE("segment clearance is enforced") {
  const heun::HeunParams p = testutil::figure_params(0.5);
  CHECK_THROWS_AS((void)heun::integrate(p, cplx(0.5, 1e-4), 1.0, 0.0, cplx(1.5, 1e-4), 1e-10),
                  heun::Error);
  try {
    (void)heun::integrate(p, cplx(0.5, 1e-4), 1.0, 0.0, cplx(1.5, 1e-4), 1e-10);
  } catch (const heun::Error& e) {
    CHECK(e.code() == heun::errc::segment_near_singularity);
  }
}

TEST_CASE("step-halving convergence order is at least 10") {
  const heun::HeunParams p = testutil::figure_params(0.5);
  const cplx z0(0.1, 0.0), z1(0.15, 1.3);
  const heun::SeriesLocal s = heun::coeffs_plain(p, 240);
  const heun::SumResult seed = heun::sum_series(s, z0, 1e-15);

  // low order so the fixed-fraction errors rise above rounding
  const heun::OracleResult ref = heun::integrate(p, z0, seed.H, seed.dH, z1, 1e-13);
  const heun::OracleResult c1 =
      heun::integrate_fixed(p, z0, seed.H, seed.dH, z1, 0.40, 12);
  const heun::OracleResult c2 =
      heun::integrate_fixed(p, z0, seed.H, seed.dH, z1, 0.20, 12);
  const double e1 = std::abs(c1.H - ref.H);
  const double e2 = std::abs(c2.H - ref.H);
  REQUIRE(e2 > 0.0);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 10.0);
}

TEST_CASE("abel law for two integrated solutions") {
  testutil::Rng rng(42);
  const heun::HeunParams p = testutil::figure_params(cplx(0.45, 0.2));
  const cplx z0(0.12, 0.03);
  const cplx dir = std::exp(cplx(0.0, 0.9));
  const auto W_at = [&](cplx z) {
    const heun::OracleResult s1 = heun::integrate(p, z0, 1.0, 0.0, z, 1e-13);
    const heun::OracleResult s2 = heun::integrate(p, z0, 0.0, 1.0, z, 1e-13);
    return s1.H * s2.dH - s1.dH * s2.H;
  };
  cplx ref = 0.0;
  bool first = true;
  for (double t : {0.5, 1.0, 1.6}) {
    const cplx z = z0 + t * dir;
    const cplx W = W_at(z);
    const std::vector<cplx> pts = testutil::chain(z0, z, 80);
    const cplx abel = W * std::exp(p.gamma * testutil::cont_log(pts, 0.0) +
                                   p.delta * testutil::cont_log(pts, 1.0) +
                                   p.epsilon * testutil::cont_log(pts, p.a));
    if (first) {
      ref = abel;
      first = false;
    } else {
      CHECK(std::abs(abel - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("err_est reflects the step-halving comparison") {
  const heun::HeunParams p = testutil::figure_params(0.5);
  const heun::SumResult seed =
      heun::sum_series(heun::coeffs_plain(p, 240), cplx(0.1, 0.0), 1e-15);
  const heun::OracleResult loose =
      heun::integrate(p, 0.1, seed.H, seed.dH, cplx(0.0, 1.0), 1e-8);
  const heun::OracleResult tight =
      heun::integrate(p, 0.1, seed.H, seed.dH, cplx(0.0, 1.0), 1e-13);
  CHECK(std::abs(loose.H - tight.H) <= 10.0 * std::max(loose.err_est, 1e-14));
}

}  // TEST_SUITE
