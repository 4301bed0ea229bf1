#include <cstring>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "heun/oracle.hpp"
#include "heun/regular.hpp"

using heun::cplx;
using testutil::rel_diff;

namespace {

bool bitwise_equal(const heun::EvalResult& a, const heun::EvalResult& b) {
  return std::memcmp(&a.value, &b.value, sizeof a.value) == 0 &&
         std::memcmp(&a.derivative, &b.derivative, sizeof a.derivative) == 0;
}

}  // namespace

TEST_SUITE("regular") {

TEST_CASE("cutoff branch values and identities") {
  CHECK(heun::rho(-0.1) == 1.0);
  CHECK(heun::rho(0.7) == 0.0);
  CHECK(heun::rho(0.0) == 1.0);
  CHECK(heun::rho(0.5) == 0.0);
  CHECK(std::abs(heun::rho(0.25) - 0.5) <= 1e-15);
  for (int k = 1; k < 1000; ++k) {
    const double r = 0.5 * k / 1000.0;
    CHECK(std::abs(heun::rho(r) + heun::rho(0.5 - r) - 1.0) <= 1e-14);
  }
  // exponential flatness near 0+
  const double dev = 1.0 - heun::rho(0.05);
  CHECK(dev > 1e-5);
  CHECK(dev < 2e-4);
}

TEST_CASE("identity region is the same code path") {
  // gamma = 0.6 sits outside every vicinity
  const heun::HeunParams p06 = testutil::figure_params(0.6);
  CHECK(bitwise_equal(heun::heunl_reg(p06, cplx(0.0, 1.0)),
                      heun::heunl(p06, cplx(0.0, 1.0))));

  testutil::Rng rng(61);
  for (int i = 0; i < 60; ++i) {
    const heun::HeunParams p = testutil::random_params(rng);
    const heun::GammaClass gc = heun::classify_gamma(p.gamma);
    cplx z;
    try {
      z = testutil::random_star_z(rng, p, 0.06);
    } catch (const std::exception&) {
      continue;
    }
    if (gc.dist_nonpositive >= 0.5)
      CHECK(bitwise_equal(heun::heunl_reg(p, z), heun::heunl(p, z)));
    if (gc.dist_one >= 0.5)
      CHECK(bitwise_equal(heun::heuns_reg(p, z), heun::heuns_ring(p, z)));
  }
}

TEST_CASE("mid-band value agrees with a contour reconstruction") {
  // gamma = -1 + 0.3: the direct-blend branch versus rho-blend of a Cauchy
  // evaluation of the analytic core on |gamma' + 1| = 0.4.
  const heun::HeunParams p = testutil::figure_params(-0.7);
  const cplx z(0.0, 1.0);
  const heun::EvalResult direct = heun::heunl_reg(p, z);

  const cplx K = heun::residue_K(p, 1);
  const auto core = [&](cplx g) {
    const heun::HeunParams pg = heun::with_gamma(p, g);
    const heun::EvalResult L = heun::heunl(pg, z, 1e-13);
    const heun::EvalResult S = heun::heuns(pg, z, 1e-13);
    heun::EvalResult r;
    r.value = L.value - K / (g + 1.0) * S.value;
    r.derivative = L.derivative - K / (g + 1.0) * S.derivative;
    return r;
  };
  const heun::EvalResult c =
      heun::cauchy_disc(cplx(-1.0), 0.4, 64, p.gamma, core, 1e-12);
  const double rb = heun::rho(std::abs(p.gamma + 1.0));
  const heun::EvalResult L = heun::heunl(p, z);
  const cplx blended = rb * c.value + (1.0 - rb) * L.value;
  CHECK(std::abs(direct.value - blended) <= 1e-8 * std::max(1.0, std::abs(direct.value)));
}

TEST_CASE("finite limit at the integers with z-independent free constant") {
  const int ns = 1;
  const heun::HeunParams p = testutil::figure_params(-1.0);
  const heun::SeriesLocal s = heun::coeffs_log_nonpositive(p, ns, 200);

  cplx A_ref = 0.0;
  bool first = true;
  for (const cplx z :
       {cplx(0.20, 0.0), cplx(0.15, 0.10), cplx(0.10, 0.20), cplx(-0.05, 0.20),
        cplx(0.25, -0.10)}) {
    const heun::EvalResult reg = heun::heunl_reg(p, z);
    CHECK(reg.flags.used_contour);
    cplx cpart = 0.0, spart = 0.0, zp = 1.0;
    for (std::size_t n = 0; n < s.coeff_main.size(); ++n, zp *= z) {
      cpart += s.coeff_main[n] * zp;
      spart += s.coeff_aux[n] * zp;
    }
    const cplx A = (reg.value - cpart - s.log_constant * std::log(z) * spart) / spart;
    if (first) {
      A_ref = A;
      first = false;
    } else {
      CHECK(std::abs(A - A_ref) <= 1e-7 * std::max(1.0, std::abs(A_ref)));
    }
  }
}

TEST_CASE("heuns_ring routing") {
  const heun::HeunParams phalf = testutil::figure_params(0.5);
  const cplx z(0.3, 0.2);
  CHECK(bitwise_equal(heun::heuns_ring(phalf, z), heun::heuns(phalf, z)));

  const heun::HeunParams p2 = testutil::figure_params(2.0);
  CHECK_THROWS_AS((void)heun::heuns(p2, z), heun::Error);
  const heun::EvalResult reg2 = heun::heuns_ring(p2, z);
  CHECK(std::isfinite(reg2.value.real()));
  CHECK(reg2.flags.used_contour);

  const heun::HeunParams p23 = testutil::figure_params(2.3);
  const heun::EvalResult ring = heun::heuns_ring(p23, z);
  const heun::EvalResult inner = heun::heunl_reg(heun::index_transform(p23), z);
  const cplx expect = std::pow(z, 1.0 - p23.gamma) * inner.value;
  CHECK(rel_diff(ring.value, expect) < 1e-12);
}

TEST_CASE("heuns_reg routing and the gamma=1 limit") {
  const cplx z(0.3, 0.0);
  const heun::HeunParams p17 = testutil::figure_params(1.7);
  CHECK(bitwise_equal(heun::heuns_reg(p17, z), heun::heuns_ring(p17, z)));

  const heun::HeunParams p1 = testutil::figure_params(1.0);
  const heun::EvalResult reg = heun::heuns_reg(p1, z);
  CHECK(std::isfinite(reg.value.real()));
  CHECK(reg.flags.used_contour);

  // independence from heunl at gamma = 1
  const heun::EvalResult L = heun::heunl(p1, z);
  const cplx W = L.value * reg.derivative - L.derivative * reg.value;
  CHECK(std::abs(W) > 1e-8);
}

TEST_CASE("gamma=1 limit reproduces the d-series with B = 0") {
  // the limit of (ring - heunl)/(1-gamma) has exactly the
  // log z * HeunL + sum d_n z^n structure of the B = 0 convention
  const heun::HeunParams p1 = testutil::figure_params(1.0);
  const heun::SeriesLocal d = heun::coeffs_log_gamma_one(p1, 200);
  for (const cplx z : {cplx(0.2, 0.0), cplx(0.1, 0.15), cplx(-0.05, 0.25)}) {
    const heun::EvalResult reg = heun::heuns_reg(p1, z);
    const heun::EvalResult L = heun::heunl(p1, z);
    cplx dpart = 0.0, zp = 1.0;
    for (std::size_t n = 0; n < d.coeff_main.size(); ++n, zp *= z)
      dpart += d.coeff_main[n] * zp;
    const cplx B = (reg.value - dpart - std::log(z) * L.value) / L.value;
    CHECK(std::abs(B) < 1e-6);
  }
}

TEST_CASE("smooth across gamma = 1") {
  const cplx z(0.0, 1.0);
  const heun::EvalResult lo = heun::heuns_reg(testutil::figure_params(1.0 - 1e-4), z);
  const heun::EvalResult hi = heun::heuns_reg(testutil::figure_params(1.0 + 1e-4), z);
  const double scale = std::max(std::abs(lo.value), std::abs(hi.value));
  CHECK(std::abs(lo.value - hi.value) < 1e-3 * scale);
}

TEST_CASE("seam continuity at the vicinity boundary") {
  // just inside the circle |gamma + n*| = 1/2 the blend correction must have
  // already decayed to nothing, so both sides reduce to heunl
  const cplx z(0.0, 1.0);
  for (const cplx g : {cplx(-0.5 + 1e-6, 0.0), cplx(-0.5 - 1e-6, 0.0),
                       cplx(-1.5 + 1e-6, 0.0), cplx(-1.0, 0.5 - 1e-6)}) {
    const heun::HeunParams p = testutil::figure_params(g);
    const heun::EvalResult reg = heun::heunl_reg(p, z);
    const heun::EvalResult plain = heun::heunl(p, z);
    const double scale = std::max(std::abs(plain.value), 1.0);
    CHECK(std::abs(reg.value - plain.value) < 1e-8 * scale);
  }
}

TEST_CASE("bounded near the pole while heunl diverges") {
  const cplx z(0.0, 1.0);
  double reg_max = 0.0;
  for (int k = 0; k < 8; ++k) {
    const cplx g = -2.0 + 0.05 * std::exp(cplx(0.0, k * std::numbers::pi / 4.0));
    reg_max = std::max(reg_max, std::abs(heun::heunl_reg(testutil::figure_params(g), z).value));
  }
  const double reg_ref =
      std::abs(heun::heunl_reg(testutil::figure_params(-2.0 + 0.1), z).value);
  CHECK(reg_max <= 10.0 * reg_ref);

  const double unreg =
      std::abs(heun::heunl(testutil::figure_params(-2.0 + 1e-3), z).value);
  CHECK(unreg > 100.0 * reg_max);
}

TEST_CASE("regularized limit stays independent of heuns") {
  const cplx z(0.2, 0.3);
  const heun::HeunParams p = testutil::figure_params(-1.0);
  const heun::EvalResult reg = heun::heunl_reg(p, z);
  const heun::EvalResult S = heun::heuns(p, z);
  const cplx W = reg.value * S.derivative - reg.derivative * S.value;
  CHECK(std::abs(W) > 1e-6);
}

TEST_CASE("gamma-division regularization degenerates to a multiple of heuns") {
  // (gamma + n*) HeunL -> K HeunS as gamma -> -n*, which carries the same
  // content as dividing by Gamma(gamma): the limit is proportional to HeunS,
  // hence degenerate, unlike the cutoff-blend limit.
  const int ns = 1;
  const cplx z1(0.2, 0.3), z2(0.15, -0.22);
  const heun::HeunParams p = testutil::figure_params(-1.0 + 1e-7);
  const cplx off = p.gamma + static_cast<double>(ns);
  const cplx r1 = off * heun::heunl(p, z1).value / heun::heuns(p, z1).value;
  const cplx r2 = off * heun::heunl(p, z2).value / heun::heuns(p, z2).value;
  CHECK(rel_diff(r1, r2) < 1e-4);  // z-independent ratio = const * HeunS
  const cplx K = heun::residue_K(p, ns);
  CHECK(rel_diff(r1, K) < 1e-4);
}

TEST_CASE("an unresolvable quadrature is reported") {
  // 4 nodes cannot resolve the core on the default radius, and one doubling
  // is not enough either
  const heun::HeunParams p = testutil::figure_params(-1.0);
  heun::RegConfig coarse;
  coarse.quadrature_nodes = 4;
  try {
    (void)heun::heunl_reg(p, cplx(0.0, 1.0), coarse);
    CHECK(false);
  } catch (const heun::Error& e) {
    CHECK(e.code() == heun::errc::quadrature_unresolved);
  }
}

TEST_CASE("contour stability under node doubling and radius change") {
  const heun::HeunParams p = testutil::figure_params(-1.0);
  const cplx z(0.0, 1.0);
  heun::RegConfig c64, c128, c15;
  c128.quadrature_nodes = 128;
  c15.contour_radius = 0.15;
  const heun::EvalResult a = heun::heunl_reg(p, z, c64);
  const heun::EvalResult b = heun::heunl_reg(p, z, c128);
  const heun::EvalResult c = heun::heunl_reg(p, z, c15);
  const double scale = std::max(1.0, std::abs(a.value));
  CHECK(std::abs(a.value - b.value) <= 1e-10 * scale);
  CHECK(std::abs(a.value - c.value) <= 1e-6 * scale);
}

TEST_CASE("regularized outputs solve the equation in z") {
  const cplx z(0.0, 1.0), zs(0.0, 0.25);
  for (const cplx g : {cplx(-1.0 + 0.2, 0.0), cplx(-2.0, 0.0), cplx(1.0, 0.0),
                       cplx(1.2, 0.0), cplx(0.97, 0.02)}) {
    const heun::HeunParams p = testutil::figure_params(g);
    const auto run = [&](auto fn) {
      const heun::EvalResult s = fn(p, zs, heun::RegConfig{}, 1e-12);
      const heun::EvalResult t = fn(p, z, heun::RegConfig{}, 1e-12);
      const heun::OracleResult o = heun::integrate(p, zs, s.value, s.derivative, z, 1e-11);
      CHECK(rel_diff(t.value, o.H) < 1e-8);
    };
    run([](const heun::HeunParams& pp, cplx zz, const heun::RegConfig& cfg, double tol) {
      return heun::heunl_reg(pp, zz, cfg, tol);
    });
    run([](const heun::HeunParams& pp, cplx zz, const heun::RegConfig& cfg, double tol) {
      return heun::heuns_reg(pp, zz, cfg, tol);
    });
  }
}

TEST_CASE("flags record the routing") {
  const cplx z(0.3, 0.2);
  CHECK(heun::heunl(testutil::figure_params(0.0), z).flags.used_log_case);
  CHECK(heun::heunl_reg(testutil::figure_params(0.0), z).flags.used_contour);
  CHECK(heun::heuns(testutil::figure_params(0.5), z).flags.used_index_transform);
  CHECK(!heun::heunl(testutil::figure_params(0.5), z).flags.used_contour);
}

}  // TEST_SUITE
