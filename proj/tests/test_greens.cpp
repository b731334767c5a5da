#include <cmath>
#include <numbers>
#include <random>

#include "critmed/errors.hpp"
#include "critmed/greens.hpp"
#include "critmed/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace critmed;
using std::numbers::pi;

namespace {

complex to_d(oracle::cld v) { return {double(v.real()), double(v.imag())}; }
double rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

QuadratureConfig tight() {
  QuadratureConfig q;
  q.rel_tol = 1e-10;
  return q;
}

sommerfeld::Kernel lib(oracle::Kernel k) {
  return k == oracle::Kernel::Trace ? sommerfeld::Kernel::Trace : sommerfeld::Kernel::TmZz;
}

}  // namespace

TEST_SUITE("greens") {

TEST_CASE("J0 against the long double series") {
  for (double u = 0.0; u <= 20.0; u += 0.0625) {
    CAPTURE(u);
    CHECK(std::abs(bessel_j0(u) - double(oracle::j0_series(u))) < 5e-12);
  }
  CHECK(bessel_j0(10.0) == doctest::Approx(-0.2459357644513483).epsilon(1e-15));
  CHECK_THROWS_AS(bessel_j0(NAN), InvalidArgument);
}

TEST_CASE("J0 zeros") {
  CHECK(bessel_j0_zero(1) == doctest::Approx(2.404825557695773).epsilon(1e-15));
  double prev = 0.0;
  for (int m = 1; m <= 200; ++m) {
    const double z = bessel_j0_zero(m);
    CAPTURE(m);
    // |J0'| ~ sqrt(2 / (pi z)), so allow for a root error of a few ulps of z.
    CHECK(std::abs(oracle::j0_any(z)) < 1e-15 * z + 1e-15);
    if (m > 1) CHECK(std::abs(z - prev - pi) < 0.1);
    prev = z;
  }
  CHECK_THROWS_AS(bessel_j0_zero(0), InvalidArgument);
}

TEST_CASE("fresnel coefficients against long double formulas") {
  auto g = oracle::rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const complex eps(-1e3 + 2e3 * U(g), std::pow(10.0, -6.0 + 9.0 * U(g)));
    const double q = 5.0 * U(g);
    const oracle::cld e(eps.real(), eps.imag());
    CHECK(rel(fresnel_te(q, eps), to_d(oracle::r_te(q, e))) < 1e-12);
    CHECK(rel(fresnel_tm(q, eps), to_d(oracle::r_tm(q, e))) < 1e-12);
  }
}

TEST_CASE("fresnel limits") {
  for (double q : {0.0, 0.3, 0.99, 1.5, 40.0}) {
    CHECK(std::abs(fresnel_te(q, complex(1.0, 0.0))) < 1e-15);
    CHECK(std::abs(fresnel_tm(q, complex(1.0, 0.0))) < 1e-15);
  }
  // Normal incidence: the two polarizations differ only by sign.
  const complex eps(4.0, 0.0);
  CHECK(rel(fresnel_te(0.0, eps), {-1.0 / 3.0, 0.0}) < 1e-15);
  CHECK(rel(fresnel_tm(0.0, eps), {1.0 / 3.0, 0.0}) < 1e-15);
  // Brewster angle of a lossless dielectric.
  for (double er : {1.5, 2.75, 9.0, 80.0}) {
    const double qb = std::sqrt(er / (er + 1.0));
    CHECK(std::abs(fresnel_tm(qb, complex(er, 0.0))) < 1e-14);
  }
  // Near-perfect conductor.
  const complex pec(-1e10, 1e10);
  for (double q : {0.0, 0.5, 0.9, 3.0}) {
    CHECK(std::abs(fresnel_te(q, pec) + 1.0) < 1e-4);
    CHECK(std::abs(fresnel_tm(q, pec) - 1.0) < 1e-4);
  }
  CHECK_THROWS_AS(fresnel_te(-0.1, eps), InvalidArgument);
}

TEST_CASE("passive media do not amplify propagating waves") {
  auto g = oracle::rng(22);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const complex eps(-100.0 + 200.0 * U(g), 10.0 * U(g));
    const double q = U(g);
    CHECK(std::abs(fresnel_te(q, eps)) <= 1.0 + 1e-12);
    CHECK(std::abs(fresnel_tm(q, eps)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("free-space closed forms") {
  for (double x : {0.0, 0.05, 0.1, 0.3, 0.7, 2.3}) {
    const EmitterGeometry geo(x, 1.0, 450e-6);
    const double u = 2.0 * pi * x;
    const complex g0 = trace_g0(geo);
    const double sinc = u == 0.0 ? 1.0 : std::sin(u) / u;
    CHECK(g0.imag() == doctest::Approx(sinc / (2.0 * pi)).epsilon(1e-14));
    if (x > 0.0) CHECK(g0.real() == doctest::Approx(std::cos(u) / (2.0 * pi * u)).epsilon(1e-14));
    else CHECK(g0.real() == 0.0);
    CHECK(trace_g0_integral(geo, tight()).value.imag() ==
          doctest::Approx(g0.imag()).epsilon(1e-10));
    CHECK(sommerfeld::free_propagating(sommerfeld::Kernel::Trace, u, tight()).value ==
          doctest::Approx(sinc).epsilon(1e-10));
    CHECK(sommerfeld::free_propagating(sommerfeld::Kernel::TmZz, u, tight()).value ==
          doctest::Approx(oracle::coherent_free(u) / 1.5).epsilon(1e-10));
  }
}

TEST_CASE("reflection vanishes for a vacuum half-space") {
  const SurfaceResponse vac({1.0, 0.0}, 4e12);
  const EmitterGeometry geo(0.3, 0.01, 450e-6);
  CHECK(std::abs(trace_gsca(geo, vac, {}).value) < 1e-15);
  CHECK(purcell_tm_integral(0.01, vac, tight()).value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(coherent_tm_integral(0.1, 0.01, vac, tight()).value ==
        doctest::Approx(oracle::coherent_free(0.2 * pi)).epsilon(1e-10));
}

TEST_CASE("raw integrands match the oracle kernels") {
  const complex eps(-10.0, 1.0);
  const oracle::cld e(-10.0L, 1.0L);
  const double X = 1.3, Z = 0.2;
  for (double th : {0.1, 0.7, 1.5}) {
    const double q = std::sin(th);
    const complex want = q * oracle::j0_any(q * X) *
                         oracle::kernel_value(oracle::Kernel::Trace, q, e) *
                         std::exp(complex(0.0, 2.0 * Z * std::cos(th)));
    CHECK(rel(sommerfeld::propagating_integrand(sommerfeld::Kernel::Trace, th, X, Z, eps), want) <
          1e-12);
  }
  for (double k : {0.01, 0.33, 4.0, 50.0}) {
    const double q = std::sqrt(1.0 + k * k);
    const complex want = complex(0.0, -1.0) * oracle::j0_any(q * X) * std::exp(-2.0 * k * Z) *
                         oracle::kernel_value(oracle::Kernel::TmZz, q, e);
    CHECK(rel(sommerfeld::evanescent_integrand(sommerfeld::Kernel::TmZz, k, X, Z, eps), want) <
          1e-12);
  }
}

TEST_CASE("reflected integrals against brute force") {
  struct Case {
    oracle::Kernel k;
    complex eps;
    double x, z;
  };
  const Case cases[] = {
      {oracle::Kernel::Trace, {-10.0, 1.0}, 0.1, 0.01},
      {oracle::Kernel::TmZz, {-10.0, 1.0}, 0.7, 0.03},
      {oracle::Kernel::Trace, {12.0, 0.5}, 0.0, 0.05},
      {oracle::Kernel::TmZz, {2.75, 0.2}, 0.4, 0.2},
  };
  for (const auto& c : cases) {
    const double X = 2.0 * pi * c.x, Z = 2.0 * pi * c.z;
    const complex want = oracle::brute_reflected(c.k, X, Z, c.eps, 200001);
    const auto got = sommerfeld::reflected(lib(c.k), X, Z, c.eps, tight());
    CAPTURE(c.eps);
    CAPTURE(c.x);
    CAPTURE(c.z);
    CHECK(rel(got.value, want) < 1e-8);
    CHECK(std::abs(got.value - want) <= got.error_estimate + 1e-12 * std::abs(want));
  }
}

TEST_CASE("reflected trace regression value") {
  const auto r = sommerfeld::reflected(sommerfeld::Kernel::Trace, 0.2 * pi, 0.02 * pi,
                                       {-10.0, 1.0}, {});
  const complex gsca = complex(0.0, 1.0 / (4.0 * pi)) * r.value;
  const auto direct = trace_gsca(EmitterGeometry(0.1, 0.01, 450e-6),
                                 SurfaceResponse({-10.0, 1.0}, 4e12), {});
  CHECK(rel(direct.value, gsca) < 1e-7);
  CHECK(rel(direct.value, {-0.57669363361, 0.0871125248669}) < 1e-7);
}

TEST_CASE("far from the surface the reflection dies out") {
  const SurfaceResponse s({-30.0, 5.0}, 4e12);
  const auto near = purcell_tm_integral(0.05, s, {});
  const auto far = purcell_tm_integral(60.0, s, {});
  CHECK(std::abs(near.value - 1.0) > 0.1);
  CHECK(std::abs(far.value - 1.0) < 1e-2);
}

TEST_CASE("perfect-mirror limit of the perpendicular dipole") {
  const SurfaceResponse mirror({-1e9, 1e9}, 4e12);
  for (double z : {0.02, 0.1, 0.25, 0.6}) {
    const double u = 4.0 * pi * z;
    const double want = 1.0 + 3.0 * (std::sin(u) / (u * u * u) - std::cos(u) / (u * u));
    CAPTURE(z);
    CHECK(purcell_tm_integral(z, mirror, tight()).value == doctest::Approx(want).epsilon(1e-3));
  }
}

TEST_CASE("coincident points reduce the coherent rate to the incoherent one") {
  const SurfaceResponse s({-100.0, 900.0}, 4e12);
  for (double z : {1e-3, 1e-2, 0.1}) {
    CHECK(coherent_tm_integral(0.0, z, s, {}).value ==
          doctest::Approx(purcell_tm_integral(z, s, {}).value).epsilon(1e-7));
  }
}

TEST_CASE("deep near field converges for metallic and composite surfaces") {
  for (complex eps : {complex(-113440.0, 1097544.0), complex(55.0, 0.11), complex(-10.0, 1.0)}) {
    for (double x : {0.0, 0.1, 0.7}) {
      const EmitterGeometry geo(x, 1e-4, 450e-6);
      const auto r = trace_gsca(geo, SurfaceResponse(eps, geo.omega0()), {});
      CAPTURE(eps);
      CAPTURE(x);
      CHECK(std::isfinite(std::abs(r.value)));
      CHECK(r.error_estimate <= 1e-8 * std::abs(r.value) * 1.01);
    }
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(EmitterGeometry(-0.1, 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(EmitterGeometry(0.1, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(EmitterGeometry(0.1, 0.1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(SurfaceResponse({2.0, -1.0}, 1.0), InvalidArgument);
  QuadratureConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("adaptive quadrature on known integrals") {
  const double bp[] = {0.0, 1.0};
  bool ok = false;
  auto r = integrate_adaptive<double>([](double t) { return std::sqrt(t); }, bp, tight(), &ok);
  CHECK(ok);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  std::vector<double> many;
  for (int i = 0; i <= 32; ++i) many.push_back(i * pi);
  auto c = integrate_adaptive<complex>(
      [](double t) { return std::exp(complex(0.0, t)) * std::exp(-0.01 * t); }, many, tight(), &ok);
  const complex want = (1.0 - std::exp(complex(-0.01, 1.0) * 32.0 * pi)) / complex(0.01, -1.0);
  CHECK(ok);
  CHECK(rel(c.value, want) < 1e-12);
  QuadratureConfig starved = tight();
  starved.max_subdivisions = 1;
  integrate_adaptive<double>([](double t) { return 1.0 / std::sqrt(t + 1e-12); }, bp, starved, &ok);
  CHECK_FALSE(ok);
}

}  // TEST_SUITE
