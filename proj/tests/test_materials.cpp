#include <complex>
#include <random>

#include "critmed/constants.hpp"
#include "critmed/errors.hpp"
#include "critmed/materials.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace critmed;
using oracle::cld;

namespace {

double rel(complex a, complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
complex to_d(cld v) { return {double(v.real()), double(v.imag())}; }

std::string data(const char* name) { return std::string(CRITMED_TEST_DATA_DIR) + "/" + name; }

const double kOmega450 = constants::angular_frequency(450e-6);

}  // namespace

TEST_SUITE("materials") {

TEST_CASE("drude matches long double evaluation") {
  const double wp = 1.37e16, g = 4.05e13;
  const DrudeParams p(wp, g);
  for (double w : {1e11, 4.2e12, 1e14, 3e15, 2e16}) {
    CHECK(rel(drude_permittivity(w, p), to_d(oracle::drude(w, wp, g))) < 1e-14);
    CHECK(drude_permittivity(w, p).imag() > 0.0);
  }
}

TEST_CASE("drude-lorentz matches long double evaluation") {
  const std::vector<LorentzTerm> t{{1.6e16, 1.3e16, 1e14}, {6.6e13, 1.3e14, 5.7e12}};
  const DrudeLorentzParams p(t);
  std::vector<oracle::Oscillator> o;
  for (auto& x : t) o.push_back({x.strength, x.resonance, x.damping});
  for (double w : {1e11, 4.2e12, 1.3e14, 1e15, 1.3e16}) {
    CHECK(rel(drude_lorentz_permittivity(w, p), to_d(oracle::drude_lorentz(w, o))) < 1e-13);
    CHECK(drude_lorentz_permittivity(w, p).imag() > 0.0);
  }
  // A zero-frequency resonance is a Drude term.
  const DrudeLorentzParams free_electrons({{1e16, 0.0, 1e14}});
  CHECK(rel(drude_lorentz_permittivity(3e14, free_electrons),
            drude_permittivity(3e14, DrudeParams(1e16, 1e14))) < 1e-14);
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS(DrudeParams(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(DrudeParams(1.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(DrudeLorentzParams({}), InvalidArgument);
  CHECK_THROWS_AS(DrudeLorentzParams({{1.0, -1.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(drude_permittivity(0.0, DrudeParams(1.0, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(TabulatedPermittivity(std::vector<TabulatedPoint>{{1.0, {2.0, 0.0}}}), InvalidArgument);
  CHECK_THROWS_AS(TabulatedPermittivity({{2.0, {2.0, 0.0}}, {1.0, {2.0, 0.0}}}), InvalidArgument);
  CHECK_THROWS_AS(TabulatedPermittivity({{1.0, {2.0, -0.1}}, {2.0, {2.0, 0.0}}}), InvalidArgument);
}

TEST_CASE("tabulated permittivity interpolates linearly without extrapolating") {
  const TabulatedPermittivity t({{1.0, {2.0, 0.0}}, {3.0, {4.0, 2.0}}, {4.0, {1.0, 1.0}}});
  CHECK(tabulated_permittivity(1.0, t) == complex(2.0, 0.0));
  CHECK(tabulated_permittivity(3.0, t) == complex(4.0, 2.0));
  CHECK(rel(tabulated_permittivity(2.0, t), {3.0, 1.0}) < 1e-15);
  CHECK(rel(tabulated_permittivity(3.5, t), {2.5, 1.5}) < 1e-15);
  CHECK_THROWS_AS(tabulated_permittivity(0.5, t), OutOfRange);
  CHECK_THROWS_AS(tabulated_permittivity(4.5, t), OutOfRange);
}

TEST_CASE("json round trip and errors") {
  const MaterialModel gold = MaterialModel::load(data("materials/gold_drude.json"));
  CHECK(!gold.source().empty());
  const MaterialModel again = MaterialModel::from_json_text(gold.to_json_text());
  CHECK(again.permittivity(kOmega450) == gold.permittivity(kOmega450));
  CHECK(again.source() == gold.source());

  const MaterialModel tab = MaterialModel::from_json_text(
      R"({"model":"tabulated","table":[{"omega":1,"eps_re":2,"eps_im":0},{"omega":2,"eps_re":3,"eps_im":1}]})");
  CHECK(rel(tab.permittivity(1.5), {2.5, 0.5}) < 1e-15);

  CHECK_THROWS_AS(MaterialModel::from_json_text("{"), ConfigError);
  CHECK_THROWS_AS(MaterialModel::from_json_text(R"({"model":"debye"})"), ConfigError);
  CHECK_THROWS_AS(MaterialModel::from_json_text(R"({"model":"drude","plasma_frequency":1})"),
                  ConfigError);
  CHECK_THROWS_AS(MaterialModel::load("/nonexistent/material.json"), IoError);
}

TEST_CASE("shipped configs at 450 um") {
  const complex au = MaterialModel::load(data("materials/gold_drude.json")).permittivity(kOmega450);
  const complex ps =
      MaterialModel::load(data("materials/polystyrene_drude_lorentz.json")).permittivity(kOmega450);
  CHECK(au.real() < -1e5);
  CHECK(au.imag() > 1e6);
  CHECK(ps.real() == doctest::Approx(2.75).epsilon(0.01));
  CHECK(ps.imag() > 0.0);
  CHECK(ps.imag() < 1e-2);
}

TEST_CASE("bruggeman boundary identities") {
  const complex a(2.75, 3.5e-4), b(-1.13e5, 1.1e6);
  for (double L : {0.1, 1.0 / 3.0, 0.25, 0.8}) {
    CHECK(rel(bruggeman_solve(a, b, 0.0, L).value, a) < 1e-12);
    CHECK(rel(bruggeman_solve(a, b, 1.0, L).value, b) < 1e-12);
  }
  CHECK(rel(bruggeman_solve(a, a, 0.4, 0.2).value, a) < 1e-12);
}

TEST_CASE("bruggeman exchange symmetry and literal residual over random inputs") {
  auto g = oracle::rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 400; ++i) {
    const complex a(-50.0 + 100.0 * U(g), std::pow(10.0, -3.0 + 5.0 * U(g)));
    const complex b(-1e4 + 2e4 * U(g), std::pow(10.0, -3.0 + 7.0 * U(g)));
    const double f = 0.01 + 0.98 * U(g);
    const double L = 0.05 + 0.9 * U(g);
    const auto e = bruggeman_solve(a, b, f, L);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(f);
    CAPTURE(L);
    CHECK(e.value.imag() > 0.0);
    CHECK(e.residual <= kBruggemanTolerance);
    const double lit = double(oracle::bruggeman_literal_residual(a, b, f, L, e.value));
    CHECK(lit <= kBruggemanTolerance);
    const auto swapped = bruggeman_solve(b, a, 1.0 - f, L);
    CHECK(rel(swapped.value, e.value) < 1e-9);
  }
}

TEST_CASE("depolarization 1/3 reduces to the spherical quadratic") {
  auto g = oracle::rng(12);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const complex a(1.0 + 20.0 * U(g), std::pow(10.0, -4.0 + 4.0 * U(g)));
    const complex b(-1e5 * U(g), std::pow(10.0, -2.0 + 8.0 * U(g)));
    const double f = U(g);
    const complex want = to_d(oracle::bruggeman_sphere(a, b, f));
    CAPTURE(f);
    CHECK(rel(bruggeman_solve(a, b, f, 1.0 / 3.0).value, want) < 1e-9);
  }
  // Shipped constituents right at the threshold.
  const complex a(2.750253, 3.465e-4), b(-113440.0, 1097544.0);
  CHECK(rel(bruggeman_solve(a, b, 1.0 / 3.0, 1.0 / 3.0).value,
            to_d(oracle::bruggeman_sphere(a, b, 1.0L / 3.0L))) < 1e-9);
}

TEST_CASE("bruggeman is continuous in f across the threshold") {
  const complex a(2.750253, 3.465e-4), b(-113440.0, 1097544.0);
  const int n = 10000;
  std::vector<complex> e(n + 1);
  for (int k = 0; k <= n; ++k) e[k] = bruggeman_solve(a, b, double(k) / n, 1.0 / 3.0).value;
  int jumps = 0;
  for (int k = 1; k + 1 < n; ++k) {
    const double step = std::abs(e[k + 1] - e[k]);
    const double neighbours = std::max(std::abs(e[k] - e[k - 1]), std::abs(e[k + 2] - e[k + 1]));
    if (step > 3.0 * neighbours + 1e-9 * std::abs(e[k])) ++jumps;
  }
  CHECK(jumps == 0);
}

TEST_CASE("lossless constituents pick the physical branch") {
  // Below threshold the metal-dielectric mixture stays dielectric (Im -> 0+),
  // above it the Im > 0 root of the quadratic is selected.
  const complex a(2.0, 0.0), b(-5.0, 0.0);
  for (double f : {0.1, 0.3, 0.5, 0.9}) {
    const complex got = bruggeman_solve(a, b, f, 1.0 / 3.0).value;
    // Vanishing-loss limit of the oracle.
    const oracle::cld la(2.0L, 1e-12L), lb(-5.0L, 1e-12L);
    const complex want = to_d(oracle::bruggeman_sphere(la, lb, f));
    CAPTURE(f);
    CHECK(got.imag() >= 0.0);
    CHECK(std::abs(got - want) < 1e-6 * std::abs(want));
  }
}

TEST_CASE("bruggeman argument errors") {
  CHECK_THROWS_AS(bruggeman_solve({2, 0}, {3, 0}, -0.1, 0.3), InvalidArgument);
  CHECK_THROWS_AS(bruggeman_solve({2, 0}, {3, 0}, 1.1, 0.3), InvalidArgument);
  CHECK_THROWS_AS(bruggeman_solve({2, 0}, {3, 0}, 0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(bruggeman_solve({2, 0}, {3, 0}, 0.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bruggeman_solve({2, -1}, {3, 0}, 0.5, 0.3), InvalidArgument);
  CHECK_THROWS_AS(bruggeman_solve({NAN, 0}, {3, 0}, 0.5, 0.3), InvalidArgument);
}

TEST_CASE("composite spec goes through the material models") {
  const MaterialModel host = MaterialModel::load(data("materials/polystyrene_drude_lorentz.json"));
  const MaterialModel incl = MaterialModel::load(data("materials/gold_drude.json"));
  const CompositeSpec spec(host, incl, 0.2, 1.0 / 3.0);
  const auto direct = bruggeman_solve(host.permittivity(kOmega450), incl.permittivity(kOmega450),
                                      0.2, 1.0 / 3.0);
  CHECK(bruggeman_solve(spec, kOmega450).value == direct.value);
  CHECK_THROWS_AS(CompositeSpec(host, incl, 1.5, 0.3), InvalidArgument);
}

}  // TEST_SUITE
