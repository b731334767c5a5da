#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "critmed/constants.hpp"
#include "critmed/errors.hpp"
#include "critmed/master_equation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace critmed;

namespace {

using C = std::complex<double>;

// Element-wise Lindblad generator with jump operators s_m (emission) and
// s_m^dagger (absorption); states indexed by bits (1 = excited), emitter 1
// the high bit, |ee> first.
DensityMatrix rhs_oracle(const RateMatrix& g, double n, const DensityMatrix& rho) {
  auto lower = [](int m) {
    DensityMatrix s = DensityMatrix::Zero();
    const int bit = m == 0 ? 2 : 1;
    for (int state = 0; state < 4; ++state) {
      const int occ = 3 - state;  // bit pattern of excitations
      if (occ & bit) s(3 - (occ & ~bit), state) = 1.0;
    }
    return s;
  };
  const DensityMatrix s[2] = {lower(0), lower(1)};
  DensityMatrix out = DensityMatrix::Zero();
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < 2; ++k) {
      const DensityMatrix& a = s[m];
      const DensityMatrix b = s[k].adjoint();
      const DensityMatrix ad = s[m].adjoint();
      const DensityMatrix bd = s[k];
      out += 0.5 * g(m, k) * (n + 1) *
             (2.0 * a * rho * b - b * a * rho - rho * b * a);
      out += 0.5 * g(m, k) * n * (2.0 * ad * rho * bd - bd * ad * rho - rho * bd * ad);
    }
  return out;
}

DensityMatrix random_state(std::mt19937_64& g) {
  std::normal_distribution<double> N;
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = C(N(g), N(g));
  DensityMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

CollectiveRates rates(double inc, double coh) {
  CollectiveRates c;
  c.incoherent = inc;
  c.coherent = coh;
  c.ratio = 1.0 + coh / inc;
  return c;
}

ThermalContext with_occupation(double n) {
  ThermalContext tc;
  tc.occupation = n;
  return tc;
}

}  // namespace

TEST_SUITE("master_equation") {

TEST_CASE("right-hand side matches the explicit Lindblad sum") {
  auto g = oracle::rng(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double inc = 0.1 + 3.0 * U(g), coh = inc * (2.0 * U(g) - 1.0);
    const RateMatrix gm = rate_matrix(rates(inc, coh));
    CHECK(gm(0, 0) == inc);
    CHECK(gm(0, 1) == coh);
    const double n = 20.0 * U(g);
    const DensityMatrix rho = random_state(g);
    const DensityMatrix d = master_equation_rhs(gm, n, rho) - rhs_oracle(gm, n, rho);
    CHECK(d.cwiseAbs().maxCoeff() < 1e-12 * (2 * n + 1) * inc);
    // Trace preserving and Hermiticity preserving.
    const DensityMatrix r = master_equation_rhs(gm, n, rho);
    CHECK(std::abs(r.trace()) < 1e-12 * (2 * n + 1) * inc);
    CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * (2 * n + 1) * inc);
  }
}

TEST_CASE("named states") {
  CHECK(TwoEmitterState::both_excited().population_ee() == 1.0);
  CHECK(TwoEmitterState::ground().population_gg() == 1.0);
  CHECK(TwoEmitterState::symmetric().population_symmetric() == doctest::Approx(1.0));
  CHECK(TwoEmitterState::antisymmetric().population_symmetric() == doctest::Approx(0.0));
  const auto th = TwoEmitterState::thermal(3.0);
  CHECK(th.population_ee() == doctest::Approx(9.0 / 49.0));
  CHECK(th.rho().trace().real() == doctest::Approx(1.0));
  DensityMatrix bad = DensityMatrix::Zero();
  bad(0, 0) = 2.0;
  bad(3, 3) = -1.0;
  CHECK_THROWS_AS(TwoEmitterState{bad}, InvalidArgument);
  bad = DensityMatrix::Zero();
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(TwoEmitterState{bad}, InvalidArgument);
  bad = TwoEmitterState::symmetric().rho();
  bad(1, 2) += C(0.0, 0.1);
  CHECK_THROWS_AS(TwoEmitterState{bad}, InvalidArgument);
}

TEST_CASE("trajectories stay physical") {
  auto g = oracle::rng(42);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double inc = 0.5 + U(g), coh = inc * (1.9 * U(g) - 0.95), n = 15.0 * U(g);
    const RateMatrix gm = rate_matrix(rates(inc, coh));
    const ThermalContext tc = with_occupation(n);
    const TwoEmitterState start(random_state(g));
    const double dt = recommended_step(gm, tc);
    const auto traj = master_equation_evolve(gm, tc, start, 400 * dt, dt, 10);
    CHECK(traj.states.size() == 41);
    for (const auto& rho : traj.states) {
      CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
      CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
  }
}

TEST_CASE("fitted symmetric decay matches (2n+1)(G_I + G_C)") {
  auto g = oracle::rng(43);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double inc = 0.5 + 2.0 * U(g), coh = inc * (1.8 * U(g) - 0.8), n = 25.0 * U(g);
    const CollectiveRates cr = rates(inc, coh);
    const RateMatrix gm = rate_matrix(cr);
    const ThermalContext tc = with_occupation(n);
    const double expected = symmetric_decay_rate(cr, tc);
    const double window = 0.005 / expected;
    const double dt = window / 200.0;
    const auto traj = master_equation_evolve(gm, tc, TwoEmitterState::symmetric(), window, dt);
    const double fitted = fitted_symmetric_decay(traj, window);
    CAPTURE(n);
    CAPTURE(coh / inc);
    CHECK(std::abs(fitted / expected - 1.0) < 0.01);
    CHECK(symmetric_population_check(traj, cr, tc) <= 1e-6 * expected);
  }
}

TEST_CASE("thermal state is stationary and reached from any start") {
  const double n = bose_occupation(constants::angular_frequency(450e-6), 342.0);
  const ThermalContext tc = with_occupation(n);
  for (double c : {0.0, 0.5, -0.7}) {
    const CollectiveRates cr = rates(1.0, c);
    const RateMatrix gm = rate_matrix(cr);
    const TwoEmitterState th = TwoEmitterState::thermal(n);
    CHECK(master_equation_rhs(gm, n, th.rho()).cwiseAbs().maxCoeff() < 1e-12 * (2 * n + 1));

    // Slowest relaxation (2n+1)(1-|c|); run well past it.
    const double t_end = 30.0 / ((2 * n + 1) * (1.0 - std::abs(c)));
    const double dt = recommended_step(gm, tc);
    const auto traj = master_equation_evolve(gm, tc, TwoEmitterState::ground(), t_end, dt, 1000);
    const DensityMatrix& ss = traj.states.back();
    CAPTURE(c);
    CHECK((ss - th.rho()).cwiseAbs().maxCoeff() < 1e-6);
    // Detailed balance between neighbouring excitation numbers.
    const double ratio = n / (n + 1.0);
    CHECK(std::abs(ss(0, 0).real() - ratio * ss(1, 1).real()) < 1e-6);
    CHECK(std::abs(ss(2, 2).real() - ratio * ss(3, 3).real()) < 1e-6);
  }
}

TEST_CASE("zero temperature relaxes to the ground state; the dark state survives") {
  const ThermalContext cold = with_occupation(0.0);
  const RateMatrix gm = rate_matrix(rates(1.0, 1.0));
  const auto traj = master_equation_evolve(gm, cold, TwoEmitterState::antisymmetric(), 5.0, 0.005);
  CHECK(traj.states.back()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-9));
  const auto sup = master_equation_evolve(gm, cold, TwoEmitterState::symmetric(), 5.0, 0.005);
  CHECK(sup.states.back()(3, 3).real() == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-6));
}

TEST_CASE("invalid inputs") {
  const ThermalContext tc = with_occupation(1.0);
  RateMatrix bad;
  bad << 1.0, 0.2, 0.3, 1.0;
  CHECK_THROWS_AS(master_equation_evolve(bad, tc, TwoEmitterState::ground(), 1.0, 0.01),
                  InvalidArgument);
  bad << 1.0, 1.5, 1.5, 1.0;
  CHECK_THROWS_AS(master_equation_evolve(bad, tc, TwoEmitterState::ground(), 1.0, 0.01),
                  InvalidArgument);
  const RateMatrix ok = rate_matrix(rates(1.0, 0.5));
  CHECK_THROWS_AS(master_equation_evolve(ok, tc, TwoEmitterState::ground(), 1.0, 0.0),
                  InvalidArgument);
  // A step far beyond stability blows up and is reported.
  CHECK_THROWS_AS(master_equation_evolve(ok, with_occupation(50.0), TwoEmitterState::ground(),
                                         100.0, 1.0),
                  IntegrationFailure);
}

}  // TEST_SUITE
