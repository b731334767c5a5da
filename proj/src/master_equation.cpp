#include "critmed/master_equation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "critmed/errors.hpp"

namespace critmed {

namespace {

using Matrix2c = Eigen::Matrix2cd;

// Lowering operators for emitter 1 and emitter 2 on the product basis.
const std::array<DensityMatrix, 2>& lowering() {
  static const std::array<DensityMatrix, 2> ops = [] {
    Matrix2c s = Matrix2c::Zero();
    s(1, 0) = 1.0;  // |g><e|
    const Matrix2c id = Matrix2c::Identity();
    auto kron = [](const Matrix2c& a, const Matrix2c& b) {
      DensityMatrix k;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
      return k;
    };
    return std::array<DensityMatrix, 2>{kron(s, id), kron(id, s)};
  }();
  return ops;
}

DensityMatrix pure(const Eigen::Vector4cd& psi) { return psi * psi.adjoint(); }

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TwoEmitterState::TwoEmitterState(const DensityMatrix& rho, double tol) : rho_(rho) {
  if (!rho.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw InvalidArgument("density matrix trace != 1");
  if (min_eigenvalue(0.5 * (rho + rho.adjoint())) < -tol)
    throw InvalidArgument("density matrix is not positive semidefinite");
}

TwoEmitterState TwoEmitterState::both_excited() {
  return TwoEmitterState(pure(Eigen::Vector4cd::Unit(0)));
}

TwoEmitterState TwoEmitterState::ground() {
  return TwoEmitterState(pure(Eigen::Vector4cd::Unit(3)));
}

TwoEmitterState TwoEmitterState::symmetric() {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
  return TwoEmitterState(pure(psi));
}

TwoEmitterState TwoEmitterState::antisymmetric() {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return TwoEmitterState(pure(psi));
}

TwoEmitterState TwoEmitterState::thermal(double n) {
  if (!(n >= 0.0)) throw InvalidArgument("occupation must be >= 0");
  const double pe = n / (2.0 * n + 1.0);
  const double pg = (n + 1.0) / (2.0 * n + 1.0);
  DensityMatrix rho = DensityMatrix::Zero();
  rho(0, 0) = pe * pe;
  rho(1, 1) = rho(2, 2) = pe * pg;
  rho(3, 3) = pg * pg;
  return TwoEmitterState(rho);
}

double TwoEmitterState::population_symmetric() const {
  return 0.5 * (rho_(1, 1) + rho_(2, 2) + rho_(1, 2) + rho_(2, 1)).real();
}

RateMatrix rate_matrix(const CollectiveRates& cr) {
  RateMatrix g;
  g << cr.incoherent, cr.coherent, cr.coherent, cr.incoherent;
  return g;
}

DensityMatrix master_equation_rhs(const RateMatrix& gamma, double n, const DensityMatrix& rho) {
  const auto& s = lowering();
  DensityMatrix out = DensityMatrix::Zero();
  for (int m = 0; m < 2; ++m) {
    for (int k = 0; k < 2; ++k) {
      const double g = 0.5 * gamma(m, k);
      if (g == 0.0) continue;
      const DensityMatrix& sm = s[m];
      const DensityMatrix skd = s[k].adjoint();
      const DensityMatrix smd = sm.adjoint();
      const DensityMatrix emit = skd * sm;  // sigma_k^dag sigma_m
      out += (n + 1.0) * g * (2.0 * sm * rho * skd - emit * rho - rho * emit);
      const DensityMatrix absorb = s[k] * smd;  // sigma_k sigma_m^dag
      out += n * g * (2.0 * smd * rho * s[k] - absorb * rho - rho * absorb);
    }
  }
  return out;
}

double recommended_step(const RateMatrix& gamma, const ThermalContext& tc) {
  return 0.01 / ((2.0 * tc.occupation + 1.0) * gamma.cwiseAbs().maxCoeff());
}

Trajectory master_equation_evolve(const RateMatrix& gamma, const ThermalContext& tc,
                                  const TwoEmitterState& rho0, double t_end, double dt,
                                  int record_every) {
  if (!gamma.allFinite() || gamma(0, 1) != gamma(1, 0))
    throw InvalidArgument("rate matrix must be finite and symmetric");
  if (gamma(0, 0) != gamma(1, 1) || !(gamma(0, 0) > 0.0))
    throw InvalidArgument("rate matrix needs equal positive diagonal entries");
  if (std::abs(gamma(0, 1)) > gamma(0, 0))
    throw InvalidArgument("rate matrix is not positive semidefinite");
  if (!(dt > 0.0) || !(t_end >= 0.0) || !std::isfinite(t_end))
    throw InvalidArgument("need dt > 0 and t_end >= 0");
  if (record_every < 1) throw InvalidArgument("record_every must be >= 1");

  const double n = tc.occupation;
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;

  Trajectory traj;
  DensityMatrix rho = rho0.rho();
  traj.times.push_back(0.0);
  traj.states.push_back(rho);
  auto f = [&](const DensityMatrix& r) { return master_equation_rhs(gamma, n, r); };
  for (long i = 1; i <= steps; ++i) {
    const DensityMatrix k1 = f(rho);
    const DensityMatrix k2 = f(rho + 0.5 * h * k1);
    const DensityMatrix k3 = f(rho + 0.5 * h * k2);
    const DensityMatrix k4 = f(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint()).eval();

    if (!rho.allFinite()) throw IntegrationFailure("master equation: state is not finite");
    if (std::abs(rho.trace() - 1.0) > 1e-6)
      throw IntegrationFailure("master equation: trace drift exceeds 1e-6; reduce dt");
    if (min_eigenvalue(rho) < -1e-6)
      throw IntegrationFailure("master equation: positivity lost; reduce dt");
    if (i % record_every == 0 || i == steps) {
      traj.times.push_back(static_cast<double>(i) * h);
      traj.states.push_back(rho);
    }
  }
  return traj;
}

double symmetric_population_check(const Trajectory& traj, const CollectiveRates& cr,
                                  const ThermalContext& tc) {
  const std::size_t m = traj.states.size();
  if (m < 5) throw InvalidArgument("trajectory needs at least 5 samples");
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs(traj.times[i] - traj.times[i - 1] - h) > 1e-9 * h)
      throw InvalidArgument("trajectory samples must be uniform");
  const double n = tc.occupation;
  const double total = cr.incoherent + cr.coherent;
  auto ss = [&](std::size_t i) {
    const auto& r = traj.states[i];
    return 0.5 * (r(1, 1) + r(2, 2) + r(1, 2) + r(2, 1)).real();
  };
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < m; ++i) {
    const double deriv = (ss(i - 2) - 8.0 * ss(i - 1) + 8.0 * ss(i + 1) - ss(i + 2)) / (12.0 * h);
    const auto& r = traj.states[i];
    const double rhs =
        total * (n * r(3, 3).real() + (n + 1.0) * r(0, 0).real() - (2.0 * n + 1.0) * ss(i));
    worst = std::max(worst, std::abs(deriv - rhs));
  }
  return worst;
}

double fitted_symmetric_decay(const Trajectory& traj, double t_max) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < traj.states.size() && traj.times[i] <= t_max; ++i) {
    const auto& r = traj.states[i];
    const double p = 0.5 * (r(1, 1) + r(2, 2) + r(1, 2) + r(2, 1)).real();
    if (!(p > 0.0)) break;
    const double t = traj.times[i];
    const double y = std::log(p);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++count;
  }
  if (count < 3) throw InvalidArgument("fit window holds fewer than 3 samples");
  const double denom = count * sxx - sx * sx;
  return -(count * sxy - sx * sy) / denom;
}

}  // namespace critmed
