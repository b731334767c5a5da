#pragma once

#include <Eigen/Dense>
#include <vector>

#include "critmed/rates.hpp"

namespace critmed {

// Basis order |ee>, |eg>, |ge>, |gg> (emitter 1 first).
using DensityMatrix = Eigen::Matrix4cd;
using RateMatrix = Eigen::Matrix2d;

/// Validated two-emitter density matrix.
class TwoEmitterState {
 public:
  /// Throws InvalidArgument unless rho is Hermitian, unit trace and positive
  /// semidefinite, each within `tol`.
  explicit TwoEmitterState(const DensityMatrix& rho, double tol = 1e-9);

  const DensityMatrix& rho() const noexcept { return rho_; }

  static TwoEmitterState both_excited();
  static TwoEmitterState ground();
  static TwoEmitterState symmetric();      // (|eg> + |ge>)/sqrt 2
  static TwoEmitterState antisymmetric();  // (|eg> - |ge>)/sqrt 2
  /// Product of two thermal qubits, excited/ground ratio n/(n+1) each.
  static TwoEmitterState thermal(double occupation);

  double population_ee() const { return rho_(0, 0).real(); }
  double population_gg() const { return rho_(3, 3).real(); }
  double population_symmetric() const;

 private:
  DensityMatrix rho_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

/// Per-emitter rates on the diagonal, cross rates off the diagonal.
RateMatrix rate_matrix(const CollectiveRates& cr);

/// Right-hand side of the Born-Markov master equation with thermal
/// occupation n: emission weighted by (n+1), absorption by n.
DensityMatrix master_equation_rhs(const RateMatrix& gamma, double occupation,
                                  const DensityMatrix& rho);

/// Fixed-step RK4 from t = 0 to t_end, recording every `record_every`-th step
/// (the final state is always recorded). Throws IntegrationFailure if the
/// trace drifts by more than 1e-6, an eigenvalue drops below -1e-6 or the
/// state stops being finite.
Trajectory master_equation_evolve(const RateMatrix& gamma, const ThermalContext& tc,
                                  const TwoEmitterState& rho0, double t_end, double dt,
                                  int record_every = 1);

/// Largest step allowed by the stability guideline 0.01 / ((2n+1) max|gamma|).
double recommended_step(const RateMatrix& gamma, const ThermalContext& tc);

/// Max over interior samples of |d rho_ss/dt - (G_I + G_C)[n rho_gg +
/// (n+1) rho_ee - (2n+1) rho_ss]|, with the derivative taken by a
/// fourth-order central difference on the recorded (uniform) samples.
double symmetric_population_check(const Trajectory& traj, const CollectiveRates& cr,
                                   const ThermalContext& tc);

/// Least-squares slope of -log rho_ss(t) over the samples with t <= t_max.
double fitted_symmetric_decay(const Trajectory& traj, double t_max);

}  // namespace critmed
