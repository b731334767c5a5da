#pragma once

#include "critmed/greens.hpp"

namespace critmed {

/// Center-of-mass decoherence of one emitter delocalized over two
/// wavepackets, orientation-averaged. Rates in units of the free-space
/// spontaneous emission rate.
struct DecoherenceRates {
  double local = 0.0;
  double nonlocal = 0.0;
  double ratio = 0.0;  // 1 + nonlocal / local
  double local_error = 0.0;
  double nonlocal_error = 0.0;
  long evaluations = 0;
};

/// Two z-oriented emitters at equal height. `incoherent` is the per-emitter
/// rate (1 in free space).
struct CollectiveRates {
  double incoherent = 0.0;
  double coherent = 0.0;
  double ratio = 0.0;  // 1 + coherent / incoherent
  double incoherent_error = 0.0;
  double coherent_error = 0.0;
  long evaluations = 0;
};

/// Thermal photon occupation at the transition frequency.
struct ThermalContext {
  double temperature = 0.0;  // K
  double omega0 = 0.0;       // rad/s
  double occupation = 0.0;

  ThermalContext() = default;
  ThermalContext(double temperature, double omega0);
};

/// Quadrature did not converge for one of the integrals; carries the rates
/// assembled from the best available estimates (only the member matching the
/// called operation is filled).
class RateFailure : public QuadratureFailure {
 public:
  RateFailure(const std::string& what, const IntegralResult<complex>& best,
              DecoherenceRates d, CollectiveRates c)
      : QuadratureFailure(what, best), decoherence(d), collective(c) {}
  DecoherenceRates decoherence;
  CollectiveRates collective;
};

/// Bose-Einstein occupation 1/(exp(hbar w / kB T) - 1); zero at T = 0.
double bose_occupation(double omega0, double temperature);

/// The separated-point integral is solved to an absolute tolerance of
/// rel_tol times the coincident-point integral, since only the ratio is
/// meaningful; the reported errors reflect that.
DecoherenceRates decoherence_rates(const EmitterGeometry& g, const SurfaceResponse& s,
                                   const QuadratureConfig& q);

/// Same tolerance policy as decoherence_rates for the coherent part.
CollectiveRates collective_rates(const EmitterGeometry& g, const SurfaceResponse& s,
                                 const QuadratureConfig& q);

/// Both rates scale with (n + 1); the ratio is carried over unchanged.
DecoherenceRates thermal_decoherence(const DecoherenceRates& dr, const ThermalContext& tc);

/// Decay rate of the symmetric state (|eg> + |ge>)/sqrt(2) under the
/// two-emitter master equation: (2n + 1)(incoherent + coherent), with the
/// per-emitter rates of `cr` as the diagonal and off-diagonal rate-matrix
/// entries.
double symmetric_decay_rate(const CollectiveRates& cr, const ThermalContext& tc);

}  // namespace critmed
