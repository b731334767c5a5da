#include "critmed/rates.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "critmed/constants.hpp"
#include "critmed/errors.hpp"

namespace critmed {

using constants::pi;

ThermalContext::ThermalContext(double t, double w)
    : temperature(t), omega0(w), occupation(bose_occupation(w, t)) {}

double bose_occupation(double omega0, double temperature) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw InvalidArgument("temperature must be >= 0");
  if (!(omega0 > 0.0)) throw InvalidArgument("transition frequency must be > 0");
  if (temperature == 0.0) return 0.0;
  const double x = constants::hbar * omega0 / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

namespace {

// Integral result and a failure message; the best estimate is kept on failure.
template <typename T, typename F>
IntegralResult<T> best_effort(F&& f, std::string& failure, IntegralResult<complex>& failed) {
  try {
    return f();
  } catch (const QuadratureFailure& e) {
    if (failure.empty()) {
      failure = e.what();
      failed = e.best_estimate();
    }
    const auto& b = e.best_estimate();
    if constexpr (std::is_same_v<T, double>)
      return {b.value.real(), b.error_estimate, b.evaluations};
    else
      return b;
  }
}

}  // namespace

DecoherenceRates decoherence_rates(const EmitterGeometry& g, const SurfaceResponse& s,
                                   const QuadratureConfig& q) {
  q.validate();
  const EmitterGeometry same(0.0, g.z, g.lambda0);
  std::string failure;
  IntegralResult<complex> failed;

  // Traces are in units of k0; each rate is 2 pi Im(trace).
  const auto sca_local = best_effort<complex>([&] { return trace_gsca(same, s, q); },
                                              failure, failed);
  QuadratureConfig qn = q;
  qn.abs_tol = std::max(q.abs_tol, q.rel_tol * std::abs(sca_local.value));
  const auto sca_pair = best_effort<complex>([&] { return trace_gsca(g, s, qn); },
                                             failure, failed);

  DecoherenceRates out;
  out.local = 2.0 * pi * (trace_g0(same).imag() + sca_local.value.imag());
  out.nonlocal = -2.0 * pi * (trace_g0(g).imag() + sca_pair.value.imag());
  out.ratio = 1.0 + out.nonlocal / out.local;
  out.local_error = 2.0 * pi * sca_local.error_estimate;
  out.nonlocal_error = 2.0 * pi * sca_pair.error_estimate;
  out.evaluations = sca_local.evaluations + sca_pair.evaluations;
  if (!failure.empty()) throw RateFailure("decoherence: " + failure, failed, out, {});
  if (!(out.local > 0.0))
    throw SolverFailure("non-positive local decoherence rate (non-passive input?)");
  return out;
}

CollectiveRates collective_rates(const EmitterGeometry& g, const SurfaceResponse& s,
                                 const QuadratureConfig& q) {
  q.validate();
  std::string failure;
  IntegralResult<complex> failed;
  const auto inc = best_effort<double>([&] { return purcell_tm_integral(g.z, s, q); },
                                       failure, failed);
  QuadratureConfig qc = q;
  // The rates carry a factor 3/2 over the raw integrals.
  qc.abs_tol = std::max(q.abs_tol, q.rel_tol * std::abs(inc.value) / 1.5);
  const auto coh = best_effort<double>(
      [&] { return coherent_tm_integral(g.x, g.z, s, qc); }, failure, failed);

  CollectiveRates out;
  out.incoherent = inc.value;
  out.coherent = coh.value;
  out.ratio = 1.0 + out.coherent / out.incoherent;
  out.incoherent_error = inc.error_estimate;
  out.coherent_error = coh.error_estimate;
  out.evaluations = inc.evaluations + coh.evaluations;
  if (!failure.empty()) throw RateFailure("collective: " + failure, failed, {}, out);
  if (!(out.incoherent > 0.0))
    throw SolverFailure("non-positive incoherent rate (non-passive input?)");
  return out;
}

DecoherenceRates thermal_decoherence(const DecoherenceRates& dr, const ThermalContext& tc) {
  const double factor = tc.occupation + 1.0;
  DecoherenceRates out = dr;
  out.local *= factor;
  out.nonlocal *= factor;
  out.local_error *= factor;
  out.nonlocal_error *= factor;
  return out;
}

double symmetric_decay_rate(const CollectiveRates& cr, const ThermalContext& tc) {
  return (2.0 * tc.occupation + 1.0) * (cr.incoherent + cr.coherent);
}

}  // namespace critmed
