#pragma once

#include <complex>

#include "critmed/quadrature.hpp"

namespace critmed {

using complex = std::complex<double>;

/// Two points at common height z above a half-space, laterally separated by x.
/// Lengths are in units of the transition wavelength lambda0.
struct EmitterGeometry {
  double x;        // separation / lambda0, >= 0
  double z;        // height / lambda0, > 0
  double lambda0;  // m

  EmitterGeometry(double x, double z, double lambda0);

  double k0() const noexcept;      // 1/m
  double omega0() const noexcept;  // rad/s
};

/// Permittivity of the half-space at the transition frequency.
struct SurfaceResponse {
  complex eps;
  double omega0;

  SurfaceResponse(complex eps, double omega0);
};

/// Cylindrical Bessel function of the first kind, order zero.
double bessel_j0(double u);

/// m-th positive zero of J0 (m >= 1).
double bessel_j0_zero(int m);

/// Half-space Fresnel coefficients for in-plane wavenumber q = k_par / k0.
/// Both normal wavenumbers are taken on the branch with Im >= 0.
complex fresnel_te(double q, complex eps);
complex fresnel_tm(double q, complex eps);
inline complex fresnel_te(double q, const SurfaceResponse& s) { return fresnel_te(q, s.eps); }
inline complex fresnel_tm(double q, const SurfaceResponse& s) { return fresnel_tm(q, s.eps); }

/// Trace of the free-space Green dyadic between the two points, in units of
/// k0. Im = sin(k0 x) / (2 pi k0 x); Re = cos(k0 x) / (2 pi k0 x) for x > 0.
/// The divergent real part at x = 0 (a level shift that plays no role in the
/// rates) is reported as zero.
complex trace_g0(const EmitterGeometry& g);

/// Same, with the imaginary part evaluated as a Sommerfeld integral over the
/// propagating sector instead of the closed form.
IntegralResult<complex> trace_g0_integral(const EmitterGeometry& g, const QuadratureConfig& q);

/// Trace of the reflected Green dyadic, in units of k0:
///   (i/4pi) int_0^inf (q/kz) J0(q k0 x) [r_TE + r_TM (q^2 - kz^2)] e^{2i kz k0 z} dq
IntegralResult<complex> trace_gsca(const EmitterGeometry& g, const SurfaceResponse& s,
                                   const QuadratureConfig& q);

/// Normalized decay rate of one z-oriented emitter at height z:
///   (3/2) Re int_0^inf (q^3/kz) (1 + r_TM e^{2i kz k0 z}) dq.
/// Equals 1 in free space.
IntegralResult<double> purcell_tm_integral(double z, const SurfaceResponse& s,
                                           const QuadratureConfig& q);

/// Normalized cross-decay rate of two z-oriented emitters at separation x:
///   (3/2) Re int_0^inf (q^3/kz) J0(q k0 x) (1 + r_TM e^{2i kz k0 z}) dq.
IntegralResult<double> coherent_tm_integral(double x, double z, const SurfaceResponse& s,
                                            const QuadratureConfig& q);

/// Lower-level pieces, exposed for the rate assembly and for tests.
namespace sommerfeld {

enum class Kernel {
  Trace,   // (q/kz) [r_TE + r_TM (2q^2 - 1)]
  TmZz,    // (q^3/kz) r_TM
};

/// Raw reflected integral int_0^inf K(q) J0(q X) e^{2i kz Z} dq with
/// dimensionless X = k0 x, Z = k0 z.
IntegralResult<complex> reflected(Kernel kernel, double X, double Z, complex eps,
                                  const QuadratureConfig& q);

/// Free-space propagating-sector integral int_0^1 K0(q) J0(q X) dq with
/// K0 = q/kz (Trace) or q^3/kz (TmZz). Real.
IntegralResult<double> free_propagating(Kernel kernel, double X, const QuadratureConfig& q);

/// Integrand value at propagating angle theta (q = sin theta), already
/// multiplied by dq/dtheta.
complex propagating_integrand(Kernel kernel, double theta, double X, double Z, complex eps);
/// Integrand value at evanescent kappa (q = sqrt(1 + kappa^2)), already
/// multiplied by dq/dkappa.
complex evanescent_integrand(Kernel kernel, double kappa, double X, double Z, complex eps);

/// Evanescent truncation point used before tail extension.
double evanescent_cutoff(double Z);

}  // namespace sommerfeld

}  // namespace critmed
