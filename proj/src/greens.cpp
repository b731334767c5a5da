#include "critmed/greens.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "critmed/constants.hpp"
#include "critmed/errors.hpp"

namespace critmed {

using constants::pi;

EmitterGeometry::EmitterGeometry(double x_, double z_, double lambda0_)
    : x(x_), z(z_), lambda0(lambda0_) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("separation x must be >= 0");
  if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument("height z must be > 0");
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0))
    throw InvalidArgument("wavelength must be > 0");
}

double EmitterGeometry::k0() const noexcept { return constants::two_pi / lambda0; }
double EmitterGeometry::omega0() const noexcept {
  return constants::angular_frequency(lambda0);
}

SurfaceResponse::SurfaceResponse(complex e, double w) : eps(e), omega0(w) {
  if (!(eps.imag() >= 0.0)) throw InvalidArgument("surface permittivity must be passive");
  if (!(omega0 > 0.0)) throw InvalidArgument("transition frequency must be > 0");
}

double bessel_j0(double u) {
  if (std::isnan(u)) throw InvalidArgument("bessel_j0: NaN argument");
  return ::j0(u);
}

double bessel_j0_zero(int m) {
  if (m < 1) throw InvalidArgument("bessel_j0_zero: index must be >= 1");
  // McMahon expansion, then Newton with J0' = -J1.
  const double beta = (m - 0.25) * pi;
  const double b8 = 8.0 * beta;
  double x = beta + 1.0 / b8 - 124.0 / (3.0 * b8 * b8 * b8);
  for (int it = 0; it < 4; ++it) {
    const double step = ::j0(x) / ::j1(x);
    x += step;
    if (std::abs(step) < 1e-15 * x) break;
  }
  return x;
}

namespace {

// Normal wavenumber inside the medium, branch Im >= 0.
complex medium_kz(complex arg) {
  complex r = std::sqrt(arg);
  if (r.imag() < 0.0) r = -r;
  return r;
}

complex ratio_or_zero(complex num, complex den) {
  if (den == 0.0) return 0.0;
  return num / den;
}

struct Reflection {
  complex te, tm;
};

// kz, kz' in units of k0.
Reflection reflection(complex eps, complex kz, complex kzm) {
  assert(kz.imag() >= 0.0 && kzm.imag() >= 0.0);
  return {ratio_or_zero(kz - kzm, kz + kzm), ratio_or_zero(eps * kz - kzm, eps * kz + kzm)};
}

}  // namespace

complex fresnel_te(double q, complex eps) {
  if (!(q >= 0.0)) throw InvalidArgument("in-plane wavenumber must be >= 0");
  const complex kz = q <= 1.0 ? complex(std::sqrt(1.0 - q * q), 0.0)
                              : complex(0.0, std::sqrt(q * q - 1.0));
  return reflection(eps, kz, medium_kz(eps - q * q)).te;
}

complex fresnel_tm(double q, complex eps) {
  if (!(q >= 0.0)) throw InvalidArgument("in-plane wavenumber must be >= 0");
  const complex kz = q <= 1.0 ? complex(std::sqrt(1.0 - q * q), 0.0)
                              : complex(0.0, std::sqrt(q * q - 1.0));
  return reflection(eps, kz, medium_kz(eps - q * q)).tm;
}

complex trace_g0(const EmitterGeometry& g) {
  const double X = constants::two_pi * g.x;
  if (X == 0.0) return {0.0, 1.0 / (2.0 * pi)};
  return std::exp(complex(0.0, X)) / (2.0 * pi * X);
}

namespace sommerfeld {

namespace {

double j0_fast(double u) { return u == 0.0 ? 1.0 : ::j0(u); }

void sort_unique(std::vector<double>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// Breakpoints of the theta-parameterized propagating sector.
std::vector<double> propagating_breakpoints(double X, double Z, complex eps) {
  std::vector<double> pts{0.0, pi / 2};
  for (int m = 1;; ++m) {
    const double j = bessel_j0_zero(m);
    if (j >= X) break;
    pts.push_back(std::asin(j / X));
  }
  // One breakpoint per period of e^{2i Z cos(theta)}.
  const int periods = static_cast<int>(std::floor(Z / pi));
  for (int m = 1; m <= periods; ++m) pts.push_back(std::acos(1.0 - m * pi / Z));
  // Branch point of the medium wavenumber.
  if (eps.real() > 0.0 && eps.real() < 1.0) pts.push_back(std::asin(std::sqrt(eps.real())));
  sort_unique(pts);
  return pts;
}

// Points of the evanescent sector where the integrand has structure: the
// surface-mode pole (TM pole at kappa^2 = -1/(eps+1)) and the branch point of
// the medium wavenumber.
std::vector<double> evanescent_features(complex eps) {
  std::vector<double> pts;
  if (eps.real() < -1.0) {
    const complex kp = std::sqrt(-1.0 / (eps + 1.0));
    const double w = std::abs(kp.imag());
    for (double k : {kp.real() - 2.0 * w, kp.real(), kp.real() + 2.0 * w})
      if (k > 0.0) pts.push_back(k);
  }
  if (eps.real() > 1.0) pts.push_back(std::sqrt(eps.real() - 1.0));
  return pts;
}

// Quasi-static image part. For large q the reflected kernel tends to
// -i r_inf (2q^2 - 1) e^{-2qZ} (Trace) or -i r_inf q^2 e^{-2qZ} (TmZz) with
// r_inf = (eps-1)/(eps+1); that piece is integrated in closed form and the
// quadrature only sees the remainder, which avoids cancelling huge evanescent
// contributions in the near field.
struct ImageTerm {
  bool active = false;
  complex r_inf;
};

ImageTerm image_term(complex eps) {
  const complex d = eps + 1.0;
  if (std::abs(d) < 1e-3 * std::max(1.0, std::abs(eps))) return {};
  return {true, (eps - 1.0) / d};
}

// int_0^inf {2q^2 - 1, q^2} J0(qX) e^{-aq} dq from derivatives of 1/R.
double image_integral(Kernel kernel, double X, double Z) {
  const double a = 2.0 * Z;
  const double R = std::hypot(a, X);
  const double second = (2.0 * a * a - X * X) / std::pow(R, 5);
  return kernel == Kernel::Trace ? 2.0 * second - 1.0 / R : second;
}

complex propagating_remainder(Kernel kernel, double theta, double X, double Z, complex eps,
                              const ImageTerm& img) {
  complex v = propagating_integrand(kernel, theta, X, Z, eps);
  if (!img.active) return v;
  const double q = std::sin(theta);
  const double w = kernel == Kernel::Trace ? 2.0 * q * q - 1.0 : q * q;
  return v - complex(0.0, -1.0) * img.r_inf * (w * std::cos(theta) * j0_fast(q * X) *
                                               std::exp(-2.0 * q * Z));
}

complex evanescent_remainder(Kernel kernel, double kappa, double X, double Z, complex eps,
                             const ImageTerm& img) {
  if (!img.active) return evanescent_integrand(kernel, kappa, X, Z, eps);
  const double q2 = 1.0 + kappa * kappa;
  const double q = std::sqrt(q2);
  const double J = X == 0.0 ? 1.0 : ::j0(q * X);
  // s = i kappa, s' = i w with w = sqrt(q^2 - eps), Re w >= 0.
  complex w = std::sqrt(complex(q2, 0.0) - eps);
  if (w.real() < 0.0) w = -w;
  const complex s(0.0, kappa);
  const complex sm = complex(0.0, 1.0) * w;
  assert(sm.imag() >= -1e-12 * std::abs(sm));
  const double delta = 1.0 / (q + kappa);  // q - kappa
  const complex dr_tm = 2.0 * eps * complex(0.0, 1.0) * (eps - 1.0) /
                        ((kappa + w) * (eps * s + sm) * (eps + 1.0));
  // damp_e = e^{-2 kappa Z} - e^{-2qZ}, kept accurate when the two are close
  // and free of overflow when Z is large.
  const double damp = std::exp(-2.0 * q * Z);
  const double damp_k = std::exp(-2.0 * kappa * Z);
  const double damp_e =
      2.0 * delta * Z < 1.0 ? damp * std::expm1(2.0 * delta * Z) : damp_k - damp;
  // e^{-2qZ} kappa [(q/kappa) e^{2(q-kappa)Z} r_TM - r_inf]
  const complex bk = img.r_inf * (delta * damp + (kappa + delta) * damp_e) +
                     (kappa + delta) * damp_k * dr_tm;
  if (kernel == Kernel::Trace) {
    const complex r_te = (eps - 1.0) / ((kappa + w) * (kappa + w));
    return complex(0.0, -1.0) * J * ((2.0 * q2 - 1.0) / q * bk + damp_k * r_te);
  }
  return complex(0.0, -1.0) * (J * q) * bk;
}

struct Piece {
  IntegralResult<complex> result;
  bool converged = true;
};

template <typename F>
Piece integrate_piece(F&& f, std::span<const double> bp, const QuadratureConfig& cfg) {
  Piece p;
  p.result = integrate_adaptive<complex>(f, bp, cfg, &p.converged);
  return p;
}

// Euler-Knopp transform of the last `n` partial sums (binomial averaging).
complex euler_estimate(const std::vector<complex>& partial, std::size_t n) {
  const std::size_t m = std::min(n, partial.size());
  std::vector<complex> row(partial.end() - static_cast<std::ptrdiff_t>(m), partial.end());
  while (row.size() > 1) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
  }
  return row.front();
}

double kappa_of(double q) { return q <= 1.0 ? 0.0 : std::sqrt((q - 1.0) * (q + 1.0)); }

}  // namespace

double evanescent_cutoff(double Z) { return std::max(10.0 / Z, 10.0); }

complex propagating_integrand(Kernel kernel, double theta, double X, double Z, complex eps) {
  const double q = std::sin(theta);
  const double kz = std::cos(theta);
  const Reflection r = reflection(eps, kz, medium_kz(eps - q * q));
  const double J = j0_fast(q * X);
  const complex phase(std::cos(2.0 * Z * kz), std::sin(2.0 * Z * kz));
  if (kernel == Kernel::Trace) return q * J * (r.te + r.tm * (2.0 * q * q - 1.0)) * phase;
  return q * q * q * J * r.tm * phase;
}

complex evanescent_integrand(Kernel kernel, double kappa, double X, double Z, complex eps) {
  const double q2 = 1.0 + kappa * kappa;
  const Reflection r = reflection(eps, complex(0.0, kappa), medium_kz(eps - q2));
  const double J = X == 0.0 ? 1.0 : ::j0(std::sqrt(q2) * X);
  const double damping = std::exp(-2.0 * kappa * Z);
  // dq (q/kz) = -i dkappa
  if (kernel == Kernel::Trace)
    return complex(0.0, -1.0) * (J * damping) * (r.te + r.tm * (2.0 * q2 - 1.0));
  return complex(0.0, -1.0) * (q2 * J * damping) * r.tm;
}

IntegralResult<complex> reflected(Kernel kernel, double X, double Z, complex eps,
                                  const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(X >= 0.0) || !(Z > 0.0) || !std::isfinite(X) || !std::isfinite(Z))
    throw InvalidArgument("reflected: need X >= 0, Z > 0");
  if (std::isnan(eps.real()) || std::isnan(eps.imag()))
    throw InvalidArgument("reflected: NaN permittivity");
  if (eps == complex(1.0, 0.0)) return {};

  const ImageTerm img = image_term(eps);
  bool converged = true;
  IntegralResult<complex> total;
  if (img.active)
    total.value = complex(0.0, -1.0) * img.r_inf * image_integral(kernel, X, Z);

  {
    const auto bp = propagating_breakpoints(X, Z, eps);
    Piece p = integrate_piece(
        [&](double t) { return propagating_remainder(kernel, t, X, Z, eps, img); }, bp, cfg);
    total += p.result;
    converged = converged && p.converged;
  }

  auto ev = [&](double k) { return evanescent_remainder(kernel, k, X, Z, eps, img); };
  const double cut = evanescent_cutoff(Z);
  const auto features = evanescent_features(eps);
  const double last_feature =
      features.empty() ? 0.0 : *std::max_element(features.begin(), features.end());

  // Oscillatory once J0 has gone through a few periods past all features.
  const double q_osc = std::max(std::sqrt(1.0 + last_feature * last_feature),
                                X > 0.0 ? 10.0 / X : 0.0);
  const bool oscillatory = X > 0.0 && q_osc * X < std::sqrt(1.0 + cut * cut) * X;

  int zero_index = 1;
  double head_end = cut;
  if (oscillatory) {
    while (bessel_j0_zero(zero_index) <= q_osc * X) ++zero_index;
    head_end = kappa_of(bessel_j0_zero(zero_index) / X);
    ++zero_index;
  }

  {
    std::vector<double> bp{0.0, head_end};
    for (double k : features)
      if (k < head_end) bp.push_back(k);
    for (double s : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0})
      if (s / Z < head_end) bp.push_back(s / Z);
    for (int m = 1; X > 0.0; ++m) {
      const double k = kappa_of(bessel_j0_zero(m) / X);
      if (k >= head_end) break;
      if (k > 0.0) bp.push_back(k);
    }
    sort_unique(bp);
    Piece p = integrate_piece(ev, bp, cfg);
    total += p.result;
    converged = converged && p.converged;
  }

  QuadratureConfig panel_cfg = cfg;
  panel_cfg.abs_tol = std::max(cfg.abs_tol, 1e-3 * cfg.rel_tol * std::abs(total.value));
  constexpr int kMaxPanels = 200000;
  if (!oscillatory) {
    double a = head_end;
    for (int n = 0; n < kMaxPanels; ++n) {
      const double b = 2.0 * a;
      const double bp[2] = {a, b};
      Piece p = integrate_piece(ev, bp, panel_cfg);
      total += p.result;
      converged = converged && p.converged;
      if (std::abs(p.result.value) <= cfg.tail_threshold * std::abs(total.value) ||
          std::exp(-2.0 * a * Z) == 0.0)
        break;
      a = b;
      if (n + 1 == kMaxPanels) converged = false;
    }
  } else {
    // Panels between consecutive J0 zeros; partial sums accelerated by
    // repeated averaging.
    constexpr std::size_t kWindow = 12;
    std::vector<complex> partial;
    complex running = 0.0;
    complex estimate = 0.0;
    double a = head_end;
    int quiet = 0;
    bool done = false;
    for (int n = 0; n < kMaxPanels && !done; ++n, ++zero_index) {
      const double b = kappa_of(bessel_j0_zero(zero_index) / X);
      const double bp[2] = {a, b};
      Piece p = integrate_piece(ev, bp, panel_cfg);
      running += p.result.value;
      partial.push_back(running);
      total.error_estimate += p.result.error_estimate;
      total.evaluations += p.result.evaluations;
      converged = converged && p.converged;
      a = b;
      const double scale = std::abs(total.value + running);
      if (std::abs(p.result.value) <= cfg.tail_threshold * scale) {
        estimate = running;
        done = true;
      } else if (partial.size() >= kWindow) {
        const complex next = euler_estimate(partial, kWindow);
        const double change = std::abs(next - estimate);
        estimate = next;
        quiet = change <= std::max(cfg.abs_tol, 1e-2 * cfg.rel_tol * scale) ? quiet + 1 : 0;
        if (quiet >= 2) {
          total.error_estimate += change;
          done = true;
        }
      }
    }
    if (!done) converged = false;
    total.value += estimate;
  }

  if (!std::isfinite(total.value.real()) || !std::isfinite(total.value.imag()))
    converged = false;
  if (!converged)
    throw QuadratureFailure("Sommerfeld integral did not reach the requested tolerance",
                            total);
  return total;
}

IntegralResult<double> free_propagating(Kernel kernel, double X, const QuadratureConfig& cfg) {
  cfg.validate();
  std::vector<double> bp{0.0, pi / 2};
  for (int m = 1;; ++m) {
    const double j = bessel_j0_zero(m);
    if (j >= X) break;
    bp.push_back(std::asin(j / X));
  }
  sort_unique(bp);
  auto f = [&](double t) {
    const double s = std::sin(t);
    const double J = j0_fast(s * X);
    return kernel == Kernel::Trace ? s * J : s * s * s * J;
  };
  bool ok = true;
  auto r = integrate_adaptive<double>(f, bp, cfg, &ok);
  if (!ok)
    throw QuadratureFailure("free-space integral did not converge",
                            {complex(r.value, 0.0), r.error_estimate, r.evaluations});
  return r;
}

}  // namespace sommerfeld

IntegralResult<complex> trace_g0_integral(const EmitterGeometry& g, const QuadratureConfig& q) {
  const double X = constants::two_pi * g.x;
  const auto im = sommerfeld::free_propagating(sommerfeld::Kernel::Trace, X, q);
  const double re = X == 0.0 ? 0.0 : std::cos(X) / X;
  return {complex(re, im.value) / (2.0 * pi), im.error_estimate / (2.0 * pi), im.evaluations};
}

IntegralResult<complex> trace_gsca(const EmitterGeometry& g, const SurfaceResponse& s,
                                   const QuadratureConfig& q) {
  const double X = constants::two_pi * g.x;
  const double Z = constants::two_pi * g.z;
  const complex factor(0.0, 1.0 / (4.0 * pi));
  try {
    auto r = sommerfeld::reflected(sommerfeld::Kernel::Trace, X, Z, s.eps, q);
    return {factor * r.value, r.error_estimate / (4.0 * pi), r.evaluations};
  } catch (const QuadratureFailure& e) {
    auto b = e.best_estimate();
    throw QuadratureFailure(e.what(), {factor * b.value, b.error_estimate / (4.0 * pi),
                                       b.evaluations});
  }
}

namespace {

IntegralResult<double> tm_rate(double X, double z, const SurfaceResponse& s,
                               const QuadratureConfig& q) {
  if (!(z > 0.0)) throw InvalidArgument("height z must be > 0");
  const double Z = constants::two_pi * z;
  const auto free = sommerfeld::free_propagating(sommerfeld::Kernel::TmZz, X, q);
  IntegralResult<double> out{1.5 * free.value, 1.5 * free.error_estimate, free.evaluations};
  try {
    const auto r = sommerfeld::reflected(sommerfeld::Kernel::TmZz, X, Z, s.eps, q);
    out.value += 1.5 * r.value.real();
    out.error_estimate += 1.5 * r.error_estimate;
    out.evaluations += r.evaluations;
  } catch (const QuadratureFailure& e) {
    const auto& b = e.best_estimate();
    throw QuadratureFailure(
        e.what(), {complex(out.value + 1.5 * b.value.real(), 0.0),
                   out.error_estimate + 1.5 * b.error_estimate, out.evaluations + b.evaluations});
  }
  return out;
}

}  // namespace

IntegralResult<double> purcell_tm_integral(double z, const SurfaceResponse& s,
                                           const QuadratureConfig& q) {
  return tm_rate(0.0, z, s, q);
}

IntegralResult<double> coherent_tm_integral(double x, double z, const SurfaceResponse& s,
                                            const QuadratureConfig& q) {
  if (!(x >= 0.0)) throw InvalidArgument("separation x must be >= 0");
  return tm_rate(constants::two_pi * x, z, s, q);
}

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw InvalidArgument("quadrature tolerances must be > 0");
  if (max_subdivisions < 1) throw InvalidArgument("max_subdivisions must be >= 1");
  if (!(tail_threshold > 0.0)) throw InvalidArgument("tail threshold must be > 0");
}

}  // namespace critmed
