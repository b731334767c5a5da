#pragma once

#include <array>
#include <complex>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace critmed {

using complex = std::complex<double>;

/// Free-electron (Drude) response, parameters in rad/s.
struct DrudeParams {
  double plasma_frequency;
  double damping;

  DrudeParams(double plasma_frequency, double damping);
};

struct LorentzTerm {
  double strength;   // oscillator strength, rad/s
  double resonance;  // rad/s, may be zero
  double damping;    // rad/s
};

/// Sum of Lorentz oscillators on top of the vacuum background.
struct DrudeLorentzParams {
  std::vector<LorentzTerm> terms;

  explicit DrudeLorentzParams(std::vector<LorentzTerm> terms);
};

struct TabulatedPoint {
  double omega;
  complex eps;
};

/// Permittivity sampled on a strictly increasing frequency grid; linear
/// interpolation of the real and imaginary parts, no extrapolation.
struct TabulatedPermittivity {
  std::vector<TabulatedPoint> points;

  explicit TabulatedPermittivity(std::vector<TabulatedPoint> points);
};

/// A dispersive complex permittivity eps(omega).
class MaterialModel {
 public:
  using Variant =
      std::variant<DrudeParams, DrudeLorentzParams, TabulatedPermittivity>;

  MaterialModel(DrudeParams p) : model_(std::move(p)) {}
  MaterialModel(DrudeLorentzParams p) : model_(std::move(p)) {}
  MaterialModel(TabulatedPermittivity p) : model_(std::move(p)) {}

  complex permittivity(double omega) const;
  const Variant& variant() const noexcept { return model_; }
  const std::string& source() const noexcept { return source_; }
  void set_source(std::string s) { source_ = std::move(s); }

  static MaterialModel from_json_text(const std::string& text);
  static MaterialModel load(const std::filesystem::path& path);
  std::string to_json_text() const;

 private:
  Variant model_;
  std::string source_;
};

complex drude_permittivity(double omega, const DrudeParams& p);
complex drude_lorentz_permittivity(double omega, const DrudeLorentzParams& p);
complex tabulated_permittivity(double omega, const TabulatedPermittivity& t);

struct CompositeSpec {
  MaterialModel host;
  MaterialModel inclusion;
  double filling_factor;
  double depolarization;

  CompositeSpec(MaterialModel host, MaterialModel inclusion,
                double filling_factor, double depolarization);
};

struct EffectivePermittivity {
  complex value;
  double residual;  // see bruggeman_residual
};

inline constexpr double kBruggemanTolerance = 1e-10;

/// Solves the two-phase Bruggeman mixing rule for spheroidal inclusions with
/// depolarization factor L (one axis L, two axes (1-L)/2):
///
///   (1-f) [ (eh-e)/(e+L(eh-e)) + 4(eh-e)/(2e+(1-L)(eh-e)) ]
///     + f [ (ei-e)/(e+L(ei-e)) + 4(ei-e)/(2e+(1-L)(ei-e)) ] = 0
///
/// Denominators are cleared into a quartic in e whose roots come from the
/// companion matrix. The root with positive imaginary part is returned.
/// A lossless constituent is given an imaginary part of 1e-9 |eps| to pick
/// the physical branch; the reported value is then the nearest root of the
/// unperturbed polynomial.
///
/// Throws InvalidArgument on out-of-range f or L or on active constituents,
/// SolverFailure if no passive root exists or the polynomial degenerates.
EffectivePermittivity bruggeman_solve(complex eps_host, complex eps_inclusion,
                                      double f, double L);

EffectivePermittivity bruggeman_solve(const CompositeSpec& spec, double omega);

/// Coefficients of the cleared polynomial, lowest degree first.
std::array<complex, 5> bruggeman_polynomial(complex eps_host,
                                            complex eps_inclusion, double f,
                                            double L);

/// Residual of the rational mixing equation at `eps`. Each of the four
/// weighted terms w (c-e)/D is sized as w (|c|+|e|)/|D| and |lhs| is divided by
/// the largest such size. This never exceeds |lhs| over the largest term
/// itself, which at f = 0 or 1 degenerates to 0/0 at the exact root.
double bruggeman_residual(complex eps_host, complex eps_inclusion, double f,
                          double L, complex eps);

}  // namespace critmed
