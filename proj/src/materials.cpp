#include "critmed/materials.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "critmed/errors.hpp"
#include "json.hpp"

namespace critmed {

namespace {

void require_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw InvalidArgument("angular frequency must be positive and finite");
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

DrudeParams::DrudeParams(double wp, double g) : plasma_frequency(wp), damping(g) {
  if (!positive_finite(wp)) throw InvalidArgument("Drude plasma frequency must be > 0");
  if (!positive_finite(g)) throw InvalidArgument("Drude damping must be > 0");
}

DrudeLorentzParams::DrudeLorentzParams(std::vector<LorentzTerm> t)
    : terms(std::move(t)) {
  if (terms.empty())
    throw InvalidArgument("Drude-Lorentz model needs at least one oscillator");
  for (const auto& term : terms) {
    if (!positive_finite(term.strength) || !positive_finite(term.damping) ||
        !(term.resonance >= 0.0) || !std::isfinite(term.resonance))
      throw InvalidArgument(
          "Lorentz terms need strength > 0, damping > 0, resonance >= 0");
  }
}

TabulatedPermittivity::TabulatedPermittivity(std::vector<TabulatedPoint> p)
    : points(std::move(p)) {
  if (points.size() < 2)
    throw InvalidArgument("tabulated permittivity needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!positive_finite(points[i].omega))
      throw InvalidArgument("tabulated frequencies must be > 0");
    if (points[i].eps.imag() < 0.0)
      throw InvalidArgument("tabulated permittivity must be passive (Im >= 0)");
    if (i > 0 && !(points[i].omega > points[i - 1].omega))
      throw InvalidArgument("tabulated frequencies must be strictly increasing");
  }
}

complex drude_permittivity(double omega, const DrudeParams& p) {
  require_frequency(omega);
  const double wp2 = p.plasma_frequency * p.plasma_frequency;
  return 1.0 - wp2 / complex(omega * omega, p.damping * omega);
}

complex drude_lorentz_permittivity(double omega, const DrudeLorentzParams& p) {
  require_frequency(omega);
  complex sum = 0.0;
  for (const auto& t : p.terms) {
    sum += t.strength * t.strength /
           complex(t.resonance * t.resonance - omega * omega, -t.damping * omega);
  }
  return 1.0 + sum;
}

complex tabulated_permittivity(double omega, const TabulatedPermittivity& t) {
  require_frequency(omega);
  const auto& pts = t.points;
  if (omega < pts.front().omega || omega > pts.back().omega)
    throw OutOfRange("frequency outside tabulated range");
  auto hi = std::lower_bound(pts.begin(), pts.end(), omega,
                             [](const TabulatedPoint& p, double w) { return p.omega < w; });
  if (hi->omega == omega) return hi->eps;
  auto lo = hi - 1;
  const double s = (omega - lo->omega) / (hi->omega - lo->omega);
  return (1.0 - s) * lo->eps + s * hi->eps;
}

complex MaterialModel::permittivity(double omega) const {
  return std::visit(
      [omega](const auto& m) -> complex {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DrudeParams>)
          return drude_permittivity(omega, m);
        else if constexpr (std::is_same_v<T, DrudeLorentzParams>)
          return drude_lorentz_permittivity(omega, m);
        else
          return tabulated_permittivity(omega, m);
      },
      model_);
}

MaterialModel MaterialModel::from_json_text(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("material config is not valid JSON: ") + e.what());
  }
  try {
    const std::string kind = doc.at("model").get<std::string>();
    auto build = [&]() -> MaterialModel {
      if (kind == "drude")
        return DrudeParams(doc.at("plasma_frequency").get<double>(),
                           doc.at("damping").get<double>());
      if (kind == "drude-lorentz") {
        std::vector<LorentzTerm> terms;
        for (const auto& t : doc.at("terms"))
          terms.push_back({t.at("strength").get<double>(),
                           t.at("resonance").get<double>(),
                           t.at("damping").get<double>()});
        return DrudeLorentzParams(std::move(terms));
      }
      if (kind == "tabulated") {
        std::vector<TabulatedPoint> pts;
        for (const auto& p : doc.at("table"))
          pts.push_back({p.at("omega").get<double>(),
                         {p.at("eps_re").get<double>(), p.at("eps_im").get<double>()}});
        return TabulatedPermittivity(std::move(pts));
      }
      throw ConfigError("unknown material model '" + kind + "'");
    };
    MaterialModel m = build();
    if (doc.contains("source")) m.set_source(doc["source"].get<std::string>());
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("material config schema violation: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("material config: ") + e.what());
  }
}

MaterialModel MaterialModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open material config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string MaterialModel::to_json_text() const {
  nlohmann::json doc = std::visit(
      [](const auto& m) -> nlohmann::json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DrudeParams>) {
          return {{"model", "drude"},
                  {"plasma_frequency", m.plasma_frequency},
                  {"damping", m.damping}};
        } else if constexpr (std::is_same_v<T, DrudeLorentzParams>) {
          nlohmann::json terms = nlohmann::json::array();
          for (const auto& t : m.terms)
            terms.push_back({{"strength", t.strength},
                             {"resonance", t.resonance},
                             {"damping", t.damping}});
          return {{"model", "drude-lorentz"}, {"terms", terms}};
        } else {
          nlohmann::json table = nlohmann::json::array();
          for (const auto& p : m.points)
            table.push_back({{"omega", p.omega},
                             {"eps_re", p.eps.real()},
                             {"eps_im", p.eps.imag()}});
          return {{"model", "tabulated"}, {"table", table}};
        }
      },
      model_);
  if (!source_.empty()) doc["source"] = source_;
  return doc.dump(2);
}

CompositeSpec::CompositeSpec(MaterialModel h, MaterialModel i, double f, double L)
    : host(std::move(h)), inclusion(std::move(i)), filling_factor(f), depolarization(L) {
  if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("filling factor must lie in [0, 1]");
  if (!(L > 0.0 && L < 1.0)) throw InvalidArgument("depolarization factor must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Bruggeman solver

namespace {

using Poly = std::array<complex, 5>;  // degree <= 4, lowest first

struct Linear {
  complex c0, c1;  // c0 + c1 u
};

Poly multiply(const Linear& a, const Linear& b, const Linear& c, const Linear& d) {
  std::array<complex, 5> p{a.c0, a.c1, 0.0, 0.0, 0.0};
  for (const Linear* l : {&b, &c, &d}) {
    std::array<complex, 5> q{};
    for (int k = 0; k < 4; ++k) {
      q[k] += p[k] * l->c0;
      q[k + 1] += p[k] * l->c1;
    }
    p = q;
  }
  return p;
}

// Polynomial in u = e / scale, built from constituent permittivities already
// divided by scale.
Poly scaled_polynomial(complex a, complex b, double f, double L) {
  // (c - e), N_c = (5-3L) e + (1+3L) c, D1_c = (1-L) e + L c,
  // D2_c = (1+L) e + (1-L) c
  auto diff = [](complex c) { return Linear{c, -1.0}; };
  auto num = [L](complex c) { return Linear{(1.0 + 3.0 * L) * c, 5.0 - 3.0 * L}; };
  auto d1 = [L](complex c) { return Linear{L * c, 1.0 - L}; };
  auto d2 = [L](complex c) { return Linear{(1.0 - L) * c, 1.0 + L}; };

  const Poly host = multiply(diff(a), num(a), d1(b), d2(b));
  const Poly incl = multiply(diff(b), num(b), d1(a), d2(a));
  Poly p;
  for (int k = 0; k < 5; ++k) p[k] = (1.0 - f) * host[k] + f * incl[k];
  return p;
}

complex horner(const Poly& p, complex u, complex* derivative = nullptr) {
  complex v = p[4], dv = 0.0;
  for (int k = 3; k >= 0; --k) {
    dv = dv * u + v;
    v = v * u + p[k];
  }
  if (derivative) *derivative = dv;
  return v;
}

std::array<complex, 4> quartic_roots(const Poly& p) {
  const complex lead = p[4];
  if (!(std::abs(lead) > 1e-300) || !std::isfinite(std::abs(lead)))
    throw SolverFailure("Bruggeman polynomial is degenerate");
  Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
  for (int k = 1; k < 4; ++k) companion(k, k - 1) = 1.0;
  for (int k = 0; k < 4; ++k) companion(k, 3) = -p[k] / lead;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw SolverFailure("companion eigenvalue iteration did not converge");
  std::array<complex, 4> roots;
  for (int k = 0; k < 4; ++k) roots[k] = solver.eigenvalues()[k];
  return roots;
}

complex newton_polish(const Poly& p, complex u) {
  for (int it = 0; it < 8; ++it) {
    complex dp;
    const complex v = horner(p, u, &dp);
    if (v == 0.0 || dp == 0.0) break;
    const complex next = u - v / dp;
    if (!(std::abs(horner(p, next)) < std::abs(v))) break;
    u = next;
  }
  return u;
}

struct Terms {
  complex lhs;
  double scale;
};

Terms rational_terms(complex a, complex b, double f, double L, complex e) {
  // Scale each term by |c| + |e| in place of |c - e| so an exact root of a
  // single phase (f = 0 or 1) is not measured against vanishing terms.
  double scale = 0.0;
  auto pair = [&](complex c, double w) {
    const complex d = c - e;
    const complex d1 = e + L * d;
    const complex d2 = 2.0 * e + (1.0 - L) * d;
    const double m = w * (std::abs(c) + std::abs(e));
    scale = std::max({scale, m / std::abs(d1), 4.0 * m / std::abs(d2)});
    return w * d / d1 + w * 4.0 * d / d2;
  };
  const complex lhs = pair(a, 1.0 - f) + pair(b, f);
  return {lhs, scale};
}

double relative_residual(complex a, complex b, double f, double L, complex e) {
  const Terms t = rational_terms(a, b, f, L, e);
  if (t.scale == 0.0) return 0.0;
  if (!std::isfinite(t.scale)) return std::numeric_limits<double>::infinity();
  return std::abs(t.lhs) / t.scale;
}

complex nudge_lossless(complex eps) {
  const double floor = 1e-9 * std::abs(eps);
  if (eps.imag() < floor) return {eps.real(), eps.imag() + floor};
  return eps;
}

}  // namespace

std::array<complex, 5> bruggeman_polynomial(complex a, complex b, double f, double L) {
  return scaled_polynomial(a, b, f, L);
}

double bruggeman_residual(complex a, complex b, double f, double L, complex e) {
  return relative_residual(a, b, f, L, e);
}

EffectivePermittivity bruggeman_solve(complex a, complex b, double f, double L) {
  if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("filling factor must lie in [0, 1]");
  if (!(L > 0.0 && L < 1.0)) throw InvalidArgument("depolarization factor must lie in (0, 1)");
  if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b)))
    throw InvalidArgument("permittivities must be finite");
  if (a.imag() < 0.0 || b.imag() < 0.0)
    throw InvalidArgument("constituent permittivities must be passive (Im >= 0)");

  const double scale = std::max(std::abs(a), std::abs(b));
  if (!(scale > 0.0)) throw SolverFailure("Bruggeman polynomial is degenerate");

  const complex ap = nudge_lossless(a), bp = nudge_lossless(b);
  const bool nudged = (ap != a) || (bp != b);

  const Poly perturbed = scaled_polynomial(ap / scale, bp / scale, f, L);
  const auto roots = quartic_roots(perturbed);

  // Candidates: genuine roots of the rational equation with Im > 0.
  complex chosen;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (complex u : roots) {
    u = newton_polish(perturbed, u);
    if (!(u.imag() > 1e-14 * std::abs(u))) continue;
    const double r = relative_residual(ap, bp, f, L, u * scale);
    if (!(r < 1e-6)) continue;  // spurious factor, e.g. a vanishing denominator
    if (!found || r < best) {
      chosen = u;
      best = r;
      found = true;
    }
  }
  if (!found)
    throw SolverFailure("no passive root of the Bruggeman equation (active input?)");

  if (nudged) {
    const Poly exact = scaled_polynomial(a / scale, b / scale, f, L);
    const auto exact_roots = quartic_roots(exact);
    complex nearest = exact_roots[0];
    for (complex u : exact_roots)
      if (std::abs(u - chosen) < std::abs(nearest - chosen)) nearest = u;
    chosen = newton_polish(exact, nearest);
    if (chosen.imag() < 0.0) chosen = {chosen.real(), 0.0};
  }

  const Poly exact = nudged ? scaled_polynomial(a / scale, b / scale, f, L) : perturbed;
  chosen = newton_polish(exact, chosen);
  if (chosen.imag() < 0.0) chosen = {chosen.real(), 0.0};
  const complex value = chosen * scale;
  const double residual = relative_residual(a, b, f, L, value);
  if (!(residual <= kBruggemanTolerance))
    throw SolverFailure("Bruggeman root residual " + std::to_string(residual) +
                        " exceeds tolerance");
  return {value, residual};
}

EffectivePermittivity bruggeman_solve(const CompositeSpec& spec, double omega) {
  return bruggeman_solve(spec.host.permittivity(omega),
                         spec.inclusion.permittivity(omega), spec.filling_factor,
                         spec.depolarization);
}

}  // namespace critmed
