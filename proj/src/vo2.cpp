#include "critmed/vo2.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "critmed/constants.hpp"
#include "critmed/errors.hpp"

namespace critmed {

namespace {

constexpr const char* kHeader = "branch,T_K,f,L,eps_hm_re,eps_hm_im,eps_i_re,eps_i_im";

void validate_branch(const std::vector<Vo2Point>& pts, std::string_view name) {
  if (pts.empty())
    throw InvalidArgument("VO2 dataset: " + std::string(name) + " branch is empty");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    if (!std::isfinite(p.temperature))
      throw InvalidArgument("VO2 dataset: non-finite temperature");
    if (i > 0 && !(p.temperature > pts[i - 1].temperature))
      throw InvalidArgument("VO2 dataset: " + std::string(name) +
                            " temperatures must be strictly increasing");
    if (!(p.filling_factor >= 0.0 && p.filling_factor <= 1.0))
      throw InvalidArgument("VO2 dataset: filling factor outside [0, 1]");
    if (!(p.depolarization > 0.0 && p.depolarization < 1.0))
      throw InvalidArgument("VO2 dataset: depolarization outside (0, 1)");
    if (p.eps_host.imag() < 0.0 || p.eps_inclusion.imag() < 0.0)
      throw InvalidArgument("VO2 dataset: permittivities must be passive");
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("VO2 dataset line " + std::to_string(line) +
                      ": cannot parse number '" + s + "'");
  }
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

}  // namespace

std::string_view to_string(Branch b) noexcept {
  return b == Branch::Heating ? "heating" : "cooling";
}

Branch parse_branch(std::string_view name) {
  if (name == "heating") return Branch::Heating;
  if (name == "cooling") return Branch::Cooling;
  throw InvalidArgument("unknown branch '" + std::string(name) + "'");
}

Vo2Dataset::Vo2Dataset(std::vector<Vo2Point> heating, std::vector<Vo2Point> cooling)
    : heating_(std::move(heating)), cooling_(std::move(cooling)) {
  validate_branch(heating_, "heating");
  validate_branch(cooling_, "cooling");
  if (!(common_min() < common_max()))
    throw InvalidArgument("VO2 dataset: branches do not share a temperature interval");
}

double Vo2Dataset::common_min() const noexcept {
  return std::max(heating_.front().temperature, cooling_.front().temperature);
}

double Vo2Dataset::common_max() const noexcept {
  return std::min(heating_.back().temperature, cooling_.back().temperature);
}

Vo2Dataset Vo2Dataset::parse_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<Vo2Point> heating, cooling;
  std::string last_branch;
  double last_t = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kHeader)
        throw ConfigError(std::string("VO2 dataset: expected header '") + kHeader + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 8)
      throw ConfigError("VO2 dataset line " + std::to_string(lineno) +
                        ": expected 8 fields");
    const std::string& branch = fields[0];
    if (branch != "heating" && branch != "cooling")
      throw ConfigError("VO2 dataset line " + std::to_string(lineno) +
                        ": unknown branch '" + branch + "'");
    Vo2Point p{parse_field(fields[1], lineno),
               parse_field(fields[2], lineno),
               parse_field(fields[3], lineno),
               {parse_field(fields[4], lineno), parse_field(fields[5], lineno)},
               {parse_field(fields[6], lineno), parse_field(fields[7], lineno)}};
    if (!last_branch.empty()) {
      if (branch < last_branch || (branch == last_branch && !(p.temperature > last_t)))
        throw ConfigError("VO2 dataset line " + std::to_string(lineno) +
                          ": rows must be sorted by (branch, T_K) without duplicates");
    }
    last_branch = branch;
    last_t = p.temperature;
    (branch == "heating" ? heating : cooling).push_back(p);
  }
  if (!header_seen) throw ConfigError("VO2 dataset: missing header");
  try {
    return Vo2Dataset(std::move(heating), std::move(cooling));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

Vo2Dataset Vo2Dataset::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open VO2 dataset " + path.string());
  return parse_csv(in);
}

void Vo2Dataset::write_csv(std::ostream& out) const {
  out << kHeader << '\n';
  for (Branch b : {Branch::Cooling, Branch::Heating}) {
    for (const auto& p : branch(b)) {
      out << to_string(b) << ',' << format_double(p.temperature) << ','
          << format_double(p.filling_factor) << ',' << format_double(p.depolarization)
          << ',' << format_double(p.eps_host.real()) << ','
          << format_double(p.eps_host.imag()) << ','
          << format_double(p.eps_inclusion.real()) << ','
          << format_double(p.eps_inclusion.imag()) << '\n';
    }
  }
}

void Vo2Dataset::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write VO2 dataset " + path.string());
  write_csv(out);
  if (!out) throw IoError("write failed for " + path.string());
}

Vo2Point vo2_lookup(const Vo2Dataset& ds, double temperature, Branch branch) {
  const auto& pts = ds.branch(branch);
  if (!(temperature >= pts.front().temperature && temperature <= pts.back().temperature))
    throw OutOfRange("temperature " + format_double(temperature) +
                     " K outside the " + std::string(to_string(branch)) + " grid");
  auto hi = std::lower_bound(
      pts.begin(), pts.end(), temperature,
      [](const Vo2Point& p, double t) { return p.temperature < t; });
  if (hi->temperature == temperature) return *hi;
  auto lo = hi - 1;
  const double s = (temperature - lo->temperature) / (hi->temperature - lo->temperature);
  auto mix = [s](auto x, auto y) { return (1.0 - s) * x + s * y; };
  return {temperature,
          mix(lo->filling_factor, hi->filling_factor),
          mix(lo->depolarization, hi->depolarization),
          mix(lo->eps_host, hi->eps_host),
          mix(lo->eps_inclusion, hi->eps_inclusion)};
}

EffectivePermittivity vo2_effective(const Vo2Dataset& ds, double temperature,
                                    Branch branch, double omega) {
  if (!(omega > 0.0)) throw InvalidArgument("angular frequency must be positive");
  const Vo2Point p = vo2_lookup(ds, temperature, branch);
  return bruggeman_solve(p.eps_host, p.eps_inclusion, p.filling_factor, p.depolarization);
}

Vo2Dataset synthetic_vo2_dataset(const SyntheticVo2Options& opt) {
  if (!(opt.t_max > opt.t_min) || !(opt.step > 0.0) || !(opt.width > 0.0))
    throw InvalidArgument("synthetic VO2: bad temperature grid");
  if (!(opt.max_filling > 1.0 / 3.0 && opt.max_filling <= 1.0))
    throw InvalidArgument("synthetic VO2: max filling must exceed 1/3");

  const complex eps_metal =
      drude_permittivity(constants::angular_frequency(opt.lambda0), opt.metal);
  // Shift so that max_filling * sigmoid(shift) == 1/3 at the critical point.
  const double target = 1.0 / (3.0 * opt.max_filling);
  const double shift = std::log(target / (1.0 - target));
  const auto count = static_cast<std::size_t>(std::llround((opt.t_max - opt.t_min) / opt.step));

  auto make = [&](double critical) {
    std::vector<Vo2Point> pts;
    pts.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
      const double t = opt.t_min + static_cast<double>(i) * opt.step;
      const double u = (t - critical) / opt.width + shift;
      const double f = opt.max_filling / (1.0 + std::exp(-u));
      const double L = opt.l_low + (opt.l_high - opt.l_low) * (t - opt.t_min) /
                                       (opt.t_max - opt.t_min);
      pts.push_back({t, f, L, opt.eps_insulator, eps_metal});
    }
    return pts;
  };
  return Vo2Dataset(make(opt.critical_heating), make(opt.critical_cooling));
}

}  // namespace critmed
