#include "critmed/sweep.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "critmed/constants.hpp"
#include "critmed/errors.hpp"
#include "critmed/materials.hpp"
#include "critmed/rates.hpp"
#include "critmed/vo2.hpp"
#include "json.hpp"

#ifndef CRITMED_VERSION
#define CRITMED_VERSION "0.0.0"
#endif

namespace critmed {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kAxisNames = {"f", "T_K", "x_over_lambda", "z_over_lambda",
                                             "branch"};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Scenario parse_scenario(const std::string& s) {
  if (s == "percolation-composite") return Scenario::PercolationComposite;
  if (s == "vo2") return Scenario::Vo2;
  throw ConfigError("unknown scenario '" + s + "' (percolation-composite | vo2)");
}

Observable parse_observable(const std::string& s) {
  if (s == "decoherence") return Observable::Decoherence;
  if (s == "collective") return Observable::Collective;
  throw ConfigError("unknown observable '" + s + "' (decoherence | collective)");
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute() || base.empty() || p == "synthetic") return p;
  return (base / p).lexically_normal();
}

AxisSpec parse_axis(const ojson& j) {
  if (!j.is_object() || !j.contains("name")) throw ConfigError("axis needs a name");
  AxisSpec a;
  a.name = j.at("name").get<std::string>();
  if (std::find(kAxisNames.begin(), kAxisNames.end(), a.name) == kAxisNames.end())
    throw ConfigError("unknown axis '" + a.name + "'");
  const int forms = static_cast<int>(j.contains("values")) +
                    static_cast<int>(j.contains("linspace")) +
                    static_cast<int>(j.contains("logspace"));
  if (forms != 1)
    throw ConfigError("axis '" + a.name + "' needs exactly one of values, linspace, logspace");
  if (a.name == "branch") {
    if (!j.contains("values")) throw ConfigError("branch axis takes a values list");
    a.labels = j.at("values").get<std::vector<std::string>>();
    return a;
  }
  if (j.contains("values")) {
    a.values = j.at("values").get<std::vector<double>>();
  } else {
    const bool log = j.contains("logspace");
    const auto& spec = j.at(log ? "logspace" : "linspace");
    if (!spec.is_array() || spec.size() != 3)
      throw ConfigError("axis '" + a.name + "': spacing spec is [start, stop, num]");
    const double start = spec[0].get<double>(), stop = spec[1].get<double>();
    const int num = spec[2].get<int>();
    if (num < 1) throw ConfigError("axis '" + a.name + "': num must be >= 1");
    a.values = log ? logspace(start, stop, num) : linspace(start, stop, num);
  }
  if (j.contains("densify")) {
    std::vector<DensifyBand> bands;
    for (const auto& b : j.at("densify")) {
      DensifyBand band{b.at("lo").get<double>(), b.at("hi").get<double>(),
                       b.value("factor", 3), 0.0};
      band.anchor = b.value("anchor", band.lo);
      if (!(band.hi > band.lo) || band.factor < 1)
        throw ConfigError("axis '" + a.name + "': bad densify band");
      bands.push_back(band);
    }
    a.values = densify(a.values, bands);
  }
  return a;
}

QuadratureConfig parse_quadrature(const ojson& j) {
  QuadratureConfig q;
  q.rel_tol = j.value("rel_tol", q.rel_tol);
  q.abs_tol = j.value("abs_tol", q.abs_tol);
  q.max_subdivisions = j.value("max_subdivisions", q.max_subdivisions);
  q.tail_threshold = j.value("tail_threshold", q.tail_threshold);
  return q;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    else if (c == '"') c = '\'';
    else if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

std::string_view to_string(Scenario s) noexcept {
  return s == Scenario::Vo2 ? "vo2" : "percolation-composite";
}

std::string_view to_string(Observable o) noexcept {
  return o == Observable::Collective ? "collective" : "decoherence";
}

std::vector<double> linspace(double start, double stop, int num) {
  if (num < 1) throw InvalidArgument("linspace needs num >= 1");
  std::vector<double> v(static_cast<std::size_t>(num));
  if (num == 1) {
    v[0] = start;
    return v;
  }
  const double step = (stop - start) / (num - 1);
  for (int i = 0; i < num; ++i) v[static_cast<std::size_t>(i)] = start + i * step;
  v.back() = stop;
  return v;
}

std::vector<double> logspace(double start_exp, double stop_exp, int num) {
  auto e = linspace(start_exp, stop_exp, num);
  for (double& x : e) x = std::pow(10.0, x);
  return e;
}

std::vector<double> densify(const std::vector<double>& base,
                            const std::vector<DensifyBand>& bands) {
  std::vector<double> sorted = base;
  std::sort(sorted.begin(), sorted.end());
  double spacing = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double d = sorted[i] - sorted[i - 1];
    if (d > 0.0 && (spacing == 0.0 || d < spacing)) spacing = d;
  }
  if (spacing == 0.0) return sorted;
  std::vector<double> pts = sorted;
  for (const auto& b : bands) {
    const double h = spacing / b.factor;
    const auto k0 = static_cast<long>(std::ceil((b.lo - b.anchor) / h - 1e-9));
    const auto k1 = static_cast<long>(std::floor((b.hi - b.anchor) / h + 1e-9));
    for (long k = k0; k <= k1; ++k) pts.push_back(b.anchor + static_cast<double>(k) * h);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts)
    if (out.empty() || p - out.back() > 1e-9 * spacing) out.push_back(p);
  return out;
}

SweepConfig SweepConfig::from_json_text(const std::string& text, const fs::path& base_dir) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("sweep config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
  static const std::vector<std::string> known = {
      "name", "scenario", "observable", "lambda0_um", "lambda0_m", "axes", "materials",
      "vo2_dataset", "include_vacuum", "quadrature", "workers", "output"};
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw ConfigError("unknown sweep config field '" + item.key() + "'");
  SweepConfig c;
  try {
    c.name = j.value("name", std::string());
    c.scenario = parse_scenario(j.at("scenario").get<std::string>());
    c.observable = parse_observable(j.at("observable").get<std::string>());
    if (j.contains("lambda0_um") && j.contains("lambda0_m"))
      throw ConfigError("give lambda0_um or lambda0_m, not both");
    if (j.contains("lambda0_um")) c.lambda0 = j.at("lambda0_um").get<double>() * 1e-6;
    if (j.contains("lambda0_m")) c.lambda0 = j.at("lambda0_m").get<double>();
    for (const auto& a : j.at("axes")) c.axes.push_back(parse_axis(a));
    if (j.contains("materials")) {
      const auto& m = j.at("materials");
      c.host_material = resolve(m.value("host", std::string()), base_dir);
      c.inclusion_material = resolve(m.value("inclusion", std::string()), base_dir);
      c.depolarization = m.value("depolarization", c.depolarization);
    }
    c.vo2_dataset = resolve(j.value("vo2_dataset", std::string()), base_dir);
    c.include_vacuum = j.value("include_vacuum", false);
    if (j.contains("quadrature")) c.quadrature = parse_quadrature(j.at("quadrature"));
    c.workers = j.value("workers", 0);
    c.output = resolve(j.value("output", std::string()), base_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sweep config: ") + e.what());
  }
  c.validate();
  return c;
}

SweepConfig SweepConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sweep config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), path.parent_path());
}

std::string SweepConfig::to_json_text() const {
  ojson j;
  if (!name.empty()) j["name"] = name;
  j["scenario"] = std::string(to_string(scenario));
  j["observable"] = std::string(to_string(observable));
  j["lambda0_m"] = lambda0;
  j["axes"] = ojson::array();
  for (const auto& a : axes) {
    ojson ja;
    ja["name"] = a.name;
    if (a.name == "branch")
      ja["values"] = a.labels;
    else
      ja["values"] = a.values;
    j["axes"].push_back(ja);
  }
  if (scenario == Scenario::PercolationComposite) {
    j["materials"] = {{"host", host_material.string()},
                      {"inclusion", inclusion_material.string()},
                      {"depolarization", depolarization}};
  } else {
    j["vo2_dataset"] = vo2_dataset.string();
  }
  j["include_vacuum"] = include_vacuum;
  j["quadrature"] = {{"rel_tol", quadrature.rel_tol},
                     {"abs_tol", quadrature.abs_tol},
                     {"max_subdivisions", quadrature.max_subdivisions},
                     {"tail_threshold", quadrature.tail_threshold}};
  j["workers"] = workers;
  if (!output.empty()) j["output"] = output.string();
  return j.dump(2);
}

const AxisSpec* SweepConfig::axis(std::string_view n) const {
  for (const auto& a : axes)
    if (a.name == n) return &a;
  return nullptr;
}

std::size_t SweepConfig::point_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

void SweepConfig::validate() const {
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw ConfigError("lambda0 must be > 0");
  if (axes.empty()) throw ConfigError("sweep needs at least one axis");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& a = axes[i];
    if (a.size() == 0) throw ConfigError("axis '" + a.name + "' is empty");
    for (std::size_t k = 0; k < i; ++k)
      if (axes[k].name == a.name) throw ConfigError("axis '" + a.name + "' declared twice");
    for (double v : a.values) {
      if (!std::isfinite(v)) throw ConfigError("axis '" + a.name + "' has non-finite values");
      if (a.name == "f" && !(v >= 0.0 && v <= 1.0))
        throw ConfigError("f values must lie in [0, 1]");
      if (a.name == "z_over_lambda" && !(v > 0.0))
        throw ConfigError("z_over_lambda values must be > 0");
      if (a.name == "x_over_lambda" && !(v >= 0.0))
        throw ConfigError("x_over_lambda values must be >= 0");
      if (a.name == "T_K" && !(v > 0.0)) throw ConfigError("T_K values must be > 0");
    }
    for (const auto& l : a.labels)
      if (l != "heating" && l != "cooling")
        throw ConfigError("branch values must be heating or cooling");
  }
  auto require = [&](const char* n) {
    if (!axis(n))
      throw ConfigError(std::string("scenario ") + std::string(to_string(scenario)) +
                        " needs axis '" + n + "'");
  };
  auto forbid = [&](const char* n) {
    if (axis(n))
      throw ConfigError(std::string("axis '") + n + "' does not apply to scenario " +
                        std::string(to_string(scenario)));
  };
  require("x_over_lambda");
  require("z_over_lambda");
  if (scenario == Scenario::PercolationComposite) {
    require("f");
    forbid("T_K");
    forbid("branch");
    if (host_material.empty() || inclusion_material.empty())
      throw ConfigError("percolation-composite needs materials.host and materials.inclusion");
    if (!(depolarization > 0.0 && depolarization < 1.0))
      throw ConfigError("depolarization must lie in (0, 1)");
  } else {
    require("T_K");
    require("branch");
    forbid("f");
    if (vo2_dataset.empty()) throw ConfigError("vo2 scenario needs vo2_dataset");
  }
  try {
    quadrature.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

Cell Cell::of(double v) {
  if (!std::isfinite(v)) return null();
  return {Kind::Number, v, {}};
}

bool Cell::operator==(const Cell& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::Number) return number == o.number;
  if (kind == Kind::Text) return text == o.text;
  return true;
}

std::size_t SweepTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw InvalidArgument("table has no column '" + std::string(name) + "'");
}

const Cell& SweepTable::at(std::size_t row, std::string_view column) const {
  return rows.at(row).at(column_index(column));
}

std::size_t SweepTable::flagged_rows() const {
  const std::size_t s = column_index("status");
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const auto& r) {
    return !(r[s].kind == Cell::Kind::Text && r[s].text == "ok");
  }));
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CRITMED_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 4096) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

struct Context {
  const SweepConfig& cfg;
  double omega0;
  complex eps_host, eps_inclusion;
  std::optional<Vo2Dataset> vo2;
  std::vector<std::string> columns;
  std::size_t first_output;
};

std::vector<std::string> output_columns(const SweepConfig& cfg) {
  std::vector<std::string> c = {"eps_eff_re", "eps_eff_im"};
  if (cfg.observable == Observable::Decoherence)
    c.insert(c.end(), {"local", "nonlocal", "ratio", "local_err", "nonlocal_err"});
  else
    c.insert(c.end(), {"incoherent", "coherent", "ratio", "incoherent_err", "coherent_err"});
  c.push_back("evaluations");
  if (cfg.include_vacuum) c.push_back("vacuum_ratio");
  c.insert(c.end(), {"status", "detail"});
  return c;
}

struct Outcome {
  std::array<double, 5> values{};
  long evaluations = 0;
};

Outcome evaluate(const Context& ctx, const EmitterGeometry& g, complex eps) {
  const SurfaceResponse s(eps, ctx.omega0);
  if (ctx.cfg.observable == Observable::Decoherence) {
    const auto r = decoherence_rates(g, s, ctx.cfg.quadrature);
    return {{r.local, r.nonlocal, r.ratio, r.local_error, r.nonlocal_error}, r.evaluations};
  }
  const auto r = collective_rates(g, s, ctx.cfg.quadrature);
  return {{r.incoherent, r.coherent, r.ratio, r.incoherent_error, r.coherent_error},
          r.evaluations};
}

Outcome from_failure(const Context& ctx, const RateFailure& e) {
  if (ctx.cfg.observable == Observable::Decoherence) {
    const auto& r = e.decoherence;
    return {{r.local, r.nonlocal, r.ratio, r.local_error, r.nonlocal_error}, r.evaluations};
  }
  const auto& r = e.collective;
  return {{r.incoherent, r.coherent, r.ratio, r.incoherent_error, r.coherent_error},
          r.evaluations};
}

std::vector<Cell> evaluate_row(const Context& ctx, const std::vector<std::size_t>& index) {
  const auto& cfg = ctx.cfg;
  std::vector<Cell> row(ctx.columns.size());
  double f = 0, T = 0, x = 0, z = 0;
  Branch branch = Branch::Heating;
  for (std::size_t k = 0; k < cfg.axes.size(); ++k) {
    const auto& a = cfg.axes[k];
    if (a.name == "branch") {
      branch = parse_branch(a.labels[index[k]]);
      row[k] = Cell::of(a.labels[index[k]]);
      continue;
    }
    const double v = a.values[index[k]];
    row[k] = Cell::of(v);
    if (a.name == "f") f = v;
    else if (a.name == "T_K") T = v;
    else if (a.name == "x_over_lambda") x = v;
    else if (a.name == "z_over_lambda") z = v;
  }

  const std::size_t o = ctx.first_output;
  auto set_outcome = [&](const Outcome& out) {
    for (std::size_t i = 0; i < 5; ++i) row[o + 2 + i] = Cell::of(out.values[i]);
    row[o + 7] = Cell::of(static_cast<double>(out.evaluations));
  };
  std::string status = "ok", detail;
  auto flag = [&](const std::string& s, const std::string& d) {
    if (status == "ok") {
      status = s;
      detail = sanitize(d);
    }
  };

  try {
    const EmitterGeometry g(x, z, cfg.lambda0);
    const complex eps = cfg.scenario == Scenario::PercolationComposite
                            ? bruggeman_solve(ctx.eps_host, ctx.eps_inclusion, f,
                                              cfg.depolarization)
                                  .value
                            : vo2_effective(*ctx.vo2, T, branch, ctx.omega0).value;
    row[o] = Cell::of(eps.real());
    row[o + 1] = Cell::of(eps.imag());
    try {
      set_outcome(evaluate(ctx, g, eps));
    } catch (const RateFailure& e) {
      set_outcome(from_failure(ctx, e));
      flag(to_string(e.kind()), e.what());
    }
    if (cfg.include_vacuum) {
      // Same code path as the material rows, with an empty half-space.
      try {
        row[o + 8] = Cell::of(evaluate(ctx, g, complex(1.0, 0.0)).values[2]);
      } catch (const RateFailure& e) {
        row[o + 8] = Cell::of(from_failure(ctx, e).values[2]);
        flag(to_string(e.kind()), std::string("vacuum: ") + e.what());
      }
    }
  } catch (const Error& e) {
    flag(to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    flag("internal-error", e.what());
  }
  // Rows carrying a non-finite number are flagged rather than emitted as NaN.
  if (status == "ok") {
    for (std::size_t i = o; i < o + 8; ++i)
      if (row[i].kind == Cell::Kind::Null) flag("non-finite", "non-finite output");
  }
  row[row.size() - 2] = Cell::of(status);
  row[row.size() - 1] = detail.empty() ? Cell::null() : Cell::of(detail);
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  Context ctx{cfg, constants::angular_frequency(cfg.lambda0), {}, {}, {}, {}, 0};
  if (cfg.scenario == Scenario::PercolationComposite) {
    ctx.eps_host = MaterialModel::load(cfg.host_material).permittivity(ctx.omega0);
    ctx.eps_inclusion = MaterialModel::load(cfg.inclusion_material).permittivity(ctx.omega0);
  } else if (cfg.vo2_dataset == "synthetic") {
    SyntheticVo2Options opt;
    opt.lambda0 = cfg.lambda0;
    ctx.vo2 = synthetic_vo2_dataset(opt);
  } else {
    ctx.vo2 = Vo2Dataset::load_csv(cfg.vo2_dataset);
  }
  for (const auto& a : cfg.axes) ctx.columns.push_back(a.name);
  ctx.first_output = ctx.columns.size();
  for (auto& c : output_columns(cfg)) ctx.columns.push_back(std::move(c));

  const std::size_t total = cfg.point_count();
  std::vector<std::vector<Cell>> rows(total);
  std::vector<std::size_t> radix;
  for (const auto& a : cfg.axes) radix.push_back(a.size());

  std::atomic<std::size_t> next{0}, done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    std::vector<std::size_t> index(radix.size());
    for (std::size_t i = next++; i < total; i = next++) {
      std::size_t rem = i;
      for (std::size_t k = radix.size(); k-- > 0;) {
        index[k] = rem % radix[k];
        rem /= radix[k];
      }
      rows[i] = evaluate_row(ctx, index);
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, total);
      }
    }
  };

  const int workers =
      static_cast<int>(std::min<std::size_t>(resolve_workers(cfg.workers), std::max<std::size_t>(total, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult r;
  r.table.columns = ctx.columns;
  r.table.rows = std::move(rows);
  r.workers = workers;
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

void write_csv(const SweepTable& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      const auto& c = row[i];
      if (c.kind == Cell::Kind::Number) out << format_double(c.number);
      else if (c.kind == Cell::Kind::Text) out << sanitize(c.text);
    }
    out << '\n';
  }
}

void write_json(const SweepTable& t, std::ostream& out) {
  ojson j;
  j["columns"] = t.columns;
  j["rows"] = ojson::array();
  for (const auto& row : t.rows) {
    ojson r = ojson::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& c = row[i];
      if (c.kind == Cell::Kind::Number) r[t.columns[i]] = c.number;
      else if (c.kind == Cell::Kind::Text) r[t.columns[i]] = c.text;
      else r[t.columns[i]] = nullptr;
    }
    j["rows"].push_back(std::move(r));
  }
  out << j.dump(1) << '\n';
}

namespace {

Cell parse_cell(const std::string& s) {
  if (s.empty()) return Cell::null();
  const char first = s[0];
  if ((first >= '0' && first <= '9') || first == '-' || first == '+' || first == '.') {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return Cell::of(v);
    } catch (const std::exception&) {
    }
  }
  return Cell::of(s);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

SweepTable read_csv(std::istream& in) {
  SweepTable t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("table CSV is empty");
  t.columns = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != t.columns.size())
      throw ConfigError("table CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(t.columns.size()) + " fields");
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_cell(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

SweepTable read_json(std::istream& in) {
  ojson j;
  try {
    j = ojson::parse(in);
    SweepTable t;
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& c : t.columns) {
        const auto& v = r.at(c);
        if (v.is_null()) row.push_back(Cell::null());
        else if (v.is_number()) row.push_back(Cell::of(v.get<double>()));
        else row.push_back(Cell::of(v.get<std::string>()));
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("table JSON: ") + e.what());
  }
}

void save_table(const SweepTable& t, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  if (path.extension() == ".json") write_json(t, out);
  else write_csv(t, out);
  if (!out) throw IoError("write failed for " + path.string());
}

SweepTable load_table(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return path.extension() == ".json" ? read_json(in) : read_csv(in);
}

fs::path metadata_path(const fs::path& output) {
  fs::path p = output;
  p += ".meta.json";
  return p;
}

const char* library_version() noexcept { return CRITMED_VERSION; }

void save_metadata(const SweepConfig& cfg, const SweepResult& r, const fs::path& path) {
  ojson j;
  j["config"] = ojson::parse(cfg.to_json_text());
  j["library_version"] = library_version();
  j["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
#if defined(__clang__)
  j["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  j["compiler"] = std::string("gcc ") + __VERSION__;
#endif
  j["rows"] = r.table.rows.size();
  j["flagged_rows"] = r.table.flagged_rows();
  j["workers"] = r.workers;
  j["wall_time_s"] = r.wall_seconds;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace critmed
