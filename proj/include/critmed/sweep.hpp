#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "critmed/quadrature.hpp"

namespace critmed {

enum class Scenario { PercolationComposite, Vo2 };
enum class Observable { Decoherence, Collective };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(Observable o) noexcept;

/// One swept parameter. Names: f, T_K, x_over_lambda, z_over_lambda, branch.
/// `branch` carries labels instead of numbers.
struct AxisSpec {
  std::string name;
  std::vector<double> values;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return name == "branch" ? labels.size() : values.size(); }
};

/// Extra points inside [lo, hi] at `factor` times the base density, on a
/// lattice through `anchor`.
struct DensifyBand {
  double lo, hi;
  int factor;
  double anchor;
};

std::vector<double> linspace(double start, double stop, int num);
std::vector<double> logspace(double start_exp, double stop_exp, int num);
/// Merges band points into a sorted base grid. Points closer than 1e-9 of the
/// base spacing collapse onto the smaller one.
std::vector<double> densify(const std::vector<double>& base, const std::vector<DensifyBand>& bands);

struct SweepConfig {
  std::string name;
  Scenario scenario = Scenario::PercolationComposite;
  Observable observable = Observable::Decoherence;
  double lambda0 = 450e-6;  // m
  std::vector<AxisSpec> axes;
  std::filesystem::path host_material;
  std::filesystem::path inclusion_material;
  double depolarization = 1.0 / 3.0;
  std::filesystem::path vo2_dataset;  // "synthetic" selects the built-in stand-in
  bool include_vacuum = false;
  QuadratureConfig quadrature;
  int workers = 0;  // 0: CRITMED_WORKERS or hardware concurrency
  std::filesystem::path output;

  /// Relative paths are resolved against `base_dir`.
  static SweepConfig from_json_text(const std::string& text,
                                    const std::filesystem::path& base_dir = {});
  static SweepConfig load(const std::filesystem::path& path);
  std::string to_json_text() const;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
  const AxisSpec* axis(std::string_view name) const;
  std::size_t point_count() const;
};

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names. Material and dataset paths point
/// into `data_dir`.
SweepConfig preset(std::string_view name, const std::filesystem::path& data_dir);
std::filesystem::path default_data_dir();

/// Table cell: number, text or missing.
struct Cell {
  enum class Kind { Null, Number, Text };
  Kind kind = Kind::Null;
  double number = 0.0;
  std::string text;

  static Cell null() { return {}; }
  static Cell of(double v);  // non-finite values become Null
  static Cell of(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
  bool operator==(const Cell& o) const;
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column_index(std::string_view name) const;  // throws if absent
  const Cell& at(std::size_t row, std::string_view column) const;
  /// Rows whose status column is not "ok".
  std::size_t flagged_rows() const;
  bool operator==(const SweepTable& o) const = default;
};

struct SweepResult {
  SweepTable table;
  double wall_seconds = 0.0;
  int workers = 1;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Evaluates every grid point. Rows appear in lexicographic order over the
/// axes as declared (last axis fastest) whatever the worker count. Failed
/// points are flagged in the `status` column instead of aborting; quadrature
/// failures keep their best estimates.
SweepResult run_sweep(const SweepConfig& cfg, const ProgressFn& progress = {});

int resolve_workers(int requested);

void write_csv(const SweepTable& t, std::ostream& out);
void write_json(const SweepTable& t, std::ostream& out);
SweepTable read_csv(std::istream& in);
SweepTable read_json(std::istream& in);
/// Format chosen by extension (.json, otherwise CSV).
void save_table(const SweepTable& t, const std::filesystem::path& path);
SweepTable load_table(const std::filesystem::path& path);

/// Sidecar with the config echo, versions, worker count and wall time.
void save_metadata(const SweepConfig& cfg, const SweepResult& r,
                   const std::filesystem::path& path);
std::filesystem::path metadata_path(const std::filesystem::path& output);

const char* library_version() noexcept;

}  // namespace critmed
