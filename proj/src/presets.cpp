#include <cmath>

#include "critmed/errors.hpp"
#include "critmed/sweep.hpp"

#ifndef CRITMED_DEFAULT_DATA_DIR
#define CRITMED_DEFAULT_DATA_DIR "data"
#endif

namespace critmed {

namespace fs = std::filesystem;

namespace {

constexpr double kCritical = 1.0 / 3.0;

AxisSpec values(std::string name, std::vector<double> v) { return {std::move(name), std::move(v), {}}; }

// 161 points over [0, 0.8], three times denser within 0.02 of f = 1/3 and
// with a node exactly at 1/3.
AxisSpec filling_axis() {
  auto base = linspace(0.0, 0.8, 161);
  const double step = 0.8 / 160;
  DensifyBand band{kCritical - 0.02 + 1e-3 * step, kCritical + 0.02 - 1e-3 * step, 3, kCritical};
  return values("f", densify(base, {band}));
}

// 161 points over [320, 360] K, three times denser in [334, 344] K.
AxisSpec temperature_axis() {
  return values("T_K", densify(linspace(320.0, 360.0, 161), {{334.0, 344.0, 3, 334.0}}));
}

AxisSpec both_branches() { return {"branch", {}, {"heating", "cooling"}}; }

SweepConfig percolation(std::string name, Observable obs, double x, std::vector<double> z,
                        const fs::path& data) {
  SweepConfig c;
  c.name = std::move(name);
  c.scenario = Scenario::PercolationComposite;
  c.observable = obs;
  c.axes = {values("x_over_lambda", {x}), values("z_over_lambda", std::move(z)),
            filling_axis()};
  c.host_material = data / "materials" / "polystyrene_drude_lorentz.json";
  c.inclusion_material = data / "materials" / "gold_drude.json";
  c.include_vacuum = true;
  return c;
}

SweepConfig vo2(std::string name, Observable obs, std::vector<AxisSpec> axes, const fs::path& data) {
  SweepConfig c;
  c.name = std::move(name);
  c.scenario = Scenario::Vo2;
  c.observable = obs;
  c.axes = std::move(axes);
  c.vo2_dataset = data / "vo2_synthetic.csv";
  c.include_vacuum = true;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5"};
}

fs::path default_data_dir() { return CRITMED_DEFAULT_DATA_DIR; }

SweepConfig preset(std::string_view name, const fs::path& data_dir) {
  const fs::path d = data_dir.empty() ? default_data_dir() : data_dir;
  SweepConfig c;
  if (name == "fig2a") {
    c = percolation("fig2a", Observable::Decoherence, 0.7, {1e-2, 1e-3, 1e-4}, d);
  } else if (name == "fig2b") {
    c = percolation("fig2b", Observable::Decoherence, 0.1, {1e-2, 1e-3, 1e-4}, d);
  } else if (name == "fig3a") {
    c = vo2("fig3a", Observable::Decoherence,
            {both_branches(), values("x_over_lambda", {0.7}),
             values("z_over_lambda", {1e-3, 1e-2, 1e-1}), temperature_axis()},
            d);
  } else if (name == "fig3b") {
    c = vo2("fig3b", Observable::Decoherence,
            {both_branches(), values("T_K", {342.0}), values("x_over_lambda", {0.05, 0.3}),
             values("z_over_lambda", logspace(-4.0, -1.0, 161))},
            d);
  } else if (name == "fig4") {
    c = percolation("fig4", Observable::Collective, 0.1, {1e-1, 1e-2, 1e-3, 1e-4}, d);
  } else if (name == "fig5") {
    c = vo2("fig5", Observable::Collective,
            {both_branches(), values("x_over_lambda", {0.1}),
             values("z_over_lambda", {1e-3, 1e-2, 1e-1}), temperature_axis()},
            d);
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  c.validate();
  return c;
}

}  // namespace critmed
