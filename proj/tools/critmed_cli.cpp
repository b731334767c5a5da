// Command-line front end. Talks to the engine only through the C API.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "critmed/critmed.h"

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double omega_of(double lambda0) { return 2.0 * M_PI * kSpeedOfLight / lambda0; }

struct Failure {
  cm_status status;
  std::string message;
};

void check(cm_status s) {
  if (s != CM_OK) throw Failure{s, cm_last_error()};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Permittivity source shared by the single-point subcommands.
struct EpsOptions {
  std::optional<double> eps_re, eps_im;
  std::string material, host, inclusion, vo2;
  std::optional<double> f, temperature;
  double L = 1.0 / 3.0;
  std::string branch = "heating";

  void add_to(CLI::App* app) {
    app->add_option("--eps-re", eps_re, "Real part of the surface permittivity");
    app->add_option("--eps-im", eps_im, "Imaginary part of the surface permittivity");
    app->add_option("--material", material, "Material JSON evaluated at the transition");
    app->add_option("--host", host, "Host material JSON of a composite");
    app->add_option("--inclusion", inclusion, "Inclusion material JSON of a composite");
    app->add_option("--f", f, "Filling factor of the composite")->check(CLI::Range(0.0, 1.0));
    app->add_option("--L", L, "Depolarization factor")->check(CLI::Range(0.0, 1.0));
    app->add_option("--vo2", vo2, "VO2 dataset CSV, or 'synthetic'");
    app->add_option("--T", temperature, "Temperature (K) for the VO2 lookup");
    app->add_option("--branch", branch, "heating | cooling")
        ->check(CLI::IsMember({"heating", "cooling"}));
  }

  // Returns the permittivity at omega and a short description.
  std::pair<double, double> resolve(double omega, std::string& what) const {
    double re = 0, im = 0;
    if (eps_re || eps_im) {
      what = "given";
      return {eps_re.value_or(1.0), eps_im.value_or(0.0)};
    }
    if (!material.empty()) {
      cm_material* m = nullptr;
      check(cm_material_load(material.c_str(), &m));
      const cm_status s = cm_material_permittivity(m, omega, &re, &im);
      cm_material_free(m);
      check(s);
      what = material;
      return {re, im};
    }
    if (!host.empty() || !inclusion.empty()) {
      if (host.empty() || inclusion.empty() || !f)
        throw CLI::ValidationError("composite needs --host, --inclusion and --f");
      double hre, him, ire, iim;
      cm_material* m = nullptr;
      check(cm_material_load(host.c_str(), &m));
      cm_status s = cm_material_permittivity(m, omega, &hre, &him);
      cm_material_free(m);
      check(s);
      check(cm_material_load(inclusion.c_str(), &m));
      s = cm_material_permittivity(m, omega, &ire, &iim);
      cm_material_free(m);
      check(s);
      check(cm_bruggeman(hre, him, ire, iim, *f, L, &re, &im, nullptr));
      what = "composite f=" + num(*f) + " L=" + num(L);
      return {re, im};
    }
    if (!vo2.empty()) {
      if (!temperature) throw CLI::ValidationError("--vo2 needs --T");
      cm_vo2* ds = nullptr;
      check(vo2 == "synthetic" ? cm_vo2_synthetic(2.0 * M_PI * kSpeedOfLight / omega, &ds)
                               : cm_vo2_load(vo2.c_str(), &ds));
      const cm_status s = cm_vo2_effective(
          ds, *temperature, branch == "heating" ? CM_HEATING : CM_COOLING, omega, &re, &im);
      cm_vo2_free(ds);
      check(s);
      what = "VO2 " + branch + " T=" + num(*temperature) + " K";
      return {re, im};
    }
    what = "vacuum";
    return {1.0, 0.0};
  }
};

struct SweepOptions {
  std::string preset, config, data_dir, out;
  std::optional<double> lambda0_um, rel_tol;
  std::optional<int> workers;
  bool quiet = false;

  void add_to(CLI::App* app, bool with_run_flags) {
    auto* p = app->add_option("--preset", preset, "Built-in figure preset");
    auto* c = app->add_option("--config", config, "Sweep config JSON");
    p->excludes(c);
    app->add_option("--data-dir", data_dir, "Directory with shipped materials and datasets");
    app->add_option("--lambda0-um", lambda0_um, "Override the transition wavelength (um)");
    app->add_option("--rel-tol", rel_tol, "Override the quadrature relative tolerance");
    if (with_run_flags) {
      app->add_option("--workers", workers, "Worker threads (0: automatic)");
      app->add_option("--out", out, "Output path (.csv or .json)");
      app->add_flag("--quiet", quiet, "No progress output");
    }
  }

  cm_sweep* build() const {
    if (preset.empty() == config.empty())
      throw CLI::ValidationError("give exactly one of --preset or --config");
    cm_sweep* s = nullptr;
    if (!preset.empty())
      check(cm_sweep_preset(preset.c_str(), data_dir.empty() ? nullptr : data_dir.c_str(), &s));
    else
      check(cm_sweep_load(config.c_str(), &s));
    try {
      if (lambda0_um) check(cm_sweep_set_lambda0(s, *lambda0_um * 1e-6));
      if (rel_tol) check(cm_sweep_set_rel_tol(s, *rel_tol));
      if (workers) check(cm_sweep_set_workers(s, *workers));
      if (!out.empty()) check(cm_sweep_set_output(s, out.c_str()));
    } catch (...) {
      cm_sweep_free(s);
      throw;
    }
    return s;
  }
};

void progress(size_t done, size_t total, void*) {
  if (done == total || done % 10 == 0)
    std::fprintf(stderr, "\r%zu/%zu points", done, total);
  if (done == total) std::fputc('\n', stderr);
}

int run_sweep(const SweepOptions& o) {
  cm_sweep* s = o.build();
  cm_table* t = nullptr;
  const cm_status st = cm_sweep_run(s, o.quiet ? nullptr : progress, nullptr, &t);
  if (st != CM_OK) {
    cm_sweep_free(s);
    check(st);
  }
  std::string out = cm_sweep_output(s);
  if (out.empty()) out = (o.preset.empty() ? std::string("sweep") : o.preset) + ".csv";
  const cm_status saved = cm_sweep_save(s, t, out.c_str());
  const size_t rows = cm_table_rows(t);
  const size_t flagged = cm_table_flagged_rows(t);
  const double secs = cm_table_wall_seconds(t);
  cm_table_free(t);
  cm_sweep_free(s);
  check(saved);
  std::cout << "wrote " << out << ": " << rows << " rows, " << flagged << " flagged, "
            << num(secs) << " s\n";
  return flagged == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoherence and collective emission near critical media"};
  app.set_version_flag("--version", std::string(cm_version()));
  app.require_subcommand(1);

  double lambda0_um = 450.0;
  std::optional<double> rel_tol;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--lambda0-um", lambda0_um, "Transition wavelength (um)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--rel-tol", rel_tol, "Quadrature relative tolerance")
        ->check(CLI::PositiveNumber);
  };

  auto* perm = app.add_subcommand("permittivity", "Permittivity at the transition wavelength");
  EpsOptions perm_eps;
  perm_eps.add_to(perm);
  add_common(perm);

  double x = 0.0, z = 0.0;
  std::optional<double> temperature;
  auto* dec = app.add_subcommand("decoherence", "Decoherence rates at one geometry");
  EpsOptions dec_eps;
  dec_eps.add_to(dec);
  add_common(dec);
  dec->add_option("--x", x, "Wavepacket separation / lambda0")->required();
  dec->add_option("--z", z, "Height / lambda0")->required();
  dec->add_option("--temperature", temperature, "Also print thermal rates at this T (K)");

  auto* col = app.add_subcommand("collective", "Collective emission rates at one geometry");
  EpsOptions col_eps;
  col_eps.add_to(col);
  add_common(col);
  col->add_option("--x", x, "Emitter separation / lambda0")->required();
  col->add_option("--z", z, "Height / lambda0")->required();
  col->add_option("--temperature", temperature, "Also print the symmetric-state decay at T (K)");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  SweepOptions sweep_opts;
  sweep_opts.add_to(sweep, true);

  auto* validate = app.add_subcommand("validate-config", "Check a sweep config and echo it");
  SweepOptions validate_opts;
  validate_opts.add_to(validate, false);

  auto* synth = app.add_subcommand("vo2-synthetic", "Write the synthetic VO2 dataset");
  std::string synth_out = "vo2_synthetic.csv";
  synth->add_option("--out", synth_out, "Output CSV");
  synth->add_option("--lambda0-um", lambda0_um, "Wavelength for the metallic permittivity (um)");

  auto* presets = app.add_subcommand("presets", "List figure presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the failure exit code; --help still exits 0.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const double lambda0 = lambda0_um * 1e-6;
    const double omega = omega_of(lambda0);
    cm_quadrature q;
    cm_quadrature_defaults(&q);
    if (rel_tol) q.rel_tol = *rel_tol;

    if (*perm) {
      std::string what;
      const auto [re, im] = perm_eps.resolve(omega, what);
      std::cout << "omega0 = " << num(omega) << " rad/s\n"
                << "eps (" << what << ") = " << num(re) << " + " << num(im) << "i\n";
      return 0;
    }
    if (*dec || *col) {
      std::string what;
      const auto [re, im] = (*dec ? dec_eps : col_eps).resolve(omega, what);
      std::cout << "eps (" << what << ") = " << num(re) << " + " << num(im) << "i\n";
      cm_status st;
      if (*dec) {
        cm_decoherence r{};
        st = cm_decoherence_rates(x, z, lambda0, re, im, &q, &r);
        std::cout << "local = " << num(r.local) << "\nnonlocal = " << num(r.nonlocal)
                  << "\nratio = " << num(r.ratio) << "\nerrors = " << num(r.local_error)
                  << ", " << num(r.nonlocal_error) << "\n";
        if (temperature && st == CM_OK) {
          double n = 0;
          check(cm_bose_occupation(omega, *temperature, &n));
          std::cout << "n = " << num(n) << "\nthermal local = " << num((n + 1) * r.local)
                    << "\nthermal nonlocal = " << num((n + 1) * r.nonlocal) << "\n";
        }
      } else {
        cm_collective r{};
        st = cm_collective_rates(x, z, lambda0, re, im, &q, &r);
        std::cout << "incoherent = " << num(r.incoherent) << "\ncoherent = " << num(r.coherent)
                  << "\nratio = " << num(r.ratio) << "\nerrors = " << num(r.incoherent_error)
                  << ", " << num(r.coherent_error) << "\n";
        if (temperature && st == CM_OK) {
          double rate = 0;
          check(cm_symmetric_decay_rate(&r, omega, *temperature, &rate));
          std::cout << "symmetric decay = " << num(rate) << "\n";
        }
      }
      if (st != CM_OK) std::cout << "(best estimate only)\n";
      check(st);
      return 0;
    }
    if (*sweep) return run_sweep(sweep_opts);
    if (*validate) {
      cm_sweep* s = validate_opts.build();
      char* json = nullptr;
      const cm_status st = cm_sweep_to_json(s, &json);
      const size_t points = cm_sweep_point_count(s);
      cm_sweep_free(s);
      check(st);
      std::cout << json << "\n" << points << " grid points\n";
      cm_string_free(json);
      return 0;
    }
    if (*synth) {
      cm_vo2* ds = nullptr;
      check(cm_vo2_synthetic(lambda0, &ds));
      const cm_status st = cm_vo2_save(ds, synth_out.c_str());
      cm_vo2_free(ds);
      check(st);
      std::cout << "wrote " << synth_out << "\n";
      return 0;
    }
    if (*presets) {
      for (size_t i = 0; i < cm_preset_count(); ++i) std::cout << cm_preset_name(i) << "\n";
      return 0;
    }
  } catch (const Failure& f) {
    std::cerr << "error (" << cm_status_name(f.status) << "): " << f.message << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
  return 0;
}
