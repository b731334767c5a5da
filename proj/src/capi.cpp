#include "critmed/critmed.h"

#include <cstring>
#include <new>
#include <string>

#include "critmed/constants.hpp"
#include "critmed/errors.hpp"
#include "critmed/materials.hpp"
#include "critmed/rates.hpp"
#include "critmed/sweep.hpp"
#include "critmed/vo2.hpp"

struct cm_material {
  critmed::MaterialModel model;
};

struct cm_vo2 {
  critmed::Vo2Dataset data;
};

struct cm_sweep {
  critmed::SweepConfig config;
  mutable std::string output;  // backing store for cm_sweep_output
};

struct cm_table {
  critmed::SweepResult result;
};

namespace {

thread_local std::string last_error;

cm_status status_of(critmed::ErrorKind k) {
  using critmed::ErrorKind;
  switch (k) {
    case ErrorKind::InvalidArgument: return CM_INVALID_ARGUMENT;
    case ErrorKind::OutOfRange: return CM_OUT_OF_RANGE;
    case ErrorKind::SolverFailure: return CM_SOLVER_FAILURE;
    case ErrorKind::QuadratureFailure: return CM_QUADRATURE_FAILURE;
    case ErrorKind::IntegrationFailure: return CM_INTEGRATION_FAILURE;
    case ErrorKind::ConfigError: return CM_CONFIG_ERROR;
    case ErrorKind::IoError: return CM_IO_ERROR;
  }
  return CM_INTERNAL_ERROR;
}

template <typename F>
cm_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return CM_OK;
  } catch (const critmed::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CM_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CM_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return CM_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw critmed::InvalidArgument(what);
}

critmed::QuadratureConfig quadrature_of(const cm_quadrature* q) {
  critmed::QuadratureConfig c;
  if (q) {
    c.rel_tol = q->rel_tol;
    c.abs_tol = q->abs_tol;
    c.max_subdivisions = q->max_subdivisions;
    c.tail_threshold = q->tail_threshold;
  }
  return c;
}

void fill(cm_decoherence* out, const critmed::DecoherenceRates& r) {
  *out = {r.local, r.nonlocal, r.ratio, r.local_error, r.nonlocal_error, r.evaluations};
}

void fill(cm_collective* out, const critmed::CollectiveRates& r) {
  *out = {r.incoherent, r.coherent, r.ratio, r.incoherent_error, r.coherent_error,
          r.evaluations};
}

char* duplicate(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* cm_version(void) { return critmed::library_version(); }

const char* cm_last_error(void) { return last_error.c_str(); }

const char* cm_status_name(cm_status status) {
  switch (status) {
    case CM_OK: return "ok";
    case CM_INVALID_ARGUMENT: return "invalid-argument";
    case CM_OUT_OF_RANGE: return "out-of-range";
    case CM_SOLVER_FAILURE: return "solver-failure";
    case CM_QUADRATURE_FAILURE: return "quadrature-failure";
    case CM_INTEGRATION_FAILURE: return "integration-failure";
    case CM_CONFIG_ERROR: return "config-error";
    case CM_IO_ERROR: return "io-error";
    case CM_INTERNAL_ERROR: return "internal-error";
  }
  return "unknown";
}

void cm_string_free(char* s) { delete[] s; }

void cm_quadrature_defaults(cm_quadrature* q) {
  if (!q) return;
  const critmed::QuadratureConfig c;
  *q = {c.rel_tol, c.abs_tol, c.max_subdivisions, c.tail_threshold};
}

cm_status cm_material_load(const char* path, cm_material** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new cm_material{critmed::MaterialModel::load(path)};
  });
}

cm_status cm_material_from_json(const char* json, cm_material** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new cm_material{critmed::MaterialModel::from_json_text(json)};
  });
}

cm_status cm_material_permittivity(const cm_material* m, double omega, double* re,
                                   double* im) {
  return guarded([&] {
    require(m && re && im, "null argument");
    const auto e = m->model.permittivity(omega);
    *re = e.real();
    *im = e.imag();
  });
}

void cm_material_free(cm_material* m) { delete m; }

cm_status cm_bruggeman(double host_re, double host_im, double incl_re, double incl_im,
                       double f, double L, double* re, double* im, double* residual) {
  return guarded([&] {
    require(re && im, "null argument");
    const auto r = critmed::bruggeman_solve({host_re, host_im}, {incl_re, incl_im}, f, L);
    *re = r.value.real();
    *im = r.value.imag();
    if (residual) *residual = r.residual;
  });
}

cm_status cm_vo2_load(const char* path, cm_vo2** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new cm_vo2{critmed::Vo2Dataset::load_csv(path)};
  });
}

cm_status cm_vo2_synthetic(double lambda0, cm_vo2** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    critmed::SyntheticVo2Options opt;
    opt.lambda0 = lambda0;
    require(lambda0 > 0.0, "wavelength must be > 0");
    *out = new cm_vo2{critmed::synthetic_vo2_dataset(opt)};
  });
}

cm_status cm_vo2_save(const cm_vo2* ds, const char* path) {
  return guarded([&] {
    require(ds && path, "null argument");
    ds->data.save_csv(path);
  });
}

cm_status cm_vo2_effective(const cm_vo2* ds, double temperature, cm_branch branch,
                           double omega, double* re, double* im) {
  return guarded([&] {
    require(ds && re && im, "null argument");
    require(branch == CM_HEATING || branch == CM_COOLING, "unknown branch");
    const auto b = branch == CM_HEATING ? critmed::Branch::Heating : critmed::Branch::Cooling;
    const auto e = critmed::vo2_effective(ds->data, temperature, b, omega).value;
    *re = e.real();
    *im = e.imag();
  });
}

void cm_vo2_free(cm_vo2* ds) { delete ds; }

cm_status cm_decoherence_rates(double x, double z, double lambda0, double eps_re, double eps_im,
                               const cm_quadrature* q, cm_decoherence* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const critmed::EmitterGeometry g(x, z, lambda0);
    const critmed::SurfaceResponse s({eps_re, eps_im}, g.omega0());
    try {
      fill(out, critmed::decoherence_rates(g, s, quadrature_of(q)));
    } catch (const critmed::RateFailure& e) {
      fill(out, e.decoherence);
      throw;
    }
  });
}

cm_status cm_collective_rates(double x, double z, double lambda0, double eps_re, double eps_im,
                              const cm_quadrature* q, cm_collective* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const critmed::EmitterGeometry g(x, z, lambda0);
    const critmed::SurfaceResponse s({eps_re, eps_im}, g.omega0());
    try {
      fill(out, critmed::collective_rates(g, s, quadrature_of(q)));
    } catch (const critmed::RateFailure& e) {
      fill(out, e.collective);
      throw;
    }
  });
}

cm_status cm_bose_occupation(double omega0, double temperature, double* n) {
  return guarded([&] {
    require(n != nullptr, "null argument");
    *n = critmed::bose_occupation(omega0, temperature);
  });
}

cm_status cm_symmetric_decay_rate(const cm_collective* rates, double omega0, double temperature,
                                  double* rate) {
  return guarded([&] {
    require(rates && rate, "null argument");
    critmed::CollectiveRates cr;
    cr.incoherent = rates->incoherent;
    cr.coherent = rates->coherent;
    cr.ratio = rates->ratio;
    *rate = critmed::symmetric_decay_rate(cr, critmed::ThermalContext(temperature, omega0));
  });
}

size_t cm_preset_count(void) { return critmed::preset_names().size(); }

const char* cm_preset_name(size_t i) {
  static const auto names = critmed::preset_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

cm_status cm_sweep_preset(const char* name, const char* data_dir, cm_sweep** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = new cm_sweep{critmed::preset(name, data_dir ? data_dir : ""), {}};
  });
}

cm_status cm_sweep_load(const char* path, cm_sweep** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new cm_sweep{critmed::SweepConfig::load(path), {}};
  });
}

cm_status cm_sweep_from_json(const char* json, const char* base_dir, cm_sweep** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new cm_sweep{critmed::SweepConfig::from_json_text(json, base_dir ? base_dir : ""), {}};
  });
}

cm_status cm_sweep_set_lambda0(cm_sweep* s, double lambda0) {
  return guarded([&] {
    require(s != nullptr, "null argument");
    auto c = s->config;
    c.lambda0 = lambda0;
    c.validate();
    s->config = c;
  });
}

cm_status cm_sweep_set_workers(cm_sweep* s, int workers) {
  return guarded([&] {
    require(s != nullptr, "null argument");
    require(workers >= 0, "workers must be >= 0");
    s->config.workers = workers;
  });
}

cm_status cm_sweep_set_rel_tol(cm_sweep* s, double rel_tol) {
  return guarded([&] {
    require(s != nullptr, "null argument");
    auto c = s->config;
    c.quadrature.rel_tol = rel_tol;
    c.validate();
    s->config = c;
  });
}

cm_status cm_sweep_set_output(cm_sweep* s, const char* path) {
  return guarded([&] {
    require(s && path, "null argument");
    s->config.output = path;
  });
}

const char* cm_sweep_output(const cm_sweep* s) {
  if (!s) return "";
  s->output = s->config.output.string();
  return s->output.c_str();
}

size_t cm_sweep_point_count(const cm_sweep* s) { return s ? s->config.point_count() : 0; }

cm_status cm_sweep_to_json(const cm_sweep* s, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = duplicate(s->config.to_json_text());
  });
}

cm_status cm_sweep_run(const cm_sweep* s, cm_progress_fn progress, void* user, cm_table** out) {
  return guarded([&] {
    require(s && out, "null argument");
    critmed::ProgressFn fn;
    if (progress) fn = [=](std::size_t d, std::size_t t) { progress(d, t, user); };
    *out = new cm_table{critmed::run_sweep(s->config, fn)};
  });
}

cm_status cm_sweep_save(const cm_sweep* s, const cm_table* t, const char* path) {
  return guarded([&] {
    require(s && t && path, "null argument");
    critmed::save_table(t->result.table, path);
    critmed::save_metadata(s->config, t->result, critmed::metadata_path(path));
  });
}

void cm_sweep_free(cm_sweep* s) { delete s; }

cm_status cm_table_load(const char* path, cm_table** out) {
  return guarded([&] {
    require(path && out, "null argument");
    critmed::SweepResult r;
    r.table = critmed::load_table(path);
    *out = new cm_table{std::move(r)};
  });
}

cm_status cm_table_save(const cm_table* t, const char* path) {
  return guarded([&] {
    require(t && path, "null argument");
    critmed::save_table(t->result.table, path);
  });
}

size_t cm_table_rows(const cm_table* t) { return t ? t->result.table.rows.size() : 0; }

size_t cm_table_columns(const cm_table* t) { return t ? t->result.table.columns.size() : 0; }

const char* cm_table_column_name(const cm_table* t, size_t col) {
  if (!t || col >= t->result.table.columns.size()) return nullptr;
  return t->result.table.columns[col].c_str();
}

cm_status cm_table_column_index(const cm_table* t, const char* name, size_t* col) {
  return guarded([&] {
    require(t && name && col, "null argument");
    *col = t->result.table.column_index(name);
  });
}

cm_status cm_table_number(const cm_table* t, size_t row, size_t col, double* value,
                          int* is_null) {
  return guarded([&] {
    require(t && value, "null argument");
    const auto& rows = t->result.table.rows;
    if (row >= rows.size() || col >= t->result.table.columns.size())
      throw critmed::OutOfRange("table index out of range");
    const auto& c = rows[row][col];
    if (c.kind == critmed::Cell::Kind::Text) throw critmed::InvalidArgument("cell holds text");
    if (is_null) *is_null = c.kind == critmed::Cell::Kind::Null;
    *value = c.number;
  });
}

cm_status cm_table_text(const cm_table* t, size_t row, size_t col, const char** text) {
  return guarded([&] {
    require(t && text, "null argument");
    const auto& rows = t->result.table.rows;
    if (row >= rows.size() || col >= t->result.table.columns.size())
      throw critmed::OutOfRange("table index out of range");
    const auto& c = rows[row][col];
    if (c.kind == critmed::Cell::Kind::Number)
      throw critmed::InvalidArgument("cell holds a number");
    *text = c.text.c_str();
  });
}

size_t cm_table_flagged_rows(const cm_table* t) {
  if (!t) return 0;
  try {
    return t->result.table.flagged_rows();
  } catch (...) {
    return 0;
  }
}

double cm_table_wall_seconds(const cm_table* t) { return t ? t->result.wall_seconds : 0.0; }

int cm_table_equal(const cm_table* a, const cm_table* b) {
  if (!a || !b) return 0;
  return a->result.table == b->result.table ? 1 : 0;
}

void cm_table_free(cm_table* t) { delete t; }

}  // extern "C"
