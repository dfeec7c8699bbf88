#include "simchar/simchar.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "simchar/catalog.hpp"
#include "simchar/characters.hpp"
#include "simchar/complex.hpp"
#include "simchar/error.hpp"
#include "simchar/exact_algebra.hpp"
#include "simchar/gauge.hpp"
#include "simchar/harness.hpp"

struct simchar_complex {
  simchar::ComplexPtr ptr;
};

struct simchar_model {
  std::unique_ptr<simchar::CharacterModel> model;
};

namespace {

thread_local std::string last_error;

template <typename F>
simchar_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return SIMCHAR_OK;
  } catch (const simchar::Error& e) {
    last_error = e.what();
    return static_cast<simchar_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SIMCHAR_TOO_LARGE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SIMCHAR_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) simchar::fail(simchar::ErrorCode::kInvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_string(char** out, const std::string& s) {
  if (out) *out = copy_string(s);
}

simchar_complex* wrap(simchar::ComplexPtr p) { return new simchar_complex{std::move(p)}; }

simchar::BuildOptions load_options(unsigned flags) {
  simchar::BuildOptions o;
  o.require_closed = (flags & SIMCHAR_LOAD_ALLOW_BOUNDARY) == 0;
  return o;
}

}  // namespace

extern "C" {

const char* simchar_status_name(simchar_status status) {
  if (status == SIMCHAR_OK) return "Ok";
  if (status == SIMCHAR_INTERNAL_ERROR) return "InternalError";
  if (status < SIMCHAR_INVALID_ARGUMENT || status > SIMCHAR_PARSE_ERROR) return "Unknown";
  return simchar::error_name(static_cast<simchar::ErrorCode>(status));
}

const char* simchar_last_error(void) { return last_error.c_str(); }

void simchar_string_free(char* s) { std::free(s); }

simchar_status simchar_complex_catalog(const char* id, simchar_complex** out) {
  return guarded([&] {
    require(id && out, "null argument");
    *out = wrap(simchar::catalog(id).complex);
  });
}

simchar_status simchar_complex_load(const char* path, unsigned flags, simchar_complex** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = wrap(simchar::load_complex(path, load_options(flags)));
  });
}

simchar_status simchar_complex_open(const char* spec, unsigned flags, simchar_complex** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) *out = wrap(simchar::load_complex(spec, load_options(flags)));
    else *out = wrap(simchar::catalog(spec).complex);
  });
}

simchar_status simchar_complex_from_text(const char* text, unsigned flags, simchar_complex** out) {
  return guarded([&] {
    require(text && out, "null argument");
    std::istringstream in(text);
    *out = wrap(simchar::read_complex(in, load_options(flags)));
  });
}

simchar_status simchar_complex_to_text(const simchar_complex* x, char** out) {
  return guarded([&] {
    require(x && out, "null argument");
    std::ostringstream os;
    simchar::write_complex(os, *x->ptr);
    *out = copy_string(os.str());
  });
}

simchar_status simchar_complex_save(const simchar_complex* x, const char* path) {
  return guarded([&] {
    require(x && path, "null argument");
    simchar::save_complex(path, *x->ptr);
  });
}

simchar_status simchar_complex_subdivide(const simchar_complex* x, simchar_subdivision kind, uint64_t seed,
                                         double scale, simchar_complex** out) {
  return guarded([&] {
    require(x && out, "null argument");
    switch (kind) {
      case SIMCHAR_SUBDIVIDE_BARYCENTRIC: *out = wrap(simchar::barycentric_subdivide(x->ptr)); break;
      case SIMCHAR_SUBDIVIDE_PERTURBED: *out = wrap(simchar::perturbed_subdivide(x->ptr, seed, scale)); break;
      case SIMCHAR_SUBDIVIDE_MIDPOINT: *out = wrap(simchar::midpoint_subdivide(x->ptr)); break;
      default: simchar::fail(simchar::ErrorCode::kInvalidArgument, "unknown subdivision kind");
    }
  });
}

simchar_status simchar_complex_dimension(const simchar_complex* x, int* dim) {
  return guarded([&] {
    require(x && dim, "null argument");
    *dim = x->ptr->dim();
  });
}

simchar_status simchar_complex_count(const simchar_complex* x, int k, int* count) {
  return guarded([&] {
    require(x && count, "null argument");
    if (k < 0 || k > x->ptr->dim()) simchar::fail(simchar::ErrorCode::kDegreeOutOfRange, "degree out of range");
    *count = x->ptr->count(k);
  });
}

simchar_status simchar_complex_mesh(const simchar_complex* x, double* mesh) {
  return guarded([&] {
    require(x && mesh, "null argument");
    *mesh = simchar::mesh(*x->ptr);
  });
}

simchar_status simchar_complex_fullness(const simchar_complex* x, double* fullness) {
  return guarded([&] {
    require(x && fullness, "null argument");
    *fullness = simchar::fullness(*x->ptr);
  });
}

simchar_status simchar_complex_measure(const simchar_complex* x, char** json) {
  return guarded([&] {
    require(x && json, "null argument");
    const simchar::SimplicialComplex& c = *x->ptr;
    nlohmann::ordered_json j;
    j["dim"] = c.dim();
    j["embed_dim"] = c.embed_dim();
    j["f_vector"] = c.f_vector();
    j["mesh"] = simchar::mesh(c);
    j["fullness"] = simchar::fullness(c);
    const simchar::HomologyTable h = simchar::homology_table(c);
    j["betti"] = h.betti;
    nlohmann::ordered_json torsion = nlohmann::ordered_json::array();
    for (const auto& t : h.torsion) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (const auto& d : t) row.push_back(d.str());
      torsion.push_back(row);
    }
    j["torsion"] = torsion;
    *json = copy_string(j.dump());
  });
}

void simchar_complex_free(simchar_complex* x) { delete x; }

simchar_status simchar_verify_model(const simchar_complex* base, const simchar_complex* desc, uint64_t seed,
                                    int* passed, char** json) {
  return guarded([&] {
    require(base && desc, "null argument");
    const simchar::ModelReport r = simchar::verify_model(base->ptr, desc->ptr, seed);
    if (passed) *passed = r.passed() ? 1 : 0;
    set_string(json, simchar::to_json(r));
  });
}

simchar_status simchar_model_create(const simchar_complex* base, const simchar_complex* desc, int degree,
                                    double kernel_threshold, simchar_model** out) {
  return guarded([&] {
    require(base && desc && out, "null argument");
    require(kernel_threshold > 0.0, "kernel threshold must be positive");
    simchar::HodgeOptions opts;
    opts.kernel_threshold = kernel_threshold;
    *out = new simchar_model{std::make_unique<simchar::CharacterModel>(base->ptr, desc->ptr, degree, opts)};
  });
}

simchar_status simchar_model_torus_dimension(const simchar_model* m, int* dim) {
  return guarded([&] {
    require(m && dim, "null argument");
    *dim = m->model->torus_dimension();
  });
}

simchar_status simchar_model_free_rank(const simchar_model* m, int* rank) {
  return guarded([&] {
    require(m && rank, "null argument");
    *rank = m->model->free_rank();
  });
}

simchar_status simchar_model_torsion_order(const simchar_model* m, char** order) {
  return guarded([&] {
    require(m && order, "null argument");
    simchar::BigInt n = 1;
    for (const auto& t : m->model->torsion_orders()) n *= t;
    *order = copy_string(n.str());
  });
}

void simchar_model_free(simchar_model* m) { delete m; }

simchar_status simchar_grid_check(const simchar_model* m, int* exact, char** json) {
  return guarded([&] {
    require(m, "null argument");
    const simchar::GridReport g = simchar::grid_table(*m->model);
    if (exact) *exact = g.exact ? 1 : 0;
    set_string(json, simchar::to_json(g));
  });
}

void simchar_partition_options_default(simchar_partition_options* opts) {
  if (!opts) return;
  opts->action = "maxwell";
  opts->g2 = 1.0;
  opts->observable = "const";
  opts->window = 8;
  opts->tolerance = 1e-12;
  opts->oracle = SIMCHAR_ORACLE_NONE;
  opts->samples = 1000000;
  opts->seed = 1;
}

simchar_status simchar_partition(const simchar_model* m, const simchar_partition_options* opts,
                                 simchar_partition_value* value, char** json) {
  return guarded([&] {
    require(m, "null argument");
    simchar_partition_options o;
    simchar_partition_options_default(&o);
    if (opts) o = *opts;
    if (o.action && std::strcmp(o.action, "maxwell") != 0)
      simchar::fail(simchar::ErrorCode::kUnsupportedAction, std::string("unsupported action '") + o.action + "'");
    simchar::ActionSpec action;
    action.coupling = o.g2;
    const simchar::ObservableSpec obs = simchar::parse_observable(o.observable ? o.observable : "const", *m->model);
    simchar::PartitionOptions popts;
    popts.radius = o.window;
    popts.tolerance = o.tolerance;
    simchar::PartitionResult r = simchar::partition_function(*m->model, action, obs, popts);
    std::optional<simchar::OracleResult> oracle;
    if (o.oracle != SIMCHAR_ORACLE_NONE) {
      simchar::OracleOptions oo;
      oo.method = o.oracle == SIMCHAR_ORACLE_MONTE_CARLO ? simchar::OracleMethod::kMonteCarlo
                                                         : simchar::OracleMethod::kQuadrature;
      oo.radius = o.window;
      oo.samples = o.samples;
      oo.seed = o.seed;
      oracle = simchar::partition_oracle(*m->model, action, obs, oo);
      r.oracle_value = oracle->value;
    }
    if (value) {
      value->value = r.value;
      value->imaginary = r.imaginary;
      value->log_abs_value = r.log_abs_value;
      value->oracle_value = oracle ? oracle->value : 0.0;
      value->oracle_standard_error = oracle ? oracle->standard_error : 0.0;
    }
    if (json) {
      auto j = nlohmann::ordered_json::parse(simchar::to_json(r));
      if (oracle) {
        j["oracle"] = {{"method", o.oracle == SIMCHAR_ORACLE_MONTE_CARLO ? "monte_carlo" : "quadrature"},
                       {"value", oracle->value},
                       {"imaginary", oracle->imaginary},
                       {"standard_error", oracle->standard_error},
                       {"separability_residual", oracle->separability_residual},
                       {"dimension", oracle->dimension},
                       {"classes", oracle->classes},
                       {"relative_difference", std::abs(r.value - oracle->value) / std::abs(r.value)}};
      }
      *json = copy_string(j.dump());
    }
  });
}

simchar_status simchar_run_plan(const char* plan_path, const char* out_prefix, int* passed, char** summary_json) {
  return guarded([&] {
    require(plan_path, "null argument");
    simchar::ExperimentPlan plan = simchar::load_plan(plan_path);
    if (out_prefix) plan.out = out_prefix;
    const simchar::ExperimentResult r = simchar::run_experiment(plan);
    if (passed) *passed = r.passed() ? 1 : 0;
    if (summary_json) {
      nlohmann::ordered_json j;
      j["config_hash"] = simchar::config_hash(plan);
      j["levels"] = r.rows.size();
      j["passed"] = r.passed();
      nlohmann::ordered_json checks = nlohmann::ordered_json::array();
      for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      j["checks"] = checks;
      if (!plan.out.empty()) j["reports"] = {plan.out + ".csv", plan.out + ".jsonl"};
      *summary_json = copy_string(j.dump());
    }
  });
}

}  // extern "C"
