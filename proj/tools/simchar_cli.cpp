#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simchar/simchar.h"

namespace {

constexpr int kInvariantFailure = 1;
constexpr int kError = 2;

struct CliError {
  simchar_status status;
};

void check(simchar_status s) {
  if (s != SIMCHAR_OK) throw CliError{s};
}

struct ComplexHandle {
  simchar_complex* ptr = nullptr;
  ComplexHandle() = default;
  ComplexHandle(const ComplexHandle&) = delete;
  ComplexHandle& operator=(const ComplexHandle&) = delete;
  ~ComplexHandle() { simchar_complex_free(ptr); }
};

struct ModelHandle {
  simchar_model* ptr = nullptr;
  ModelHandle() = default;
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
  ~ModelHandle() { simchar_model_free(ptr); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  simchar_string_free(s);
  return out;
}

void emit(const std::string& path, const std::string& text, bool append) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, append ? std::ios::app | std::ios::binary : std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write '" << path << "'\n";
    throw CliError{SIMCHAR_IO_ERROR};
  }
}

unsigned load_flags = 0;

simchar_subdivision subdivision_kind(const std::string& kind) {
  if (kind == "perturbed") return SIMCHAR_SUBDIVIDE_PERTURBED;
  if (kind == "barycentric") return SIMCHAR_SUBDIVIDE_BARYCENTRIC;
  return SIMCHAR_SUBDIVIDE_MIDPOINT;
}

struct PairOptions {
  std::string complex;
  std::string kind = "perturbed";
  std::uint64_t seed = 1;
  double scale = 0.2;
};

void add_pair_options(CLI::App* app, PairOptions& o) {
  app->add_option("--complex", o.complex, "Complex file or catalog id")->required();
  app->add_option("--kind", o.kind, "Subdivision: perturbed | barycentric | midpoint")
      ->check(CLI::IsMember({"perturbed", "barycentric", "midpoint"}))
      ->capture_default_str();
  app->add_option("--seed", o.seed, "Perturbation seed")->capture_default_str();
  app->add_option("--scale", o.scale, "Perturbation scale")->capture_default_str();
}

void open_pair(const PairOptions& o, ComplexHandle& base, ComplexHandle& desc) {
  check(simchar_complex_open(o.complex.c_str(), load_flags, &base.ptr));
  check(simchar_complex_subdivide(base.ptr, subdivision_kind(o.kind), o.seed, o.scale, &desc.ptr));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete differential characters and abelian gauge partition functions"};
  app.require_subcommand(1);
  bool allow_boundary = false;
  app.add_flag("--allow-boundary", allow_boundary, "Accept complexes with boundary from files");
  app.parse_complete_callback([&] { load_flags = allow_boundary ? SIMCHAR_LOAD_ALLOW_BOUNDARY : 0u; });
  int exit_code = 0;

  // complex build|subdivide|measure
  CLI::App* complex = app.add_subcommand("complex", "Build, subdivide and measure complexes");
  complex->require_subcommand(1);
  std::string cx_in, cx_out, cx_kind = "perturbed";
  std::uint64_t cx_seed = 1;
  double cx_scale = 0.2;
  CLI::App* build = complex->add_subcommand("build", "Write a catalog or file complex in text form");
  build->add_option("--complex", cx_in, "Complex file or catalog id")->required();
  build->add_option("--out", cx_out, "Output file");
  build->callback([&] {
    ComplexHandle x;
    check(simchar_complex_open(cx_in.c_str(), load_flags, &x.ptr));
    char* text = nullptr;
    check(simchar_complex_to_text(x.ptr, &text));
    emit(cx_out, take(text), false);
  });
  CLI::App* sub = complex->add_subcommand("subdivide", "Subdivide a complex");
  sub->add_option("--complex", cx_in, "Complex file or catalog id")->required();
  sub->add_option("--kind", cx_kind, "perturbed | barycentric | midpoint")
      ->check(CLI::IsMember({"perturbed", "barycentric", "midpoint"}))
      ->capture_default_str();
  sub->add_option("--seed", cx_seed, "Perturbation seed")->capture_default_str();
  sub->add_option("--scale", cx_scale, "Perturbation scale")->capture_default_str();
  sub->add_option("--out", cx_out, "Output file");
  sub->callback([&] {
    ComplexHandle x, y;
    check(simchar_complex_open(cx_in.c_str(), load_flags, &x.ptr));
    check(simchar_complex_subdivide(x.ptr, subdivision_kind(cx_kind), cx_seed, cx_scale, &y.ptr));
    char* text = nullptr;
    check(simchar_complex_to_text(y.ptr, &text));
    emit(cx_out, take(text), false);
  });
  CLI::App* measure = complex->add_subcommand("measure", "Print f-vector, mesh, fullness and homology as JSON");
  measure->add_option("--complex", cx_in, "Complex file or catalog id")->required();
  measure->add_option("--out", cx_out, "Output file");
  measure->callback([&] {
    ComplexHandle x;
    check(simchar_complex_open(cx_in.c_str(), load_flags, &x.ptr));
    char* json = nullptr;
    check(simchar_complex_measure(x.ptr, &json));
    emit(cx_out, take(json) + "\n", false);
  });

  // verify-model
  PairOptions vm;
  std::string vm_out;
  CLI::App* verify = app.add_subcommand("verify-model", "Check the model axioms for a complex and subdivision");
  add_pair_options(verify, vm);
  verify->add_option("--out", vm_out, "JSONL output file");
  verify->callback([&] {
    ComplexHandle base, desc;
    open_pair(vm, base, desc);
    int passed = 0;
    char* json = nullptr;
    check(simchar_verify_model(base.ptr, desc.ptr, vm.seed, &passed, &json));
    emit(vm_out, take(json) + "\n", true);
    if (!passed) exit_code = kInvariantFailure;
  });

  // grid-check
  PairOptions gc;
  std::vector<int> gc_degrees = {0, 1};
  double gc_threshold = 1e-12;
  std::string gc_out;
  CLI::App* grid = app.add_subcommand("grid-check", "Rank table of the character exact sequences");
  add_pair_options(grid, gc);
  grid->add_option("--p", gc_degrees, "Character degrees")->capture_default_str();
  grid->add_option("--kernel-threshold", gc_threshold, "Relative Laplacian kernel threshold")->capture_default_str();
  grid->add_option("--out", gc_out, "JSONL output file");
  grid->callback([&] {
    ComplexHandle base, desc;
    open_pair(gc, base, desc);
    for (int p : gc_degrees) {
      ModelHandle m;
      check(simchar_model_create(base.ptr, desc.ptr, p, gc_threshold, &m.ptr));
      int exact = 0;
      char* json = nullptr;
      check(simchar_grid_check(m.ptr, &exact, &json));
      emit(gc_out, take(json) + "\n", true);
      if (!exact) exit_code = kInvariantFailure;
    }
  });

  // partition
  PairOptions pf;
  int pf_degree = 0;
  std::string pf_action = "maxwell", pf_observable = "const", pf_oracle = "none", pf_out;
  double pf_g2 = 1.0, pf_tolerance = 1e-12, pf_threshold = 1e-12, pf_oracle_tolerance = 0.0;
  int pf_window = 8;
  std::uint64_t pf_samples = 1000000, pf_oracle_seed = 1;
  CLI::App* part = app.add_subcommand("partition", "Evaluate the partition function");
  add_pair_options(part, pf);
  part->add_option("--p", pf_degree, "Character degree")->capture_default_str();
  part->add_option("--action", pf_action, "Action")->capture_default_str();
  part->add_option("--g2", pf_g2, "Coupling g^2")->capture_default_str();
  part->add_option("--observable", pf_observable, "const | wilson:<cycle>:<q>")->capture_default_str();
  part->add_option("--window", pf_window, "Initial class window radius")->capture_default_str();
  part->add_option("--tolerance", pf_tolerance, "Relative class-sum tail tolerance")->capture_default_str();
  part->add_option("--kernel-threshold", pf_threshold, "Relative Laplacian kernel threshold")->capture_default_str();
  part->add_option("--oracle", pf_oracle, "none | quadrature | mc")
      ->check(CLI::IsMember({"none", "quadrature", "mc"}))
      ->capture_default_str();
  part->add_option("--samples", pf_samples, "Monte Carlo samples")->capture_default_str();
  part->add_option("--oracle-seed", pf_oracle_seed, "Monte Carlo seed")->capture_default_str();
  part->add_option("--oracle-tolerance", pf_oracle_tolerance,
                   "Relative agreement required of the oracle; default 1e-6 for quadrature, 0.02 for mc");
  part->add_option("--out", pf_out, "JSONL output file");
  part->callback([&] {
    ComplexHandle base, desc;
    open_pair(pf, base, desc);
    ModelHandle m;
    check(simchar_model_create(base.ptr, desc.ptr, pf_degree, pf_threshold, &m.ptr));
    simchar_partition_options o;
    simchar_partition_options_default(&o);
    o.action = pf_action.c_str();
    o.g2 = pf_g2;
    o.observable = pf_observable.c_str();
    o.window = pf_window;
    o.tolerance = pf_tolerance;
    o.oracle = pf_oracle == "quadrature" ? SIMCHAR_ORACLE_QUADRATURE
               : pf_oracle == "mc"       ? SIMCHAR_ORACLE_MONTE_CARLO
                                         : SIMCHAR_ORACLE_NONE;
    o.samples = pf_samples;
    o.seed = pf_oracle_seed;
    simchar_partition_value v;
    char* json = nullptr;
    check(simchar_partition(m.ptr, &o, &v, &json));
    emit(pf_out, take(json) + "\n", true);
    const double tol = pf_oracle_tolerance > 0.0 ? pf_oracle_tolerance
                       : o.oracle == SIMCHAR_ORACLE_MONTE_CARLO ? 0.02
                                                                : 1e-6;
    const double diff = std::abs(v.value - v.oracle_value);
    if (o.oracle != SIMCHAR_ORACLE_NONE && !(diff <= tol * std::abs(v.value) || (v.value == 0.0 && diff <= 1e-300)))
      exit_code = kInvariantFailure;
  });

  // run
  std::string plan_path, run_out;
  CLI::App* run = app.add_subcommand("run", "Run a convergence plan");
  run->add_option("--plan", plan_path, "JSON plan file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Report prefix overriding the plan");
  run->callback([&] {
    int passed = 0;
    char* summary = nullptr;
    check(simchar_run_plan(plan_path.c_str(), run_out.empty() ? nullptr : run_out.c_str(), &passed, &summary));
    std::cout << take(summary) << "\n";
    if (!passed) exit_code = kInvariantFailure;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kError;
  } catch (const CliError& e) {
    std::cerr << "error: " << simchar_status_name(e.status) << ": " << simchar_last_error() << "\n";
    return kError;
  }
  return exit_code;
}
