#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "simchar/catalog.hpp"
#include "simchar/gauge.hpp"

namespace simchar {

struct LevelSpec {
  int depth = 0;
  std::uint64_t seed = 0;
  double scale = 0.2;
};

struct PlanChecks {
  // Minimum empirical order of the first-eigenvalue error; <= 0 disables.
  double eigenvalue_order = 0.0;
  // Maximum relative change of the fitted proxy constant over the last two levels; <= 0 disables.
  double proxy_constant_variation = 0.0;
  bool cauchy_decreasing = false;
  bool require_model = true;
};

struct ExperimentPlan {
  std::string manifold;
  std::vector<LevelSpec> levels;
  int degree = 0;
  double coupling = 1.0;
  // "const" or "wilson:<torus cycle>:<charge>".
  std::string observable = "const";
  int window = 8;
  double tail_tolerance = 1e-12;
  double fullness_floor = 0.01;
  bool verify_model = true;
  PlanChecks checks;
  // Output prefix; the runner writes <out>.csv and <out>.jsonl.
  std::string out;
};

// Observable from "const" or "wilson:<cycle index>:<charge>".
ObservableSpec parse_observable(const std::string& text, const CharacterModel& model);

ExperimentPlan parse_plan(const std::string& json_text);
ExperimentPlan load_plan(const std::string& path);
std::string plan_json(const ExperimentPlan& plan);
// FNV-1a of the canonical plan JSON without the output prefix, as 16 hex digits.
std::string config_hash(const ExperimentPlan& plan);

// Catalog complex refined `depth` times: circles and grid tori are regenerated
// at doubled resolution, other entries use midpoint refinement.
CatalogEntry level_catalog(const std::string& id, int depth);

// Smooth degree-0 character of the circle with form part (1 + cos t) dt / 2pi.
double circle_character(double angle);
double circle_form_integral(double from, double to);

struct ConvergenceRow {
  int level = 0;
  // Perturbation seed used, after any reseeding.
  std::uint64_t seed = 0;
  int vertices = 0;
  int top_simplices = 0;
  double mesh = 0.0;
  double mesh_desc = 0.0;
  double fullness = 0.0;
  // 1 pass, 0 fail, -1 not run.
  int model_passed = -1;
  double first_eigenvalue = 0.0;
  double eigenvalue_error = 0.0;
  double spectral_gap = 0.0;
  // Indexed by r = 0..p.
  std::vector<double> log_det_coexact;
  std::vector<double> log_det_h;
  double partition_value = 0.0;
  double log_abs_partition = 0.0;
  double log_topological = 0.0;
  // log |Z_k - Z_{k-1}| and |T_k - T_{k-1}| for the topological part; NaN on the first row.
  double log_cauchy = 0.0;
  double topological_cauchy = 0.0;
  double tail_relative = 0.0;
  double proxy_error = 0.0;
  double proxy_constant = 0.0;
};

// Proxy error of the circle character on every subdivision vertex.
double circle_proxy_error(const CharacterModel& m);

using RowCallback = std::function<void(const ConvergenceRow&)>;
std::vector<ConvergenceRow> run_convergence(const ExperimentPlan& plan, const RowCallback& on_row = {});

enum class ReportFormat { kCsv, kJsonl };

struct ReportMeta {
  std::string config_hash;
  int degree = 0;
};

std::vector<std::string> report_columns(int degree);
void write_report(std::ostream& os, const std::vector<ConvergenceRow>& rows, const ReportMeta& meta,
                  ReportFormat format);
void emit_report(const std::string& path, const std::vector<ConvergenceRow>& rows, const ReportMeta& meta,
                 ReportFormat format);
std::vector<ConvergenceRow> read_csv_report(std::istream& is, ReportMeta* meta = nullptr);

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};
std::vector<InvariantCheck> check_rows(const ExperimentPlan& plan, const std::vector<ConvergenceRow>& rows);

// Runs the plan, writing both reports as rows arrive; returns the invariant checks.
struct ExperimentResult {
  std::vector<ConvergenceRow> rows;
  std::vector<InvariantCheck> checks;
  bool passed() const;
};
ExperimentResult run_experiment(const ExperimentPlan& plan);

std::string format_double(double x);

}  // namespace simchar
