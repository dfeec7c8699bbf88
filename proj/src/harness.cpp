#include "simchar/harness.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "simchar/error.hpp"

namespace simchar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kReseedAttempts = 4;

std::uint64_t reseed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Json = nlohmann::ordered_json;

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

double log_abs_difference(double la, int sa, double lb, int sb) {
  if (sa == 0 || !std::isfinite(la)) return lb;
  if (sb == 0 || !std::isfinite(lb)) return la;
  const double hi = std::max(la, lb), lo = std::min(la, lb);
  if (sa == sb) return lo == hi ? -std::numeric_limits<double>::infinity() : hi + std::log1p(-std::exp(lo - hi));
  return hi + std::log1p(std::exp(lo - hi));
}

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

double angle_of(const SimplicialComplex& x, int v) { return std::atan2(x.coordinates()(v, 1), x.coordinates()(v, 0)); }

}  // namespace

ObservableSpec parse_observable(const std::string& text, const CharacterModel& m) {
  if (text == "const") return {};
  static const std::regex wilson(R"(^wilson:(\d+):(-?\d+)$)");
  std::smatch s;
  if (!std::regex_match(text, s, wilson)) fail(ErrorCode::kParseError, "unknown observable '" + text + "'");
  const int j = std::stoi(s[1]);
  if (j >= m.torus_dimension()) fail(ErrorCode::kIndexOutOfRange, "Wilson cycle index out of range");
  return wilson_observable(m.torus_cycles().column(j), std::stoll(s[2]));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ExperimentPlan parse_plan(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::kParseError, std::string("plan is not valid JSON: ") + e.what());
  }
  ExperimentPlan p;
  try {
    p.manifold = j.at("manifold").get<std::string>();
    const double scale = get_or<double>(j, "scale", 0.2);
    std::vector<std::uint64_t> seeds;
    if (j.contains("seeds")) seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    const Json& levels = j.at("levels");
    for (size_t i = 0; i < levels.size(); ++i) {
      LevelSpec l;
      l.scale = scale;
      l.seed = seeds.empty() ? i + 1 : seeds.size() == 1 ? seeds[0] : seeds.at(i);
      if (levels[i].is_object()) {
        l.depth = levels[i].at("depth").get<int>();
        l.seed = get_or<std::uint64_t>(levels[i], "seed", l.seed);
        l.scale = get_or<double>(levels[i], "scale", l.scale);
      } else {
        l.depth = levels[i].get<int>();
      }
      p.levels.push_back(l);
    }
    p.degree = get_or<int>(j, "p", 0);
    if (j.contains("action")) {
      const Json& a = j.at("action");
      if (a.is_string()) {
        if (a.get<std::string>() != "maxwell") fail(ErrorCode::kUnsupportedAction, "plans support the maxwell action");
      } else {
        if (get_or<std::string>(a, "kind", "maxwell") != "maxwell")
          fail(ErrorCode::kUnsupportedAction, "plans support the maxwell action");
        p.coupling = get_or<double>(a, "g2", 1.0);
      }
    }
    p.observable = get_or<std::string>(j, "observable", "const");
    p.window = get_or<int>(j, "window", 8);
    p.verify_model = get_or<bool>(j, "verify_model", true);
    if (j.contains("tolerances")) {
      const Json& t = j.at("tolerances");
      p.tail_tolerance = get_or<double>(t, "tail", p.tail_tolerance);
      p.fullness_floor = get_or<double>(t, "fullness_floor", p.fullness_floor);
      p.checks.eigenvalue_order = get_or<double>(t, "eigenvalue_order", 0.0);
      p.checks.proxy_constant_variation = get_or<double>(t, "proxy_constant_variation", 0.0);
      p.checks.cauchy_decreasing = get_or<bool>(t, "cauchy_decreasing", false);
      p.checks.require_model = get_or<bool>(t, "require_model", true);
    }
    p.out = get_or<std::string>(j, "out", "");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::kParseError, std::string("invalid plan: ") + e.what());
  }
  if (p.levels.empty()) fail(ErrorCode::kInvalidArgument, "plan has no levels");
  for (size_t i = 1; i < p.levels.size(); ++i)
    if (p.levels[i].depth <= p.levels[i - 1].depth) fail(ErrorCode::kInvalidArgument, "levels must be strictly increasing");
  if (!(p.coupling > 0.0)) fail(ErrorCode::kInvalidArgument, "coupling must be positive");
  return p;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read plan '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str());
}

std::string plan_json(const ExperimentPlan& p) {
  Json j;
  j["manifold"] = p.manifold;
  Json levels = Json::array();
  for (const auto& l : p.levels) levels.push_back({{"depth", l.depth}, {"seed", l.seed}, {"scale", l.scale}});
  j["levels"] = levels;
  j["p"] = p.degree;
  j["action"] = {{"kind", "maxwell"}, {"g2", p.coupling}};
  j["observable"] = p.observable;
  j["window"] = p.window;
  j["verify_model"] = p.verify_model;
  j["tolerances"] = {{"tail", p.tail_tolerance},
                     {"fullness_floor", p.fullness_floor},
                     {"eigenvalue_order", p.checks.eigenvalue_order},
                     {"proxy_constant_variation", p.checks.proxy_constant_variation},
                     {"cauchy_decreasing", p.checks.cauchy_decreasing},
                     {"require_model", p.checks.require_model}};
  j["out"] = p.out;
  return j.dump();
}

std::string config_hash(const ExperimentPlan& plan) {
  ExperimentPlan keyed = plan;
  keyed.out.clear();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : plan_json(keyed)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CatalogEntry level_catalog(const std::string& id, int depth) {
  if (depth < 0) fail(ErrorCode::kInvalidArgument, "negative level depth");
  static const std::regex one(R"(^\s*(\w+)\s*\(\s*(\d+)\s*\)\s*$)");
  static const std::regex two(R"(^\s*(\w+)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$)");
  std::smatch m;
  const long long f = 1LL << depth;
  if (std::regex_match(id, m, one)) {
    if (m[1] == "s1") return catalog("s1(" + std::to_string(std::stoll(m[2]) * f) + ")");
    if (m[1] == "s2_tetra") return catalog("s2_tetra(" + std::to_string(std::stoll(m[2]) + depth) + ")");
  } else if (std::regex_match(id, m, two) && m[1] == "t2_flat") {
    return catalog("t2_flat(" + std::to_string(std::stoll(m[2]) * f) + "," + std::to_string(std::stoll(m[3]) * f) + ")");
  }
  CatalogEntry e = catalog(id);
  for (int d = 0; d < depth; ++d) e.complex = midpoint_subdivide(e.complex);
  e.id = id + "@" + std::to_string(depth);
  return e;
}

double circle_character(double angle) {
  const double t = angle - 2.0 * M_PI * std::floor(angle / (2.0 * M_PI));
  return mod_one((t + std::sin(t)) / (2.0 * M_PI));
}

double circle_form_integral(double from, double to) {
  const double span = wrap_angle(to - from);
  auto eta = [](double t) { return (1.0 + std::cos(t)) / (2.0 * M_PI); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(eta, from, from + span, 8, 1e-15);
}

double circle_proxy_error(const CharacterModel& m) {
  const ComplexPtr& base = m.base();
  const ComplexPtr& desc = m.desc();
  if (m.degree() != 0 || base->dim() != 1 || base->embed_dim() != 2)
    fail(ErrorCode::kInvalidArgument, "the circle proxy needs a degree-0 model of a planar circle");
  // Field strength R(eta) on the base edges.
  Eigen::VectorXd field(base->count(1));
  for (int k = 0; k < base->count(1); ++k) {
    const Simplex& e = base->simplex(1, k);
    field[k] = base->orientation(1, k) * circle_form_integral(angle_of(*base, e[0]), angle_of(*base, e[1]));
  }
  CharacterCoords ch = m.zero();
  const IntegralBasis cycles = integral_basis(*base, 1);
  for (int j = 0; j < cycles.betti(); ++j)
    ch.c.free[j] = BigInt(static_cast<long long>(std::llround(field.dot(to_double(cycles.cycles.column(j))))));
  Eigen::VectorXd rhs = field;
  for (int j = 0; j < m.free_rank(); ++j) rhs -= ch.c.free[j].convert_to<double>() * m.harmonic_basis_next().col(j);
  const Eigen::MatrixXd co = m.hodge().coexact_basis(0);
  const Eigen::MatrixXd dco = m.hodge().coboundary(0) * co;
  ch.tau = co * dco.colPivHouseholderQr().solve(rhs);

  auto smooth = [&](const IntegerVector& chain) {
    double s = 0.0;
    for (size_t v = 0; v < chain.size(); ++v)
      if (chain[v] != 0) s += chain[v].convert_to<double>() * circle_character(angle_of(*desc, static_cast<int>(v)));
    return mod_one(s);
  };
  for (int j = 0; j < m.torus_dimension(); ++j) {
    const IntegerVector gamma = m.torus_cycles().column(j);
    ch.z[j] = mod_one(smooth(gamma) - m.evaluate(ch, gamma));
  }
  double err = 0.0;
  IntegerVector point(desc->count(0), BigInt(0));
  for (int v = 0; v < desc->count(0); ++v) {
    point[v] = 1;
    err = std::max(err, circle_distance(smooth(point), m.evaluate(ch, point)));
    point[v] = 0;
  }
  return err;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentPlan& plan, const RowCallback& on_row) {
  std::vector<ConvergenceRow> rows;
  ActionSpec action;
  action.coupling = plan.coupling;
  PartitionOptions popts;
  popts.radius = plan.window;
  popts.tolerance = plan.tail_tolerance;
  const bool circle_proxy = plan.degree == 0 && plan.manifold.rfind("s1(", 0) == 0;
  int prev_sign = 0;
  double prev_constant = 0.0;
  for (const LevelSpec& level : plan.levels) {
    const CatalogEntry entry = level_catalog(plan.manifold, level.depth);
    const ComplexPtr base = entry.complex;
    if (plan.degree < 0 || plan.degree > base->dim()) fail(ErrorCode::kDegreeOutOfRange, "plan degree out of range");
    ConvergenceRow row;
    row.level = level.depth;
    row.vertices = base->count(0);
    row.top_simplices = base->count(base->dim());
    row.mesh = mesh(*base);
    row.fullness = fullness(*base);
    if (row.fullness < plan.fullness_floor) fail(ErrorCode::kInvalidArgument, "fullness below the plan floor");
    // A detected integer relation rejects the perturbation and reseeds.
    std::uint64_t seed = level.seed;
    ComplexPtr desc = perturbed_subdivide(base, seed, level.scale);
    if (plan.verify_model) {
      for (int attempt = 0;; ++attempt) {
        const ModelReport report = verify_model(base, desc, seed);
        row.model_passed = report.passed() ? 1 : 0;
        const bool relation = report.integrality == CheckStatus::kFail && report.stokes == CheckStatus::kPass &&
                              report.pairing == CheckStatus::kPass && report.de_rham == CheckStatus::kPass;
        if (row.model_passed || !relation || attempt + 1 >= kReseedAttempts) break;
        seed = reseed(seed);
        desc = perturbed_subdivide(base, seed, level.scale);
      }
    }
    row.seed = seed;
    row.mesh_desc = mesh(*desc);

    const CharacterModel model(base, desc, plan.degree);
    const HodgeComplex& hc = model.hodge();
    const Eigen::VectorXd lap0 = restricted_spectrum(hc, 0, Subspace::kNonzero);
    row.first_eigenvalue = lap0.size() ? lap0.minCoeff() : kNaN;
    row.eigenvalue_error = entry.reference.has_first_eigenvalue
                               ? std::abs(row.first_eigenvalue - entry.reference.first_eigenvalue) /
                                     entry.reference.first_eigenvalue
                               : kNaN;
    const Eigen::VectorXd lapp = restricted_spectrum(hc, plan.degree, Subspace::kNonzero);
    row.spectral_gap = lapp.size() ? lapp.minCoeff() : kNaN;

    const PartitionResult z = partition_function(model, action, parse_observable(plan.observable, model), popts);
    row.log_det_coexact = z.prefactor.log_det_coexact;
    row.log_det_h = z.prefactor.log_det_h;
    row.partition_value = z.value;
    row.log_abs_partition = z.log_abs_value;
    row.tail_relative = z.truncation.tail_relative;
    const double log_tor = std::log(z.prefactor.torsion_order.convert_to<double>());
    double topo = std::log(std::abs(z.class_sum.mantissa.real()));
    for (int r = 0; r <= plan.degree; ++r)
      topo += ((plan.degree - r) % 2 == 0 ? 1.0 : -1.0) * (0.5 * z.prefactor.log_det_h[r] - log_tor);
    row.log_topological = topo;
    const int sign = z.class_sum.mantissa.real() > 0 ? 1 : z.class_sum.mantissa.real() < 0 ? -1 : 0;
    if (rows.empty()) {
      row.log_cauchy = kNaN;
      row.topological_cauchy = kNaN;
    } else {
      row.log_cauchy = log_abs_difference(row.log_abs_partition, sign, rows.back().log_abs_partition, prev_sign);
      row.topological_cauchy = std::abs(row.log_topological - rows.back().log_topological);
    }
    prev_sign = sign;

    if (circle_proxy) {
      row.proxy_error = circle_proxy_error(model);
      prev_constant = std::max(prev_constant, row.proxy_error / row.mesh_desc);
      row.proxy_constant = prev_constant;
    } else {
      row.proxy_error = kNaN;
      row.proxy_constant = kNaN;
    }
    rows.push_back(row);
    if (on_row) on_row(row);
  }
  return rows;
}

std::vector<std::string> report_columns(int degree) {
  std::vector<std::string> c = {"config_hash", "level", "seed", "vertices", "top_simplices", "mesh", "mesh_desc",
                                "fullness", "model_passed", "first_eigenvalue", "eigenvalue_error", "spectral_gap"};
  for (int r = 0; r <= degree; ++r) c.push_back("log_det_coexact_" + std::to_string(r));
  for (int r = 0; r <= degree; ++r) c.push_back("log_det_h_" + std::to_string(r));
  for (const char* s : {"partition_value", "log_abs_partition", "log_topological", "log_cauchy", "topological_cauchy",
                        "tail_relative", "proxy_error", "proxy_constant"})
    c.push_back(s);
  return c;
}

namespace {

// Formatted values in column order; the bool marks numeric fields.
std::vector<std::pair<std::string, bool>> row_values(const ConvergenceRow& r, const ReportMeta& meta) {
  std::vector<std::pair<std::string, bool>> v;
  auto num = [&](double x) { v.emplace_back(format_double(x), true); };
  auto integer = [&](long long x) { v.emplace_back(std::to_string(x), true); };
  v.emplace_back(meta.config_hash, false);
  integer(r.level);
  v.emplace_back(std::to_string(r.seed), true);
  integer(r.vertices);
  integer(r.top_simplices);
  num(r.mesh);
  num(r.mesh_desc);
  num(r.fullness);
  integer(r.model_passed);
  num(r.first_eigenvalue);
  num(r.eigenvalue_error);
  num(r.spectral_gap);
  for (int k = 0; k <= meta.degree; ++k) num(k < static_cast<int>(r.log_det_coexact.size()) ? r.log_det_coexact[k] : kNaN);
  for (int k = 0; k <= meta.degree; ++k) num(k < static_cast<int>(r.log_det_h.size()) ? r.log_det_h[k] : kNaN);
  for (double x : {r.partition_value, r.log_abs_partition, r.log_topological, r.log_cauchy, r.topological_cauchy,
                   r.tail_relative, r.proxy_error, r.proxy_constant})
    num(x);
  return v;
}

void write_header(std::ostream& os, const ReportMeta& meta, ReportFormat format) {
  if (format != ReportFormat::kCsv) return;
  const auto cols = report_columns(meta.degree);
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
}

void write_row(std::ostream& os, const ConvergenceRow& r, const ReportMeta& meta, ReportFormat format) {
  const auto cols = report_columns(meta.degree);
  const auto vals = row_values(r, meta);
  if (format == ReportFormat::kCsv) {
    for (size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << vals[i].first;
  } else {
    os << "{";
    for (size_t i = 0; i < vals.size(); ++i) {
      os << (i ? "," : "") << "\"" << cols[i] << "\":";
      const std::string& s = vals[i].first;
      if (!vals[i].second) os << "\"" << s << "\"";
      else if (s == "nan" || s == "inf" || s == "-inf") os << "null";
      else os << s;
    }
    os << "}";
  }
  os << "\n";
}

}  // namespace

void write_report(std::ostream& os, const std::vector<ConvergenceRow>& rows, const ReportMeta& meta,
                  ReportFormat format) {
  write_header(os, meta, format);
  for (const auto& r : rows) write_row(os, r, meta, format);
}

void emit_report(const std::string& path, const std::vector<ConvergenceRow>& rows, const ReportMeta& meta,
                 ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write report '" + path + "'");
  write_report(out, rows, meta, format);
  if (!out) fail(ErrorCode::kIoError, "failed writing report '" + path + "'");
}

std::vector<ConvergenceRow> read_csv_report(std::istream& is, ReportMeta* meta) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorCode::kParseError, "report has no header");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  int degree = -1;
  for (const auto& c : cols)
    if (c.rfind("log_det_h_", 0) == 0) degree = std::max(degree, std::stoi(c.substr(10)));
  if (degree < 0 || cols != report_columns(degree)) fail(ErrorCode::kParseError, "unexpected report columns");
  ReportMeta m;
  m.degree = degree;
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) f.push_back(c);
    if (f.size() != cols.size()) fail(ErrorCode::kParseError, "report row has wrong field count");
    size_t i = 0;
    auto d = [&]() { return std::strtod(f[i++].c_str(), nullptr); };
    auto n = [&]() { return std::stoll(f[i++]); };
    ConvergenceRow r;
    m.config_hash = f[i++];
    r.level = static_cast<int>(n());
    r.seed = std::stoull(f[i++]);
    r.vertices = static_cast<int>(n());
    r.top_simplices = static_cast<int>(n());
    r.mesh = d();
    r.mesh_desc = d();
    r.fullness = d();
    r.model_passed = static_cast<int>(n());
    r.first_eigenvalue = d();
    r.eigenvalue_error = d();
    r.spectral_gap = d();
    for (int k = 0; k <= degree; ++k) r.log_det_coexact.push_back(d());
    for (int k = 0; k <= degree; ++k) r.log_det_h.push_back(d());
    for (double* x : {&r.partition_value, &r.log_abs_partition, &r.log_topological, &r.log_cauchy,
                      &r.topological_cauchy, &r.tail_relative, &r.proxy_error, &r.proxy_constant})
      *x = d();
    rows.push_back(std::move(r));
  }
  if (meta) *meta = m;
  return rows;
}

std::vector<InvariantCheck> check_rows(const ExperimentPlan& plan, const std::vector<ConvergenceRow>& rows) {
  std::vector<InvariantCheck> out;
  auto add = [&](std::string name, bool ok, std::string detail) { out.push_back({std::move(name), ok, std::move(detail)}); };
  {
    bool ok = true;
    for (size_t i = 1; i < rows.size(); ++i) ok = ok && rows[i].mesh < rows[i - 1].mesh;
    add("mesh_decreasing", ok, "");
  }
  {
    bool ok = true;
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      ok = ok && r.fullness >= plan.fullness_floor;
      lo = std::min(lo, r.fullness);
    }
    add("fullness_floor", ok, "min fullness " + format_double(lo));
  }
  if (plan.verify_model && plan.checks.require_model) {
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.model_passed == 1;
    add("model_axioms", ok, "");
  }
  {
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.tail_relative < plan.tail_tolerance;
    add("class_sum_tail", ok, "");
  }
  if (plan.checks.eigenvalue_order > 0.0) {
    bool ok = rows.size() >= 2;
    std::string detail;
    for (size_t i = 1; i < rows.size(); ++i) {
      const double order = std::log(rows[i - 1].eigenvalue_error / rows[i].eigenvalue_error) /
                           std::log(rows[i - 1].mesh / rows[i].mesh);
      ok = ok && order >= plan.checks.eigenvalue_order;
      detail += (detail.empty() ? "" : " ") + format_double(order);
    }
    add("eigenvalue_order", ok, "orders " + detail);
  }
  if (plan.checks.proxy_constant_variation > 0.0) {
    bool ok = rows.size() >= 2;
    double variation = kNaN;
    if (ok) {
      const double a = rows[rows.size() - 2].proxy_constant, b = rows.back().proxy_constant;
      variation = std::abs(b - a) / a;
      ok = variation < plan.checks.proxy_constant_variation;
      for (const auto& r : rows) ok = ok && r.proxy_error <= r.proxy_constant * r.mesh_desc * (1 + 1e-12);
    }
    add("proxy_constant", ok, "variation " + format_double(variation));
  }
  if (plan.checks.cauchy_decreasing) {
    bool ok = rows.size() >= 3;
    for (size_t i = 2; i < rows.size(); ++i) ok = ok && rows[i].log_cauchy < rows[i - 1].log_cauchy;
    add("partition_cauchy", ok, "");
  }
  return out;
}

bool ExperimentResult::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  const ReportMeta meta{config_hash(plan), plan.degree};
  std::ofstream csv, jsonl;
  if (!plan.out.empty()) {
    csv.open(plan.out + ".csv", std::ios::binary);
    jsonl.open(plan.out + ".jsonl", std::ios::binary);
    if (!csv || !jsonl) fail(ErrorCode::kIoError, "cannot open report files at '" + plan.out + "'");
    write_header(csv, meta, ReportFormat::kCsv);
    csv.flush();
  }
  ExperimentResult res;
  res.rows = run_convergence(plan, [&](const ConvergenceRow& r) {
    if (plan.out.empty()) return;
    write_row(csv, r, meta, ReportFormat::kCsv);
    write_row(jsonl, r, meta, ReportFormat::kJsonl);
    csv.flush();
    jsonl.flush();
  });
  res.checks = check_rows(plan, res.rows);
  return res;
}

}  // namespace simchar
