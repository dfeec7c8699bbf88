#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "simchar/catalog.hpp"
#include "simchar/characters.hpp"
#include "simchar/complex.hpp"
#include "simchar/exact_algebra.hpp"
#include "simchar/gauge.hpp"
#include "simchar/harness.hpp"
#include "simchar/hodge.hpp"
#include "simchar/theta.hpp"
#include "simchar/whitney.hpp"

using namespace simchar;

namespace {

// First failed expectation wins the detail line.
struct Tally {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const std::vector<std::string>& manifold_ids() {
  static const std::vector<std::string> ids = {"s1(3)",        "s1(8)",       "t2_flat(7)",
                                               "t2_flat(3,3)", "s2_tetra(0)", "s2_tetra(1)",
                                               "unit_triangle_boundary"};
  return ids;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> nonzero_pencil(const Eigen::MatrixXd& a, const Eigen::MatrixXd& g) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()), g);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<double> out;
  for (double x : es.eigenvalues())
    if (x > 1e-10 * top) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

double spectra_defect(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return worst;
}

IntegralClass unit_class(const CharacterModel& m, int j, bool torsion) {
  IntegralClass c;
  c.free.assign(m.free_rank(), BigInt(0));
  c.torsion.assign(m.torsion_orders().size(), BigInt(0));
  (torsion ? c.torsion : c.free)[j] = 1;
  return c;
}

Tally model_axioms() {
  Tally t;
  const std::vector<std::pair<std::string, std::vector<int>>> cases = {
      {"s1(3)", {1, 1}}, {"t2_flat(7)", {1, 2, 1}}, {"s2_tetra(0)", {1, 0, 1}}};
  double worst_stokes = 0.0;
  for (const auto& [id, betti] : cases) {
    const ComplexPtr base = catalog(id).complex;
    const ModelReport r = verify_model(base, perturbed_subdivide(base, 11, 0.2), 11);
    worst_stokes = std::max(worst_stokes, r.stokes_residual);
    t.expect(r.passed(), id + " model check failed");
    t.expect(r.stokes_residual <= 1e-12, id + " Stokes residual " + fmt(r.stokes_residual));
    t.expect(r.pairing == CheckStatus::kPass && r.pairing_rank == r.pairing_expected, id + " pairing rank deficient");
    t.expect(r.de_rham_e == betti && r.de_rham_f == betti, id + " de Rham table differs from Betti numbers");
  }
  const ComplexPtr edge = catalog("unit_edge").complex;
  const ModelReport w = verify_model(edge, barycentric_subdivide(edge), 0);
  t.expect(!w.passed() && w.integrality == CheckStatus::kFail, "unit edge midpoint subdivision passed");
  t.expect(w.witness && w.witness->proven && w.witness->multiplier == 2, "midpoint witness missing");
  if (t.ok) t.detail = "max Stokes residual " + fmt(worst_stokes) + ", midpoint witness multiplier 2";
  return t;
}

Tally whitney_inverse() {
  Tally t;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  double worst = 0.0;
  long long exact_checked = 0;
  for (const auto& id : manifold_ids()) {
    const ComplexPtr x = catalog(id).complex;
    for (int s = 0; s < 1000; ++s) {
      const int k = s % (x->dim() + 1);
      Eigen::VectorXd v(x->count(k));
      for (auto& c : v) c = normal(rng);
      const Cochain back = de_rham_map(whitney(Cochain{k, x, v}), x);
      worst = std::max(worst, (back.coeffs - v).cwiseAbs().maxCoeff());
      std::vector<BigRational> q(x->count(k));
      for (auto& c : q) c = BigRational(num(rng), den(rng));
      const bool same = de_rham_map_exact(whitney_exact(x, k, q), x) == q;
      t.expect(same, id + " rational RW differs from the identity");
      ++exact_checked;
    }
  }
  t.expect(worst <= 1e-12, "float RW residual " + fmt(worst));
  if (t.ok) t.detail = "float max " + fmt(worst) + ", rational exact on " + std::to_string(exact_checked) + " cochains";
  return t;
}

Tally hodge_decomposition() {
  Tally t;
  std::mt19937_64 rng(21);
  double worst_sum = 0.0, worst_orth = 0.0;
  for (const auto& id : manifold_ids()) {
    const CatalogEntry e = catalog(id);
    const ComplexPtr l1 = perturbed_subdivide(e.complex, 1, 0.2);
    const ComplexPtr l2 = perturbed_subdivide(l1, 2, 0.2);
    for (const auto& x : {e.complex, l1, l2}) {
      const HodgeComplex hc(x);
      for (int p = 0; p <= hc.dim(); ++p) {
        const Eigen::MatrixXd total = hc.projector_harmonic(p) + hc.projector_exact(p) + hc.projector_coexact(p);
        for (int s = 0; s < 10; ++s) {
          const Eigen::VectorXd v = fixtures::random_vector(hc.size(p), rng);
          worst_sum = std::max(worst_sum, (v - total * v).norm() / v.norm());
        }
        const Eigen::MatrixXd& g = hc.gram(p);
        const Eigen::MatrixXd h = hc.harmonic_basis(p), ex = hc.exact_basis(p), co = hc.coexact_basis(p);
        auto orth = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
          if (a.cols() && b.cols()) worst_orth = std::max(worst_orth, (a.transpose() * g * b).cwiseAbs().maxCoeff());
        };
        orth(h, ex);
        orth(h, co);
        orth(ex, co);
        t.expect(hc.harmonic_dimension(p) == e.reference.betti[p], id + " harmonic dimension differs from b_p");
      }
    }
  }
  t.expect(worst_sum <= 1e-9, "projector sum residual " + fmt(worst_sum));
  t.expect(worst_orth <= 1e-9, "orthogonality defect " + fmt(worst_orth));
  if (t.ok) t.detail = "projector residual " + fmt(worst_sum) + ", orthogonality " + fmt(worst_orth);
  return t;
}

Tally exact_sequences() {
  Tally t;
  int grids = 0;
  std::vector<std::pair<std::string, ComplexPtr>> all;
  for (const auto& id : manifold_ids()) all.emplace_back(id, catalog(id).complex);
  all.emplace_back("rp2", fixtures::projective_plane());
  for (const auto& [id, base] : all) {
    const ComplexPtr desc = perturbed_subdivide(base, 1, 0.2);
    for (int p = 0; p <= 1 && p <= base->dim(); ++p) {
      const CharacterModel m(base, desc, p);
      const GridReport g = grid_table(m);
      ++grids;
      t.expect(g.exact, id + " p=" + std::to_string(p) + " grid fails at " + g.failing_node);
      // delta2 onto H^{p+1}(I) through explicit preimages.
      for (int j = 0; j < m.free_rank(); ++j) {
        const IntegralClass c = unit_class(m, j, false);
        t.expect(m.delta2(m.class_preimage(c)) == c, id + " free class not hit by delta2");
      }
      for (size_t j = 0; j < m.torsion_orders().size(); ++j) {
        const IntegralClass c = unit_class(m, static_cast<int>(j), true);
        t.expect(m.delta2(m.class_preimage(c)) == c, id + " torsion class not hit by delta2");
      }
      // delta1 reaches every exact direction.
      const Eigen::MatrixXd co = m.hodge().coexact_basis(p);
      for (int j = 0; j < co.cols(); ++j) {
        const Eigen::VectorXd w = m.delta1(m.coexact_character(co.col(j)));
        t.expect((w - m.hodge().coboundary(p) * co.col(j)).norm() <= 1e-10, id + " delta1 misses an exact direction");
      }
    }
  }
  if (t.ok) t.detail = std::to_string(grids) + " grids exact";
  return t;
}

Tally spark_round_trip() {
  Tally t;
  std::mt19937_64 rng(55);
  double worst_spark = 0.0, worst_cert = 0.0;
  int count = 0;
  for (const std::string id : {"s1(3)", "t2_flat(7)", "s2_tetra(0)"}) {
    const ComplexPtr base = catalog(id).complex;
    const ComplexPtr desc = perturbed_subdivide(base, 6, 0.2);
    for (int p = 0; p <= base->dim(); ++p) {
      const CharacterModel m(base, desc, p);
      for (int s = 0; s < 100; ++s) {
        const CharacterCoords ch = m.random_character(rng);
        const SparkTriple sp = m.to_spark(ch);
        worst_spark = std::max(worst_spark, m.spark_residual(sp));
        const CharacterCoords back = m.from_spark(sp);
        t.expect(m.coords_equal(ch, back, 1e-8), id + " spark round trip changed the character");
        const auto cert = m.equivalence(sp, m.to_spark(back));
        t.expect(cert.has_value(), id + " no equivalence certificate");
        if (cert) worst_cert = std::max(worst_cert, cert->residual);
        ++count;
      }
    }
  }
  t.expect(worst_spark <= 1e-10, "spark residual " + fmt(worst_spark));
  t.expect(worst_cert <= 1e-9, "certificate residual " + fmt(worst_cert));
  if (t.ok)
    t.detail = std::to_string(count) + " characters, spark " + fmt(worst_spark) + ", certificate " + fmt(worst_cert);
  return t;
}

Tally theta_and_determinants() {
  Tally t;
  double direct = 0.0;
  for (int v = -8; v <= 8; ++v) direct += std::exp(-M_PI * v * v);
  const ThetaResult th = theta(Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(0.0, 1.0)));
  const double theta_err = std::abs(th.value - direct);
  t.expect(theta_err <= 1e-10, "theta differs from the direct sum by " + fmt(theta_err));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  double worst_zeta = 0.0;
  for (int s = 0; s < 100; ++s) {
    Eigen::VectorXd d(1 + s % 20);
    for (auto& x : d) x = u(rng);
    const double det = d.prod();
    worst_zeta = std::max(worst_zeta, std::abs(std::exp(-spectral_zeta_derivative_at_zero(d)) - det) / det);
  }
  double worst_susy = 0.0;
  for (const auto& id : manifold_ids()) {
    const HodgeComplex hc(catalog(id).complex);
    for (int p = 0; p <= hc.dim(); ++p) {
      for (Subspace s : {Subspace::kExact, Subspace::kCoexact, Subspace::kNonzero}) {
        const Eigen::VectorXd spec = restricted_spectrum(hc, p, s);
        if (!spec.size()) continue;
        // Relative agreement of determinants is absolute agreement of their logs.
        worst_zeta = std::max(worst_zeta, std::abs(-spectral_zeta_derivative_at_zero(spec) - log_determinant(spec)));
      }
      if (p == hc.dim()) continue;
      const Eigen::MatrixXd& d = hc.coboundary(p);
      const Eigen::MatrixXd& g0 = hc.gram(p);
      const Eigen::MatrixXd& g1 = hc.gram(p + 1);
      const auto down = nonzero_pencil(d.transpose() * g1 * d, g0);
      const auto up = nonzero_pencil(g1 * d * g0.inverse() * d.transpose() * g1, g1);
      worst_susy = std::max(worst_susy, spectra_defect(down, up));
      const Eigen::VectorXd coexact = restricted_spectrum(hc, p, Subspace::kCoexact);
      const Eigen::VectorXd exact = restricted_spectrum(hc, p + 1, Subspace::kExact);
      std::vector<double> a(coexact.data(), coexact.data() + coexact.size());
      std::vector<double> b(exact.data(), exact.data() + exact.size());
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      worst_susy = std::max(worst_susy, spectra_defect(a, b));
    }
  }
  t.expect(worst_zeta <= 1e-10, "zeta determinant defect " + fmt(worst_zeta));
  t.expect(worst_susy <= 1e-8, "supersymmetric spectrum defect " + fmt(worst_susy));
  if (t.ok)
    t.detail = "theta " + fmt(theta_err) + ", zeta " + fmt(worst_zeta) + ", supersymmetry " + fmt(worst_susy);
  return t;
}

Tally oracle_agreement() {
  Tally t;
  std::string detail;
  const std::vector<std::pair<std::string, int>> cases = {{"s1(8)", 0}, {"s2_tetra(1)", 1}};
  for (const auto& [id, p] : cases) {
    const ComplexPtr base = catalog(id).complex;
    const CharacterModel m(base, perturbed_subdivide(base, 3, 0.2), p);
    const PartitionResult z = partition_function(m, {}, {});
    OracleOptions q;
    const OracleResult quad = partition_oracle(m, {}, {}, q);
    const double rq = std::abs(quad.value - z.value) / std::abs(z.value);
    OracleOptions mc;
    mc.method = OracleMethod::kMonteCarlo;
    mc.samples = 1000000;
    mc.seed = 20240601;
    const OracleResult sampled = partition_oracle(m, {}, {}, mc);
    const double rm = std::abs(sampled.value - z.value) / std::abs(z.value);
    t.expect(rq <= 1e-6, id + " quadrature relative difference " + fmt(rq));
    t.expect(rm <= 0.02, id + " Monte Carlo relative difference " + fmt(rm));
    detail += (detail.empty() ? "" : "; ") + id + " quadrature " + fmt(rq) + ", mc " + fmt(rm);
  }
  if (t.ok) t.detail = detail;
  return t;
}

struct PlanRun {
  ExperimentResult result;
  std::string csv;
  std::string jsonl;
};

PlanRun run_plan(const std::string& path, const std::string& out) {
  ExperimentPlan plan = load_plan(path);
  plan.out = out;
  PlanRun r;
  r.result = run_experiment(plan);
  r.csv = slurp(out + ".csv");
  r.jsonl = slurp(out + ".jsonl");
  return r;
}

std::string plan_dir;
std::string work_dir;
std::vector<PlanRun> first_runs;

Tally convergence_trends() {
  Tally t;
  std::string detail;
  for (const std::string name : {"s1_convergence", "t2_convergence"}) {
    first_runs.push_back(run_plan(plan_dir + "/" + name + ".json", work_dir + "/" + name + "_a"));
    for (const auto& c : first_runs.back().result.checks) {
      t.expect(c.passed, name + " check " + c.name + " failed " + c.detail);
      if (c.name == "eigenvalue_order" || c.name == "proxy_constant") detail += c.name + " " + c.detail + "; ";
    }
    t.expect(!first_runs.back().result.checks.empty(), name + " produced no checks");
  }
  const auto& s1 = first_runs[0].result.checks;
  const auto has = [&](const char* n) {
    return std::any_of(s1.begin(), s1.end(), [&](const InvariantCheck& c) { return c.name == n; });
  };
  t.expect(has("eigenvalue_order") && has("proxy_constant") && has("partition_cauchy"), "s1 plan lacks trend checks");
  const auto& t2 = first_runs[1].result.checks;
  t.expect(std::any_of(t2.begin(), t2.end(), [](const InvariantCheck& c) { return c.name == "partition_cauchy"; }),
           "t2 plan lacks the Cauchy check");
  if (t.ok) t.detail = detail + "Cauchy differences decreasing on s1 and t2";
  return t;
}

Tally determinism() {
  Tally t;
  int i = 0;
  for (const std::string name : {"s1_convergence", "t2_convergence"}) {
    if (i >= static_cast<int>(first_runs.size())) {
      t.expect(false, "first runs missing");
      break;
    }
    const PlanRun again = run_plan(plan_dir + "/" + name + ".json", work_dir + "/" + name + "_b");
    t.expect(!again.csv.empty() && again.csv == first_runs[i].csv, name + " CSV reports differ");
    t.expect(!again.jsonl.empty() && again.jsonl == first_runs[i].jsonl, name + " JSONL reports differ");
    ++i;
  }
  if (t.ok) t.detail = "CSV and JSONL byte identical for both plans";
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  plan_dir = argc > 1 ? argv[1] : "tools/plans";
  work_dir = (std::filesystem::temp_directory_path() / "simchar_acceptance").string();
  std::filesystem::create_directories(work_dir);

  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Tally()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "model axioms", 10.0, model_axioms},
      {2, "RW identity", 5.0, whitney_inverse},
      {3, "Hodge decomposition", 60.0, hodge_decomposition},
      {4, "exact sequences", 60.0, exact_sequences},
      {5, "spark round trip", 30.0, spark_round_trip},
      {6, "theta and determinants", 10.0, theta_and_determinants},
      {7, "partition oracle agreement", 300.0, oracle_agreement},
      {8, "convergence trends", 600.0, convergence_trends},
      {9, "determinism", 1e300, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Tally t;
    try {
      t = c.run();
    } catch (const std::exception& e) {
      t.ok = false;
      t.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (t.ok && seconds > c.budget) {
      t.ok = false;
      t.detail = "runtime " + fmt(seconds) + " s exceeds " + fmt(c.budget) + " s";
    }
    if (!t.ok) ++failed;
    std::printf("%s criterion %d %s: %s (%.2f s)\n", t.ok ? "PASS" : "FAIL", c.id, c.name, t.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
