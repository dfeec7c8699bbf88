#include <Eigen/QR>
#include <cmath>
#include <map>
#include <numeric>

#include "json.hpp"
#include "simchar/characters.hpp"
#include "simchar/error.hpp"
#include "simchar/integer_relation.hpp"
#include "simchar/whitney.hpp"

namespace simchar {

namespace {

constexpr double kStokesTolerance = 1e-12;
constexpr double kRankThreshold = 1e-10;
constexpr double kIntegralTolerance = 1e-9;

int rank_of(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(kRankThreshold);
  return static_cast<int>(qr.rank());
}

double sparse_max_abs(const Eigen::SparseMatrix<double>& m) {
  double r = 0.0;
  for (int o = 0; o < m.outerSize(); ++o)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, o); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

// Rank of W' certified by the left inverse sd^T, with a dense fallback.
int embedding_rank(const SimplicialComplex& base, const SimplicialComplex& desc, int k,
                   const Eigen::SparseMatrix<double>& w) {
  const Eigen::SparseMatrix<double> sd = subdivision_chain_map(desc, base, k).cast<double>();
  Eigen::SparseMatrix<double> left = sd.transpose() * w;
  Eigen::SparseMatrix<double> id(left.rows(), left.cols());
  id.setIdentity();
  left -= id;
  if (sparse_max_abs(left) <= 1e-12) return static_cast<int>(w.cols());
  return rank_of(Eigen::MatrixXd(w));
}

bool chain_squares_to_zero(const SimplicialComplex& x) {
  for (int k = 1; k < x.dim(); ++k) {
    const IncidenceMatrix p = x.boundary(k) * x.boundary(k + 1);
    for (int o = 0; o < p.outerSize(); ++o)
      for (IncidenceMatrix::InnerIterator it(p, o); it; ++it)
        if (it.value() != 0) return false;
  }
  return true;
}

// Integrality in one degree: pairwise independence of child integrals per base simplex.
CheckStatus integrality_degree(const SimplicialComplex& base, const SimplicialComplex& desc, int k,
                               const Eigen::SparseMatrix<double>& w, const DescentMap& map,
                               std::optional<IntegralityWitness>& witness) {
  std::vector<std::vector<int>> children(base.count(k));
  for (int c = 0; c < desc.count(k); ++c) {
    const SimplexRef r = map.carriers[k][c];
    if (r.dim == k) children[r.index].push_back(c);
  }
  for (int s = 0; s < base.count(k); ++s) {
    const auto& kids = children[s];
    std::vector<double> values;
    for (int c : kids) values.push_back(std::abs(w.coeff(c, s)));
    IntegralityWitness wt;
    wt.degree = k;
    wt.simplex = s;
    bool related = kids.size() < 2;
    if (kids.size() == 1) {
      wt.child_a = kids[0];
      wt.integral_a = values[0];
    }
    for (size_t i = 0; i < kids.size() && !related; ++i)
      for (size_t j = i + 1; j < kids.size() && !related; ++j) {
        const auto rel = find_integer_relation(values[i], values[j], kRelationMaxCoefficient, kRelationTolerance);
        if (!rel) continue;
        related = true;
        wt.child_a = kids[i];
        wt.child_b = kids[j];
        wt.integral_a = values[i];
        wt.integral_b = values[j];
        wt.relation_a = rel->a;
        wt.relation_b = rel->b;
      }
    if (!related) continue;
    long long n = 1;
    for (double v : values) {
      const auto q = rational_denominator(v, kRelationMaxCoefficient, kRelationTolerance);
      if (!q) {
        n = 0;
        break;
      }
      n = std::lcm(n, static_cast<long long>(*q));
    }
    wt.multiplier = n;
    if (n > 0) {
      bool integral = true;
      for (Eigen::SparseMatrix<double>::InnerIterator it(w, s); it; ++it) {
        const double v = n * it.value();
        if (std::abs(v - std::round(v)) > kIntegralTolerance) integral = false;
      }
      wt.proven = integral;
    }
    if (!witness) witness = wt;
    return CheckStatus::kFail;
  }
  return CheckStatus::kHeuristicPass;
}

nlohmann::json invariants_json(const GroupInvariants& g) {
  return {{"dimension", g.dimension},
          {"component_rank", g.component_rank},
          {"component_torsion", g.component_torsion.str()},
          {"loop_rank", g.loop_rank}};
}

}  // namespace

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kHeuristicPass:
      return "heuristic-pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kNotApplicable:
      return "not-applicable";
  }
  return "fail";
}

bool ModelReport::passed() const {
  for (CheckStatus s : {freeness, pairing, integrality, stokes, de_rham})
    if (s == CheckStatus::kFail) return false;
  return true;
}

ModelReport verify_model(const ComplexPtr& base, const ComplexPtr& desc, std::uint64_t seed) {
  ModelReport r;
  r.seed = seed;
  const auto map = descent_map(*desc, *base);
  if (!map) fail(ErrorCode::kNoParentLink, "subdivision does not descend from base");
  const int n = base->dim();
  WhitneyIntegrator in(*desc, *base);
  std::vector<Eigen::SparseMatrix<double>> w;
  for (int k = 0; k <= n; ++k) w.push_back(in.embedding(k));

  r.freeness = chain_squares_to_zero(*desc) ? CheckStatus::kPass : CheckStatus::kFail;

  r.pairing = CheckStatus::kPass;
  for (int k = 0; k <= n; ++k) {
    r.pairing_rank.push_back(embedding_rank(*base, *desc, k, w[k]));
    r.pairing_expected.push_back(base->count(k));
    if (r.pairing_rank.back() != r.pairing_expected.back()) r.pairing = CheckStatus::kFail;
  }

  r.stokes_residual = 0.0;
  for (int k = 0; k < n; ++k) {
    const Eigen::SparseMatrix<double> diff =
        Eigen::SparseMatrix<double>(w[k + 1] * base->coboundary_sparse(k)) - desc->coboundary_sparse(k) * w[k];
    r.stokes_residual = std::max(r.stokes_residual, sparse_max_abs(diff));
  }
  r.stokes = r.stokes_residual <= kStokesTolerance ? CheckStatus::kPass : CheckStatus::kFail;

  r.integrality = CheckStatus::kHeuristicPass;
  r.integrality_by_degree.push_back(CheckStatus::kNotApplicable);
  for (int k = 1; k <= n; ++k) {
    const CheckStatus s = integrality_degree(*base, *desc, k, w[k], *map, r.witness);
    r.integrality_by_degree.push_back(s);
    if (s == CheckStatus::kFail) r.integrality = CheckStatus::kFail;
  }

  r.de_rham_e = field_betti_numbers(*base);
  r.de_rham_f = field_betti_numbers(*desc);
  HodgeComplex hc(base);
  r.de_rham = r.de_rham_e == r.de_rham_f ? CheckStatus::kPass : CheckStatus::kFail;
  // Harmonic classes stay independent on the subdivision when their periods
  // over subdivided integral cycles have full rank.
  for (int k = 0; k <= n; ++k) {
    const IntegralBasis ib = integral_basis(*base, k);
    const IncidenceMatrix sd = subdivision_chain_map(*desc, *base, k);
    const Eigen::MatrixXd closed = w[k] * hc.harmonic_basis(k);
    Eigen::MatrixXd periods(ib.betti(), closed.cols());
    for (int j = 0; j < ib.betti(); ++j) {
      const Eigen::VectorXd cycle = to_double(simchar::apply(sd, ib.cycles.column(j)));
      periods.row(j) = cycle.transpose() * closed;
    }
    const int gained = rank_of(periods);
    r.de_rham_injective_rank.push_back(gained);
    if (gained != r.de_rham_e[k]) r.de_rham = CheckStatus::kFail;
  }
  return r;
}

std::string to_json(const ModelReport& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  j["freeness"] = status_name(r.freeness);
  j["pairing"] = {{"status", status_name(r.pairing)}, {"rank", r.pairing_rank}, {"expected", r.pairing_expected}};
  std::vector<std::string> by_degree;
  for (auto s : r.integrality_by_degree) by_degree.push_back(status_name(s));
  j["integrality"] = {{"status", status_name(r.integrality)}, {"by_degree", by_degree}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["integrality"]["witness"] = {{"degree", w.degree},           {"simplex", w.simplex},
                                   {"children", {w.child_a, w.child_b}}, {"integrals", {w.integral_a, w.integral_b}},
                                   {"relation", {w.relation_a, w.relation_b}}, {"multiplier", w.multiplier},
                                   {"proven", w.proven}};
  }
  j["stokes"] = {{"status", status_name(r.stokes)}, {"residual", r.stokes_residual}};
  j["de_rham"] = {{"status", status_name(r.de_rham)},
                  {"e", r.de_rham_e},
                  {"f", r.de_rham_f},
                  {"injective_rank", r.de_rham_injective_rank}};
  return j.dump();
}

GridReport grid_table(const CharacterModel& m) {
  const int p = m.degree();
  const SimplicialComplex& base = *m.base();
  const SimplicialComplex& desc = *m.desc();
  const int n = base.dim();
  GridReport g;
  g.degree = p;
  g.names = {"H^k(E)/H^k_I(E)", "Hhat^k_E", "dE^k", "H^k(G)", "Hhat^k", "Z^{k+1}_I(E)",
             "Ker^{k+1}(I)", "H^{k+1}(I)", "H^{k+1}_I(E)"};

  // Independent ingredients.
  const int b_p = m.hodge().harmonic_dimension(p);
  const int lattice_p = rank_of(m.harmonic_basis_degree_p());
  const int exact_rank = p < n ? rank_of(Eigen::MatrixXd(desc.coboundary_sparse(p) * m.embedding(p))) : 0;
  const int coexact_dim = m.coexact_dimension();
  const HomologyTable fine = homology_table(desc);
  BigInt tor_next = 1;
  if (p < n)
    for (const auto& t : fine.torsion[p]) tor_next *= t;
  BigInt tor_model = 1;
  for (const auto& t : m.torsion_orders()) tor_model *= t;
  const int b_next_integral = p < n ? fine.betti[p + 1] : 0;
  const int lattice_next = p < n ? rank_of(m.harmonic_basis_next()) : 0;
  const int free_next = m.free_rank();
  const int b_p_fine = fine.betti[p];

  auto& N = g.nodes;
  N[0][0] = {b_p, 0, 1, lattice_p};
  N[0][1] = {m.torus_dimension() + coexact_dim, 0, 1, m.torus_dimension()};
  N[0][2] = {exact_rank, 0, 1, 0};
  N[1][0] = {b_p_fine, 0, tor_next, b_p_fine};
  N[1][1] = {m.torus_dimension() + coexact_dim, free_next, tor_model, m.torus_dimension()};
  N[1][2] = {exact_rank, lattice_next, 1, 0};
  N[2][0] = {0, 0, tor_next, 0};
  N[2][1] = {0, b_next_integral, tor_model, 0};
  N[2][2] = {0, lattice_next, 1, 0};

  // Q = P: the class lifts solve d T = W' w - Psi(u).
  g.q_residual = m.lift_residual();

  auto check = [&](const GroupInvariants& a, const GroupInvariants& b, const GroupInvariants& c) {
    if (b.dimension != a.dimension + c.dimension) return false;
    const int alt = a.loop_rank - b.loop_rank + c.loop_rank - a.component_rank + b.component_rank - c.component_rank;
    if (alt != 0) return false;
    return b.component_torsion == a.component_torsion * c.component_torsion;
  };
  g.exact = true;
  for (int i = 0; i < 3 && g.exact; ++i) {
    if (!check(N[i][0], N[i][1], N[i][2])) {
      g.exact = false;
      g.failing_node = "row " + std::to_string(i) + " at " + g.names[3 * i + 1];
    }
  }
  for (int j = 0; j < 3 && g.exact; ++j) {
    if (!check(N[0][j], N[1][j], N[2][j])) {
      g.exact = false;
      g.failing_node = "column " + std::to_string(j) + " at " + g.names[3 + j];
    }
  }
  if (g.exact && g.q_residual > 1e-9) {
    g.exact = false;
    g.failing_node = "Q^{k+1} = P^{k+1}";
  }
  return g;
}

GridReport grid_check(const CharacterModel& m) {
  GridReport g = grid_table(m);
  if (!g.exact) fail(ErrorCode::kExactnessViolation, "grid not exact: " + g.failing_node);
  return g;
}

std::string to_json(const GridReport& g) {
  nlohmann::json j;
  j["degree"] = g.degree;
  j["exact"] = g.exact;
  j["q_residual"] = g.q_residual;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) j["nodes"][g.names[3 * i + k]] = invariants_json(g.nodes[i][k]);
  if (!g.exact) j["failing_node"] = g.failing_node;
  return j.dump();
}

}  // namespace simchar
