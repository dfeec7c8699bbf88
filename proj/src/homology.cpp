#include <Eigen/QR>
#include <algorithm>

#include "simchar/error.hpp"
#include "simchar/exact_algebra.hpp"

namespace simchar {

namespace {

IntegerMatrix columns_of(const IntegerMatrix& m, int c0, int nc) {
  return m.block(0, c0, m.rows(), nc);
}

int real_rank(const IncidenceMatrix& b) {
  if (b.rows() == 0 || b.cols() == 0) return 0;
  if (std::max(b.rows(), b.cols()) > 1500) return elementary_divisors(b).rank;
  Eigen::MatrixXd d = Eigen::MatrixXd(b.cast<double>());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

}  // namespace

ChainComplexData chain_complex(const SimplicialComplex& x) {
  ChainComplexData c;
  c.sizes = x.f_vector();
  c.boundaries.resize(x.dim() + 1);
  for (int k = 1; k <= x.dim(); ++k) c.boundaries[k] = boundary_matrix(x, k);
  return c;
}

ChainComplexData dual_chain_complex(const ChainComplexData& c) {
  const int top = c.top();
  ChainComplexData d;
  d.sizes.resize(top + 1);
  d.boundaries.resize(top + 1);
  for (int j = 0; j <= top; ++j) d.sizes[j] = c.sizes[top - j];
  // C'_j = C^{top-j}; the boundary C'_j -> C'_{j-1} is d_{top-j} = transpose of boundary_{top-j+1}.
  for (int j = 1; j <= top; ++j) d.boundaries[j] = c.boundaries[top - j + 1].transpose();
  return d;
}

HomologySummary homology(const ChainComplexData& c, int k) {
  if (k < 0 || k > c.top()) fail(ErrorCode::kDegreeOutOfRange, "homology degree out of range");
  const int nk = c.sizes[k];
  HomologySummary h;
  h.degree = k;

  IntegerMatrix z, zc;
  if (k == 0) {
    z = IntegerMatrix::identity(nk);
    zc = IntegerMatrix::identity(nk);
  } else {
    const SnfResult s = smith_normal_form(c.boundaries[k]);
    const int r = s.rank;
    z = columns_of(s.V, r, nk - r);
    zc = s.V_inverse.block(r, 0, nk - r, nk);
  }
  const int zdim = z.cols();
  IntegerMatrix m;
  if (k < c.top()) m = zc * c.boundaries[k + 1];
  else m = IntegerMatrix(zdim, 0);

  const SnfResult t = smith_normal_form(m);
  const int s = t.rank;
  const IntegerMatrix g = z * t.U_inverse;
  const IntegerMatrix dual = t.U * zc;

  h.cycle_basis = z;
  h.betti = zdim - s;
  h.generators = columns_of(g, s, zdim - s);
  h.cocycle_duals = dual.block(s, 0, zdim - s, nk).transpose();

  std::vector<IntegerVector> bcols, tcyc, tchain, tfun;
  for (int i = 0; i < s; ++i) {
    IntegerVector col = g.column(i);
    for (auto& v : col) v *= t.diagonal[i];
    bcols.push_back(std::move(col));
    if (t.diagonal[i] > 1) {
      h.torsion.push_back(t.diagonal[i]);
      tcyc.push_back(g.column(i));
      tchain.push_back(t.V.column(i));
      tfun.push_back(dual.row(i));
    }
  }
  h.boundary_basis = IntegerMatrix::from_columns(nk, bcols);
  h.torsion_cycles = IntegerMatrix::from_columns(nk, tcyc);
  h.torsion_chains = IntegerMatrix::from_columns(k < c.top() ? c.sizes[k + 1] : 0, tchain);
  h.torsion_functionals = IntegerMatrix::from_columns(nk, tfun);
  return h;
}

HomologySummary homology(const SimplicialComplex& x, int k, Coefficients coeffs) {
  if (k < 0 || k > x.dim()) fail(ErrorCode::kDegreeOutOfRange, "homology degree out of range");
  if (coeffs == Coefficients::kIntegers) return homology(chain_complex(x), k);
  HomologySummary h;
  h.degree = k;
  const int rk = k >= 1 ? real_rank(x.boundary(k)) : 0;
  const int rk1 = k < x.dim() ? real_rank(x.boundary(k + 1)) : 0;
  h.betti = x.count(k) - rk - rk1;
  return h;
}

CohomologySummary cohomology(const SimplicialComplex& x, int k) {
  if (k < 0 || k > x.dim()) fail(ErrorCode::kDegreeOutOfRange, "cohomology degree out of range");
  const ChainComplexData dual = dual_chain_complex(chain_complex(x));
  const HomologySummary h = homology(dual, x.dim() - k);
  CohomologySummary c;
  c.degree = k;
  c.betti = h.betti;
  c.torsion = h.torsion;
  c.free_cocycles = h.generators;
  c.torsion_cocycles = h.torsion_cycles;
  c.free_duals = h.cocycle_duals;
  c.torsion_functionals = h.torsion_functionals;
  c.torsion_cochains = h.torsion_chains;
  return c;
}

IntegerVector cocycle_lift(const SimplicialComplex& x, int k, int class_index) {
  const HomologySummary h = homology(x, k);
  if (class_index < 0 || class_index >= h.betti)
    fail(ErrorCode::kIndexOutOfRange, "cocycle class index out of range");
  return h.cocycle_duals.column(class_index);
}

HomologyTable homology_table(const SimplicialComplex& x) {
  const int n = x.dim();
  std::vector<ElementaryDivisors> ed(n + 2);
  for (int k = 1; k <= n; ++k) ed[k] = elementary_divisors(x.boundary(k));
  HomologyTable t;
  for (int k = 0; k <= n; ++k) {
    t.betti.push_back(x.count(k) - ed[k].rank - ed[k + 1].rank);
    t.torsion.push_back(ed[k + 1].torsion);
  }
  return t;
}

std::vector<int> field_betti_numbers(const SimplicialComplex& x) {
  const int n = x.dim();
  std::vector<int> ranks(n + 2, 0);
  for (int k = 1; k <= n; ++k) ranks[k] = real_rank(x.boundary(k));
  std::vector<int> b;
  for (int k = 0; k <= n; ++k) b.push_back(x.count(k) - ranks[k] - ranks[k + 1]);
  return b;
}

}  // namespace simchar
