#include <catch_amalgamated.hpp>

#include <functional>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "simchar/catalog.hpp"
#include "simchar/error.hpp"
#include "simchar/exact_algebra.hpp"

using namespace simchar;

namespace {

IntegerMatrix from_rows(const std::vector<std::vector<long>>& rows) {
  IntegerMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

BigInt determinant(IntegerMatrix m) {
  // Bareiss fraction-free elimination.
  const int n = m.rows();
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (m(i, k) != 0) p = i;
      if (p < 0) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// Determinantal divisors: gcd of all k x k minors equals d_1 * ... * d_k.
BigInt minor_gcd(const IntegerMatrix& a, int k) {
  BigInt g = 0;
  std::vector<int> rows(k), cols(k);
  std::function<void(int, int, std::vector<int>&, int, std::function<void()>)> choose =
      [&](int start, int n, std::vector<int>& sel, int depth, std::function<void()> body) {
        if (depth == static_cast<int>(sel.size())) {
          body();
          return;
        }
        for (int i = start; i < n; ++i) {
          sel[depth] = i;
          choose(i + 1, n, sel, depth + 1, body);
        }
      };
  choose(0, a.rows(), rows, 0, [&] {
    choose(0, a.cols(), cols, 0, [&] {
      IntegerMatrix m(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = a(rows[i], cols[j]);
      g = gcd(g, determinant(m));
    });
  });
  return g;
}

void check_snf(const IntegerMatrix& a) {
  const SnfResult s = smith_normal_form(a);
  CHECK(s.U * a * s.V == s.diagonal_matrix(a.rows(), a.cols()));
  CHECK(s.U * s.U_inverse == IntegerMatrix::identity(a.rows()));
  CHECK(s.V * s.V_inverse == IntegerMatrix::identity(a.cols()));
  for (int i = 0; i + 1 < s.rank; ++i) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
  for (int i = 0; i < s.rank; ++i) CHECK(s.diagonal[i] > 0);
}

}  // namespace

TEST_CASE("SNF examples") {
  auto id = smith_normal_form(IntegerMatrix::identity(3));
  CHECK(id.diagonal == std::vector<BigInt>{1, 1, 1});
  auto s = smith_normal_form(from_rows({{2, 4}, {6, 8}}));
  CHECK(s.diagonal == std::vector<BigInt>{2, 4});
  auto z = smith_normal_form(IntegerMatrix(3, 2));
  CHECK(z.rank == 0);
  check_snf(from_rows({{2, 4}, {6, 8}}));
}

TEST_CASE("SNF against determinantal divisors on random matrices") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-6, 6), dim(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    IntegerMatrix a(dim(rng), dim(rng));
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) a(i, j) = entry(rng);
    check_snf(a);
    const SnfResult s = smith_normal_form(a);
    BigInt prod = 1;
    for (int k = 1; k <= std::min(a.rows(), a.cols()); ++k) {
      prod *= s.diagonal[k - 1];
      CHECK(minor_gcd(a, k) == prod);
    }
  }
}

TEST_CASE("SNF of boundary matrices verifies U A V = D") {
  for (auto x : {circle_complex(5), minimal_torus(), tetrahedron_sphere(0), fixtures::projective_plane()})
    for (int k = 1; k <= x->dim(); ++k) check_snf(boundary_matrix(*x, k));
}

TEST_CASE("sparse elementary divisors agree with dense SNF") {
  for (auto x : {minimal_torus(), fixtures::projective_plane(), barycentric_subdivide(fixtures::projective_plane())})
    for (int k = 1; k <= x->dim(); ++k) {
      const SnfResult d = smith_normal_form(boundary_matrix(*x, k), false);
      const ElementaryDivisors e = elementary_divisors(x->boundary(k));
      CHECK(e.rank == d.rank);
      CHECK(e.torsion == d.torsion());
    }
}

TEST_CASE("homology of standard complexes") {
  auto s1 = circle_complex(3);
  CHECK(homology(*s1, 0).betti == 1);
  CHECK(homology(*s1, 1).betti == 1);
  CHECK(homology(*s1, 1).torsion.empty());
  auto t2 = minimal_torus();
  for (int k = 0; k <= 2; ++k) {
    CHECK(homology(*t2, k).betti == std::vector<int>{1, 2, 1}[k]);
    CHECK(homology(*t2, k).torsion.empty());
  }
  auto rp2 = fixtures::projective_plane();
  CHECK(homology(*rp2, 0).betti == 1);
  CHECK(homology(*rp2, 1).betti == 0);
  CHECK(homology(*rp2, 1).torsion == std::vector<BigInt>{2});
  CHECK(homology(*rp2, 2).betti == 0);
  CHECK(homology(*rp2, 1, Coefficients::kField).torsion.empty());
  CHECK_THROWS_AS(homology(*s1, 2), Error);
}

TEST_CASE("homology summary invariants") {
  for (auto x : {minimal_torus(), fixtures::projective_plane(), tetrahedron_sphere(1)})
    for (int k = 0; k <= x->dim(); ++k) {
      const HomologySummary h = homology(*x, k);
      if (k >= 1) CHECK((boundary_matrix(*x, k) * h.cycle_basis).is_zero());
      CHECK(h.cocycle_duals.transpose() * h.generators == IntegerMatrix::identity(h.betti));
      if (k < x->dim()) {
        CHECK((h.cocycle_duals.transpose() * boundary_matrix(*x, k + 1)).is_zero());
        for (int i = 0; i < static_cast<int>(h.torsion.size()); ++i) {
          IntegerVector lhs = boundary_matrix(*x, k + 1) * h.torsion_chains.column(i);
          IntegerVector rhs = h.torsion_cycles.column(i);
          for (auto& v : rhs) v *= h.torsion[i];
          CHECK(lhs == rhs);
        }
      }
      CHECK(h.torsion_functionals.transpose() * h.torsion_cycles ==
            IntegerMatrix::identity(static_cast<int>(h.torsion.size())));
    }
}

TEST_CASE("field and integer Betti numbers agree; Poincare duality") {
  for (auto x : {circle_complex(6), minimal_torus(), tetrahedron_sphere(1), flat_torus_grid(3, 3)}) {
    const auto field = field_betti_numbers(*x);
    const auto table = homology_table(*x);
    const int n = x->dim();
    for (int k = 0; k <= n; ++k) {
      CHECK(field[k] == homology(*x, k).betti);
      CHECK(table.betti[k] == field[k]);
      CHECK(field[k] == field[n - k]);
    }
  }
}

TEST_CASE("cohomology via the dual complex shifts torsion up one degree") {
  auto rp2 = fixtures::projective_plane();
  CHECK(cohomology(*rp2, 1).torsion.empty());
  CHECK(cohomology(*rp2, 2).torsion == std::vector<BigInt>{2});
  CHECK(cohomology(*rp2, 0).betti == 1);
  auto t2 = minimal_torus();
  CHECK(cohomology(*t2, 1).betti == 2);
}

TEST_CASE("cocycle lifts") {
  auto s1 = circle_complex(3);
  const IntegerVector phi = cocycle_lift(*s1, 1, 0);
  IntegerVector fundamental(3, 0);
  for (auto& v : fundamental) v = 1;
  CHECK(boost::multiprecision::abs(dot(phi, fundamental)) == 1);

  auto t2 = minimal_torus();
  const HomologySummary h = homology(*t2, 1);
  IntegerMatrix pairing(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) pairing(i, j) = dot(cocycle_lift(*t2, 1, i), h.generators.column(j));
  CHECK(pairing == IntegerMatrix::identity(2));
  CHECK_THROWS_AS(cocycle_lift(*tetrahedron_sphere(0), 1, 0), Error);
  try {
    cocycle_lift(*tetrahedron_sphere(0), 1, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIndexOutOfRange);
  }
}

TEST_CASE("integer solve") {
  const IntegerMatrix a = from_rows({{2, 0}, {0, 3}, {1, 1}});
  const SnfResult s = smith_normal_form(a);
  auto sol = solve_integer(s, {4, 9, 5});
  REQUIRE(sol);
  CHECK(a * *sol == IntegerVector{4, 9, 5});
  CHECK_FALSE(solve_integer(s, {1, 0, 0}));
}

TEST_CASE("triplet round trip") {
  const IntegerMatrix b = boundary_matrix(*minimal_torus(), 2);
  std::stringstream ss;
  write_triplets(ss, b);
  CHECK(read_triplets(ss) == b);
}

namespace {

void check_integral_basis(const SimplicialComplex& x, int k, int betti) {
  const IntegralBasis b = integral_basis(x, k);
  CHECK(b.betti() == betti);
  CHECK(b.cocycles.transpose() * b.cycles == IntegerMatrix::identity(betti));
  for (int j = 0; j < betti; ++j) {
    if (k > 0) CHECK(is_zero(simchar::apply(x.boundary(k), b.cycles.column(j))));
    if (k < x.dim()) CHECK(is_zero(apply_transpose(x.boundary(k + 1), b.cocycles.column(j))));
  }
}

}  // namespace

TEST_CASE("integral bases on large and subdivided complexes") {
  auto grid = flat_torus_grid(12, 12);
  check_integral_basis(*grid, 0, 1);
  check_integral_basis(*grid, 1, 2);
  check_integral_basis(*grid, 2, 1);
  auto sphere = tetrahedron_sphere(3);
  check_integral_basis(*sphere, 1, 0);
  check_integral_basis(*sphere, 2, 1);
  auto fine = perturbed_subdivide(perturbed_subdivide(minimal_torus(), 1, 0.2), 2, 0.2);
  for (int k = 0; k <= 2; ++k) check_integral_basis(*fine, k, k == 1 ? 2 : 1);
  check_integral_basis(*fixtures::projective_plane(), 1, 0);
  check_integral_basis(*circle_complex(500), 1, 1);
}
