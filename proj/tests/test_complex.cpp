#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "simchar/catalog.hpp"
#include "simchar/complex.hpp"
#include "simchar/error.hpp"
#include "simchar/exact_algebra.hpp"
#include "simchar/integer_relation.hpp"

using namespace simchar;
using Catch::Approx;

namespace {

bool boundary_squares_to_zero(const SimplicialComplex& x) {
  for (int k = 1; k < x.dim(); ++k) {
    const IntegerMatrix p = boundary_matrix(x, k) * boundary_matrix(x, k + 1);
    if (!p.is_zero()) return false;
  }
  return true;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("triangle boundary is a 3-cycle") {
  auto x = circle_complex(3);
  CHECK(x->f_vector() == std::vector<int>{3, 3});
  const IntegerMatrix b = boundary_matrix(*x, 1);
  for (int c = 0; c < 3; ++c) {
    BigInt s = 0;
    for (int r = 0; r < 3; ++r) s += b(r, c);
    CHECK(s == 0);
  }
}

TEST_CASE("tetrahedron boundary has Euler characteristic 2") {
  auto x = tetrahedron_sphere(0);
  CHECK(x->f_vector() == std::vector<int>{4, 6, 4});
  CHECK(x->euler_characteristic() == 2);
  CHECK(boundary_squares_to_zero(*x));
}

TEST_CASE("top facets cancel in the boundary of the fundamental chain") {
  for (auto x : {tetrahedron_sphere(1), minimal_torus(), flat_torus_grid(3, 4)}) {
    const IntegerMatrix b = boundary_matrix(*x, x->dim());
    for (int r = 0; r < b.rows(); ++r) {
      BigInt s = 0;
      for (int c = 0; c < b.cols(); ++c) s += b(r, c);
      CHECK(s == 0);
    }
  }
}

TEST_CASE("Mobius gluing is rejected as non-orientable") {
  const auto tris = fixtures::mobius_strip_triangles();
  const Eigen::MatrixXd coords = fixtures::moment_curve(7);
  // Exhaustive search over all 2^7 orientation sign patterns: none cancels on interior edges.
  int consistent_patterns = 0;
  for (int mask = 0; mask < 128; ++mask) {
    std::vector<int> signs(7);
    for (int t = 0; t < 7; ++t) signs[t] = (mask >> t) & 1 ? -1 : 1;
    BuildOptions opts;
    opts.require_closed = false;
    if (code_of([&] { build_complex(coords, tris, signs, opts); }) != ErrorCode::kNonOrientable)
      ++consistent_patterns;
  }
  CHECK(consistent_patterns == 0);
  CHECK(code_of([&] { build_complex(coords, tris); }) == ErrorCode::kNonOrientable);
}

TEST_CASE("construction errors") {
  Eigen::MatrixXd coords(3, 2);
  coords << 0, 0, 1, 0, 2, 0;
  BuildOptions open;
  open.require_closed = false;
  CHECK(code_of([&] { build_complex(coords, {{0, 1, 2}}, {}, open); }) == ErrorCode::kDegenerateSimplex);
  CHECK(code_of([&] { build_complex(fixtures::right_triangle()->coordinates(), {{0, 1, 2}}); }) ==
        ErrorCode::kBoundaryDetected);
  CHECK(code_of([&] { boundary_matrix(*circle_complex(4), 2); }) == ErrorCode::kDegreeOutOfRange);
  CHECK(code_of([&] { boundary_matrix(*circle_complex(4), 0); }) == ErrorCode::kDegreeOutOfRange);
}

TEST_CASE("minimal torus boundary ranks") {
  auto x = minimal_torus();
  CHECK(x->f_vector() == std::vector<int>{7, 21, 14});
  CHECK(smith_normal_form(boundary_matrix(*x, 1), false).rank == 6);
  CHECK(smith_normal_form(boundary_matrix(*x, 2), false).rank == 13);
}

TEST_CASE("barycentric subdivision") {
  SECTION("single triangle splits into six") {
    auto x = barycentric_subdivide(fixtures::right_triangle());
    CHECK(x->count(2) == 6);
  }
  SECTION("circle 3-cycle becomes a 6-cycle") {
    auto x = barycentric_subdivide(circle_complex(3));
    CHECK(x->f_vector() == std::vector<int>{6, 6});
  }
  SECTION("tetrahedron boundary: 24 children with volume partition") {
    auto base = tetrahedron_sphere(0);
    auto x = barycentric_subdivide(base);
    CHECK(x->count(2) == 24);
    CHECK(boundary_squares_to_zero(*x));
    std::vector<double> sum(base->count(2), 0.0);
    for (int t = 0; t < x->count(2); ++t) {
      const SimplexRef r = x->parent()->simplex_carriers[2][t];
      REQUIRE(r.dim == 2);
      sum[r.index] += x->volume(2, t);
    }
    for (int t = 0; t < base->count(2); ++t)
      CHECK(std::abs(sum[t] - base->volume(2, t)) <= 1e-10 * base->volume(2, t));
  }
}

TEST_CASE("mesh and fullness") {
  CHECK(mesh(*circle_complex(3)) == Approx(std::sqrt(3.0) / (2.0 * M_PI)).epsilon(1e-14));
  Eigen::MatrixXd unit_circle(3, 2);
  for (int i = 0; i < 3; ++i) unit_circle.row(i) << std::cos(2 * M_PI * i / 3), std::sin(2 * M_PI * i / 3);
  auto c = build_complex(unit_circle, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(mesh(*c) == Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(mesh(*barycentric_subdivide(unit_edge())) == Approx(0.5).epsilon(1e-15));
  CHECK(fullness(*fixtures::right_triangle()) == Approx(0.25).epsilon(1e-14));
  for (auto x : {circle_complex(5), minimal_torus(), tetrahedron_sphere(1)}) {
    CHECK(fullness(*x) > 0.0);
    CHECK(mesh(*barycentric_subdivide(x)) <= mesh(*x));
  }
}

TEST_CASE("perturbed subdivision of the unit edge") {
  for (std::uint64_t seed : {1u, 2u, 3u, 17u}) {
    auto x = perturbed_subdivide(unit_edge(), seed, 0.1);
    REQUIRE(x->vertex_count() == 3);
    const double t = x->coordinates()(2, 0);
    CHECK(std::abs(t - 0.5) <= 0.1 / 2 + 1e-15);
    CHECK(t != 0.5);
    CHECK_FALSE(find_integer_relation(t, 1.0 - t, kRelationMaxCoefficient, kRelationTolerance));
  }
}

TEST_CASE("perturbed subdivision is deterministic and close to barycentric") {
  for (auto base : {circle_complex(5), minimal_torus(), tetrahedron_sphere(0)}) {
    auto a = perturbed_subdivide(base, 42, 0.1);
    auto b = perturbed_subdivide(base, 42, 0.1);
    auto c = barycentric_subdivide(base);
    CHECK(a->coordinates() == b->coordinates());
    CHECK(a->content_hash() == b->content_hash());
    REQUIRE(a->f_vector() == c->f_vector());
    double max_inradius = 0.0;
    for (int k = 1; k <= base->dim(); ++k)
      for (int i = 0; i < base->count(k); ++i) max_inradius = std::max(max_inradius, base->inradius(k, i));
    CHECK((a->coordinates() - c->coordinates()).rowwise().norm().maxCoeff() <= 0.1 * max_inradius + 1e-15);
    CHECK(fullness(*a) >= 0.5 * fullness(*c));
    CHECK(fullness(*a) <= 2.0 * fullness(*c));
    CHECK(boundary_squares_to_zero(*a));
  }
  CHECK_THROWS_AS(perturbed_subdivide(circle_complex(3), 1, 0.6), Error);
}

TEST_CASE("perturbed children partition parent volumes") {
  auto base = tetrahedron_sphere(0);
  auto x = perturbed_subdivide(base, 7, 0.2);
  std::vector<double> sum(base->count(2), 0.0);
  for (int t = 0; t < x->count(2); ++t) sum[x->parent()->simplex_carriers[2][t].index] += x->volume(2, t);
  for (int t = 0; t < base->count(2); ++t)
    CHECK(std::abs(sum[t] - base->volume(2, t)) <= 1e-10 * base->volume(2, t));
}

TEST_CASE("Euler characteristic equals alternating Betti sum") {
  for (auto x : {circle_complex(4), minimal_torus(), tetrahedron_sphere(1), fixtures::projective_plane(),
                 barycentric_subdivide(minimal_torus())}) {
    int alt = 0;
    for (int k = 0; k <= x->dim(); ++k) alt += (k % 2 ? -1 : 1) * homology(*x, k).betti;
    CHECK(alt == x->euler_characteristic());
  }
}

TEST_CASE("complex file round trip") {
  auto x = minimal_torus();
  std::stringstream ss;
  write_complex(ss, *x);
  auto y = read_complex(ss);
  CHECK(y->content_hash() == x->content_hash());
  std::stringstream bad("dim 1 embed 1\nv 0\nv 1\ns 0 1 7\n");
  CHECK(code_of([&] { read_complex(bad); }) == ErrorCode::kParseError);
}

TEST_CASE("subdivision and simplicial approximation are chain maps") {
  auto base = minimal_torus();
  auto x = perturbed_subdivide(base, 5, 0.1);
  for (int k = 1; k <= 2; ++k) {
    const IntegerMatrix sd_k = IntegerMatrix::from_incidence(subdivision_chain_map(*x, *base, k));
    const IntegerMatrix sd_km1 = IntegerMatrix::from_incidence(subdivision_chain_map(*x, *base, k - 1));
    CHECK(boundary_matrix(*x, k) * sd_k == sd_km1 * boundary_matrix(*base, k));
    // pi^* d = d pi^*, i.e. boundary^T pi^*_{k-1} = pi^*_k boundary^T
    const IntegerMatrix p_k = IntegerMatrix::from_incidence(simplicial_pullback(*x, *base, k));
    const IntegerMatrix p_km1 = IntegerMatrix::from_incidence(simplicial_pullback(*x, *base, k - 1));
    CHECK(boundary_matrix(*x, k).transpose() * p_km1 == p_k * boundary_matrix(*base, k).transpose());
    // barycentric-type subdivisions: pi_* sd = identity
    CHECK(p_k.transpose() * sd_k == IntegerMatrix::identity(base->count(k)));
  }
}

TEST_CASE("two-level descent composes carriers") {
  auto base = circle_complex(3);
  auto l1 = perturbed_subdivide(base, 3, 0.1);
  auto l2 = barycentric_subdivide(l1);
  auto map = descent_map(*l2, *base);
  REQUIRE(map);
  for (int v = 0; v < l2->vertex_count(); ++v) {
    const VertexCarrier& vc = map->vertices[v];
    Eigen::VectorXd p = Eigen::VectorXd::Zero(2);
    const Simplex& s = base->simplex(vc.simplex.dim, vc.simplex.index);
    for (size_t a = 0; a < s.size(); ++a) p += vc.weights[a] * base->vertex(s[a]);
    CHECK((p - l2->vertex(v)).norm() <= 1e-14);
  }
  CHECK_FALSE(descent_map(*base, *l2));
  CHECK(code_of([&] { subdivision_chain_map(*circle_complex(4), *base, 1); }) == ErrorCode::kNoParentLink);
}
