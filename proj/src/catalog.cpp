#include "simchar/catalog.hpp"

#include <cmath>
#include <regex>

#include "simchar/error.hpp"

namespace simchar {

namespace {

Eigen::RowVectorXd clifford(double u, double v) {
  const double r = 1.0 / (2.0 * M_PI);
  Eigen::RowVectorXd p(4);
  p << r * std::cos(2 * M_PI * u), r * std::sin(2 * M_PI * u), r * std::cos(2 * M_PI * v),
      r * std::sin(2 * M_PI * v);
  return p;
}

}  // namespace

ComplexPtr circle_complex(int n) {
  if (n < 3) fail(ErrorCode::kInvalidArgument, "a circle needs at least 3 vertices");
  const double r = 1.0 / (2.0 * M_PI);
  Eigen::MatrixXd coords(n, 2);
  std::vector<std::vector<int>> edges;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    coords(i, 0) = r * std::cos(a);
    coords(i, 1) = r * std::sin(a);
    edges.push_back({i, (i + 1) % n});
  }
  return build_complex(coords, edges);
}

ComplexPtr flat_torus_grid(int m, int n) {
  if (m < 3 || n < 3) fail(ErrorCode::kInvalidArgument, "torus grid needs at least 3x3 cells");
  Eigen::MatrixXd coords(m * n, 4);
  auto id = [&](int i, int j) { return ((i % m + m) % m) * n + ((j % n + n) % n); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) coords.row(id(i, j)) = clifford(static_cast<double>(i) / m, static_cast<double>(j) / n);
  std::vector<std::vector<int>> tris;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return build_complex(coords, tris);
}

ComplexPtr minimal_torus() {
  Eigen::MatrixXd coords(7, 4);
  for (int j = 0; j < 7; ++j) coords.row(j) = clifford(j / 7.0, 2.0 * j / 7.0);
  std::vector<std::vector<int>> tris;
  for (int i = 0; i < 7; ++i) {
    tris.push_back({i, (i + 1) % 7, (i + 3) % 7});
    tris.push_back({(i + 1) % 7, (i + 4) % 7, (i + 3) % 7});
  }
  return build_complex(coords, tris);
}

ComplexPtr tetrahedron_sphere(int levels) {
  if (levels < 0) fail(ErrorCode::kInvalidArgument, "negative refinement level");
  Eigen::MatrixXd coords(4, 3);
  const double s = 1.0 / std::sqrt(3.0);
  coords << s, s, s, s, -s, -s, -s, s, -s, -s, -s, s;
  ComplexPtr x = build_complex(coords, {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}});
  for (int l = 0; l < levels; ++l) x = midpoint_subdivide(x);
  return x;
}

ComplexPtr unit_edge() {
  Eigen::MatrixXd coords(2, 1);
  coords << 0.0, 1.0;
  BuildOptions opts;
  opts.require_closed = false;
  return build_complex(coords, {{0, 1}}, {}, opts);
}

ComplexPtr unit_triangle_boundary() {
  Eigen::MatrixXd coords(3, 2);
  coords << 0.0, 0.0, 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
  return build_complex(coords, {{0, 1}, {1, 2}, {2, 0}});
}

CatalogEntry catalog(const std::string& id) {
  static const std::regex one(R"(^\s*(\w+)\s*\(\s*(\d+)\s*\)\s*$)");
  static const std::regex two(R"(^\s*(\w+)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$)");
  CatalogEntry e;
  e.id = id;
  std::smatch m;
  if (std::regex_match(id, m, one)) {
    const std::string name = m[1];
    const int a = std::stoi(m[2]);
    if (name == "s1") {
      e.complex = circle_complex(a);
      e.reference.betti = {1, 1};
      e.reference.torsion_order = {1, 1};
      e.reference.first_eigenvalue = 4.0 * M_PI * M_PI;
      e.reference.has_first_eigenvalue = true;
      for (int i = 0; i < a; ++i) e.reference.vertex_angles.push_back(2.0 * M_PI * i / a);
      return e;
    }
    if (name == "t2_flat" && a == 7) {
      e.complex = minimal_torus();
      e.reference.betti = {1, 2, 1};
      e.reference.torsion_order = {1, 1, 1};
      e.reference.first_eigenvalue = 4.0 * M_PI * M_PI;
      e.reference.has_first_eigenvalue = true;
      return e;
    }
    if (name == "s2_tetra") {
      e.complex = tetrahedron_sphere(a);
      e.reference.betti = {1, 0, 1};
      e.reference.torsion_order = {1, 1, 1};
      return e;
    }
  } else if (std::regex_match(id, m, two)) {
    const std::string name = m[1];
    if (name == "t2_flat") {
      e.complex = flat_torus_grid(std::stoi(m[2]), std::stoi(m[3]));
      e.reference.betti = {1, 2, 1};
      e.reference.torsion_order = {1, 1, 1};
      e.reference.first_eigenvalue = 4.0 * M_PI * M_PI;
      e.reference.has_first_eigenvalue = true;
      return e;
    }
  } else if (id == "unit_edge") {
    e.complex = unit_edge();
    e.reference.betti = {1, 0};
    e.reference.torsion_order = {1, 1};
    return e;
  } else if (id == "unit_triangle_boundary") {
    e.complex = unit_triangle_boundary();
    e.reference.betti = {1, 1};
    e.reference.torsion_order = {1, 1};
    return e;
  }
  fail(ErrorCode::kUnknownManifold, "unknown catalog id '" + id + "'");
}

}  // namespace simchar
