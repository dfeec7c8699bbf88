#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "simchar/complex.hpp"

namespace fixtures {

inline simchar::ComplexPtr projective_plane() {
  Eigen::MatrixXd coords = Eigen::MatrixXd::Identity(6, 6);
  const std::vector<std::vector<int>> tris = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                              {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};
  simchar::BuildOptions opts;
  opts.require_orientable = false;
  return simchar::build_complex(coords, tris, {}, opts);
}

inline Eigen::MatrixXd moment_curve(int n) {
  Eigen::MatrixXd coords(n, 3);
  for (int i = 0; i < n; ++i) coords.row(i) << i, i * i, i * i * i;
  return coords;
}

inline std::vector<std::vector<int>> mobius_strip_triangles() {
  std::vector<std::vector<int>> tris;
  for (int i = 0; i < 7; ++i) tris.push_back({i, (i + 1) % 7, (i + 2) % 7});
  return tris;
}

inline simchar::ComplexPtr right_triangle() {
  Eigen::MatrixXd coords(3, 2);
  coords << 0, 0, 1, 0, 0, 1;
  simchar::BuildOptions opts;
  opts.require_closed = false;
  return simchar::build_complex(coords, {{0, 1, 2}}, {}, opts);
}

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace fixtures
