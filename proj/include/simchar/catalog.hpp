#pragma once

#include <string>
#include <vector>

#include "simchar/complex.hpp"

namespace simchar {

struct ReferenceData {
  std::vector<int> betti;
  // Orders of torsion subgroups of H_k, one entry per degree.
  std::vector<int> torsion_order;
  // First nonzero eigenvalue of the smooth scalar Laplacian, when known.
  double first_eigenvalue = 0.0;
  bool has_first_eigenvalue = false;
  // Polar angle of every vertex (circles only).
  std::vector<double> vertex_angles;
};

struct CatalogEntry {
  std::string id;
  ComplexPtr complex;
  ReferenceData reference;
};

// Ids: s1(N), t2_flat(7), t2_flat(m,n), s2_tetra(levels), unit_edge, unit_triangle_boundary.
CatalogEntry catalog(const std::string& id);

ComplexPtr circle_complex(int n);
ComplexPtr flat_torus_grid(int m, int n);
ComplexPtr minimal_torus();
ComplexPtr tetrahedron_sphere(int levels);
ComplexPtr unit_edge();
ComplexPtr unit_triangle_boundary();

}  // namespace simchar
