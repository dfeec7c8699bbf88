#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "simchar/integer_matrix.hpp"

namespace simchar {

// Sorted vertex-index tuple.
using Simplex = std::vector<int>;

struct SimplexRef {
  int dim = -1;
  int index = -1;
};

// Location of a vertex inside a coarser complex: the smallest simplex
// containing it and barycentric weights aligned with that simplex's vertices.
struct VertexCarrier {
  SimplexRef simplex;
  std::vector<double> weights;
  std::vector<BigRational> exact_weights;
};

class SimplicialComplex;
using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

struct ParentLink {
  ComplexPtr parent;
  std::vector<VertexCarrier> vertex_carriers;
  std::vector<std::vector<SimplexRef>> simplex_carriers;
};

struct BuildOptions {
  bool require_closed = true;
  bool require_orientable = true;
  bool check_geometry = true;
};

class SimplicialComplex {
 public:
  int dim() const { return dim_; }
  int embed_dim() const { return static_cast<int>(coords_.cols()); }
  int vertex_count() const { return static_cast<int>(coords_.rows()); }
  const Eigen::MatrixXd& coordinates() const { return coords_; }
  Eigen::VectorXd vertex(int i) const { return coords_.row(i).transpose(); }

  int count(int k) const;
  const std::vector<Simplex>& simplices(int k) const;
  const Simplex& simplex(int k, int i) const { return simplices(k)[i]; }
  // Index of a sorted tuple, or -1.
  int find(const Simplex& sorted) const;
  int orientation(int k, int i) const;
  bool oriented() const { return oriented_; }
  bool closed() const { return closed_; }
  const BuildOptions& options() const { return options_; }

  // Incidence matrix of the boundary map from k-chains to (k-1)-chains, 1 <= k <= n.
  const IncidenceMatrix& boundary(int k) const;
  // Dense real coboundary d_k : C^k -> C^{k+1}, 0 <= k < n.
  Eigen::MatrixXd coboundary_dense(int k) const;
  Eigen::SparseMatrix<double> coboundary_sparse(int k) const;

  std::vector<int> f_vector() const;
  int euler_characteristic() const;
  double volume(int k, int i) const;
  double inradius(int k, int i) const;
  // Facets of a k-simplex that contain it (the (k+1)-cofaces).
  const std::vector<int>& cofaces(int k, int i) const;

  const ParentLink* parent() const { return parent_ ? &*parent_ : nullptr; }
  std::uint64_t content_hash() const;

 private:
  friend ComplexPtr build_complex(const Eigen::MatrixXd&, const std::vector<std::vector<int>>&,
                                  const std::vector<int>&, const BuildOptions&);
  friend ComplexPtr attach_parent(std::shared_ptr<SimplicialComplex>, ParentLink);

  int dim_ = 0;
  Eigen::MatrixXd coords_;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::vector<int>> orientation_;
  std::vector<IncidenceMatrix> boundary_;
  std::vector<std::vector<std::vector<int>>> cofaces_;
  bool oriented_ = true;
  bool closed_ = true;
  BuildOptions options_;
  std::optional<ParentLink> parent_;
};

// Top simplices are given as vertex tuples; the tuple order defines an
// orientation, optionally flipped by the matching entry of `orientation`.
// When `orientation` is empty, a consistent orientation is found by
// breadth-first propagation across shared facets.
ComplexPtr build_complex(const Eigen::MatrixXd& coords, const std::vector<std::vector<int>>& tops,
                         const std::vector<int>& orientation = {},
                         const BuildOptions& options = {});

IntegerMatrix boundary_matrix(const SimplicialComplex& x, int k);

ComplexPtr barycentric_subdivide(const ComplexPtr& x);
ComplexPtr perturbed_subdivide(const ComplexPtr& x, std::uint64_t seed, double scale);
// Edge-midpoint refinement: 1:2 for curves, 1:4 for surfaces.
ComplexPtr midpoint_subdivide(const ComplexPtr& x);

double mesh(const SimplicialComplex& x);
double fullness(const SimplicialComplex& x);

// Composite carrier data of a descendant complex relative to an ancestor.
struct DescentMap {
  std::vector<VertexCarrier> vertices;
  std::vector<std::vector<SimplexRef>> carriers;
};

// Returns nullopt when `desc` does not descend from `ancestor` via parent links.
std::optional<DescentMap> descent_map(const SimplicialComplex& desc,
                                      const SimplicialComplex& ancestor);

// Barycentric coordinates of the vertices of desc simplex (k, i) with respect
// to the ordered vertex list `frame` of an ancestor simplex containing it.
// Rows are the descendant vertices in sorted order.
Eigen::MatrixXd barycentric_rows(const DescentMap& map, const SimplicialComplex& desc,
                                 const SimplicialComplex& ancestor, int k, int i,
                                 const Simplex& frame);
std::vector<std::vector<BigRational>> barycentric_rows_exact(
    const DescentMap& map, const SimplicialComplex& desc, const SimplicialComplex& ancestor,
    int k, int i, const Simplex& frame);

// Subdivision chain map sd : C_k(ancestor) -> C_k(desc).
IncidenceMatrix subdivision_chain_map(const SimplicialComplex& desc,
                                      const SimplicialComplex& ancestor, int k);
// Cochain pullback along the simplicial approximation of the identity that
// sends each descendant vertex to the lowest vertex of its carrier.
IncidenceMatrix simplicial_pullback(const SimplicialComplex& desc,
                                    const SimplicialComplex& ancestor, int k);

// Text format: "dim n embed N", "v x1 .. xN" lines, "s i0 .. in [+-1]" lines.
void write_complex(std::ostream& os, const SimplicialComplex& x);
ComplexPtr read_complex(std::istream& is, const BuildOptions& options = {});
ComplexPtr load_complex(const std::string& path, const BuildOptions& options = {});
void save_complex(const std::string& path, const SimplicialComplex& x);

int permutation_sign(std::vector<int> values);

}  // namespace simchar
