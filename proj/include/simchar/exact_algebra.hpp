#pragma once

#include <optional>
#include <vector>

#include "simchar/complex.hpp"
#include "simchar/integer_matrix.hpp"

namespace simchar {

struct SnfResult {
  IntegerMatrix U;
  IntegerMatrix V;
  IntegerMatrix U_inverse;
  IntegerMatrix V_inverse;
  // Diagonal entries d_1 | d_2 | ... of length min(rows, cols); zeros after `rank`.
  std::vector<BigInt> diagonal;
  int rank = 0;

  std::vector<BigInt> torsion() const;
  IntegerMatrix diagonal_matrix(int rows, int cols) const;
};

// U * A * V == diag. Transforms are skipped when `with_transforms` is false.
SnfResult smith_normal_form(const IntegerMatrix& a, bool with_transforms = true);

struct ElementaryDivisors {
  int rank = 0;
  std::vector<BigInt> torsion;
};

// Rank and invariant factors > 1 of a sparse integer matrix, eliminating unit
// pivots sparsely before a dense pass on the remainder.
ElementaryDivisors elementary_divisors(const IncidenceMatrix& a);

// Integer solution of A s = y given the SNF of A, or nullopt.
std::optional<IntegerVector> solve_integer(const SnfResult& snf, const IntegerVector& y);

struct ChainComplexData {
  std::vector<int> sizes;
  // boundaries[k] : C_k -> C_{k-1} for k = 1..top; boundaries[0] is empty.
  std::vector<IntegerMatrix> boundaries;
  int top() const { return static_cast<int>(sizes.size()) - 1; }
};

ChainComplexData chain_complex(const SimplicialComplex& x);
// The cochain complex re-indexed as a chain complex: degree j holds C^{top-j}.
ChainComplexData dual_chain_complex(const ChainComplexData& c);

enum class Coefficients { kIntegers, kField };

struct HomologySummary {
  int degree = 0;
  int betti = 0;
  std::vector<BigInt> torsion;
  IntegerMatrix cycle_basis;
  IntegerMatrix boundary_basis;
  // Free generators (columns) and the dual integer cocycles: duals^T * generators = I,
  // duals vanish on boundaries and on torsion generators.
  IntegerMatrix generators;
  IntegerMatrix cocycle_duals;
  // Torsion data: e_i * torsion_cycles_i = boundary(torsion_chains_i);
  // torsion_functionals_i pairs to delta_il with torsion_cycles_l and to 0 with generators.
  IntegerMatrix torsion_cycles;
  IntegerMatrix torsion_chains;
  IntegerMatrix torsion_functionals;
};

HomologySummary homology(const ChainComplexData& c, int k);
HomologySummary homology(const SimplicialComplex& x, int k, Coefficients coeffs = Coefficients::kIntegers);

struct CohomologySummary {
  int degree = 0;
  int betti = 0;
  std::vector<BigInt> torsion;
  IntegerMatrix free_cocycles;
  IntegerMatrix torsion_cocycles;
  // Integer chains: free_duals^T * free_cocycles = I; torsion_functionals
  // read torsion coordinates modulo the orders.
  IntegerMatrix free_duals;
  IntegerMatrix torsion_functionals;
  // e_i * torsion_cocycles_i = d(torsion_cochains_i).
  IntegerMatrix torsion_cochains;
};

CohomologySummary cohomology(const SimplicialComplex& x, int k);

IntegerVector cocycle_lift(const SimplicialComplex& x, int k, int class_index);

// Betti numbers and torsion for every degree via sparse elimination.
struct HomologyTable {
  std::vector<int> betti;
  std::vector<std::vector<BigInt>> torsion;
};
HomologyTable homology_table(const SimplicialComplex& x);
// Real-coefficient Betti numbers from floating-point ranks.
std::vector<int> field_betti_numbers(const SimplicialComplex& x);

// Free integral homology generators of degree k with dual integer cocycles,
// cocycles^T * cycles = I. Large complexes use parent-link transport or
// spanning-tree constructions when available.
struct IntegralBasis {
  int degree = 0;
  IntegerMatrix cycles;
  IntegerMatrix cocycles;
  int betti() const { return cycles.cols(); }
};
IntegralBasis integral_basis(const SimplicialComplex& x, int k);

BigInt torsion_order(const std::vector<BigInt>& torsion);

}  // namespace simchar
