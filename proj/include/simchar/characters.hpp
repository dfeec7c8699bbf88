#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "simchar/complex.hpp"
#include "simchar/exact_algebra.hpp"
#include "simchar/hodge.hpp"

namespace simchar {

// Class in H^{p+1}(I): free coordinates and torsion coordinates modulo the orders.
struct IntegralClass {
  IntegerVector free;
  IntegerVector torsion;
  bool operator==(const IntegralClass& o) const { return free == o.free && torsion == o.torsion; }
};

// Character of degree p: harmonic torus coordinates z in [0,1), a coexact
// base cochain tau and an integral class c.
struct CharacterCoords {
  int degree = 0;
  Eigen::VectorXd z;
  Eigen::VectorXd tau;
  IntegralClass c;
};

// Cochains on the subdivision: da = e - r, dr = 0.
struct SparkTriple {
  int degree = 0;
  Eigen::VectorXd a;
  Eigen::VectorXd e;
  IntegerVector r;
};

// (b, s) with a - a' = db + s and r - r' = -ds.
struct EquivalenceCertificate {
  Eigen::VectorXd b;
  IntegerVector s;
  double residual = 0.0;
};

double mod_one(double x);
double circle_distance(double x, double y);

// Differential characters of the model E(L, L') with integer chains of L'.
class CharacterModel {
 public:
  CharacterModel(ComplexPtr base, ComplexPtr desc, int degree, HodgeOptions options = {});

  int degree() const { return p_; }
  const ComplexPtr& base() const { return base_; }
  const ComplexPtr& desc() const { return desc_; }
  const HodgeComplex& hodge() const { return hodge_; }

  int torus_dimension() const { return static_cast<int>(rho_p_.cols()); }
  int coexact_dimension() const { return static_cast<int>(coexact_.cols()); }
  int free_rank() const { return static_cast<int>(rho_next_.cols()); }
  const std::vector<BigInt>& torsion_orders() const { return torsion_orders_; }

  // Embedding W' in degrees p and p+1.
  const Eigen::SparseMatrix<double>& embedding(int k) const;
  // Harmonic integral bases on the base complex (columns).
  const Eigen::MatrixXd& harmonic_basis_degree_p() const { return rho_p_; }
  const Eigen::MatrixXd& harmonic_basis_next() const { return rho_next_; }
  // Integral cycles of degree p on the subdivision dual to the torus coordinates.
  const IntegerMatrix& torus_cycles() const { return cycles_p_; }
  // Integer cocycle representative u_c on the subdivision.
  IntegerVector class_cocycle(const IntegralClass& c) const;
  // Lift T_c with d T_c = W' w_c - u_c; torsion part returned exactly per cochain entry.
  Eigen::VectorXd class_lift(const IntegralClass& c) const;
  double lift_residual() const { return lift_residual_; }

  CharacterCoords random_character(std::mt19937_64& rng, int max_class = 3) const;
  CharacterCoords zero() const;
  // Character with the given integral class and no harmonic or coexact part.
  CharacterCoords class_preimage(const IntegralClass& c) const;
  // Character whose field strength is d(x) for a coexact x.
  CharacterCoords coexact_character(const Eigen::VectorXd& x) const;

  // Field strength as a base cochain of degree p+1.
  Eigen::VectorXd delta1(const CharacterCoords& ch) const;
  IntegralClass delta2(const CharacterCoords& ch) const;
  double evaluate(const CharacterCoords& ch, const IntegerVector& cycle) const;
  // Integral of the field strength over an integer (p+1)-chain of the subdivision.
  double field_integral(const CharacterCoords& ch, const IntegerVector& chain) const;

  SparkTriple to_spark(const CharacterCoords& ch) const;
  CharacterCoords from_spark(const SparkTriple& s) const;
  // Residual of da - (e - r) and dr.
  double spark_residual(const SparkTriple& s) const;
  std::optional<EquivalenceCertificate> equivalence(const SparkTriple& x, const SparkTriple& y) const;
  // Class of an integer cocycle of degree p+1 on the subdivision.
  IntegralClass class_of(const IntegerVector& cocycle) const;

  bool coords_equal(const CharacterCoords& a, const CharacterCoords& b, double tol) const;
  IntegralClass reduce(IntegralClass c) const;

 private:
  Eigen::VectorXd coexact_solve(const Eigen::VectorXd& exact) const;
  const SnfResult& desc_snf(int k) const;

  ComplexPtr base_;
  ComplexPtr desc_;
  int p_;
  HodgeComplex hodge_;
  std::vector<Eigen::SparseMatrix<double>> w_;
  Eigen::MatrixXd coexact_;
  Eigen::MatrixXd rho_p_;
  Eigen::MatrixXd rho_next_;
  IntegerMatrix cycles_p_;
  IntegerMatrix cocycles_p_;
  IntegerMatrix cycles_next_;
  IntegerMatrix cocycles_next_;
  std::vector<BigInt> torsion_orders_;
  IntegerMatrix torsion_cocycles_;
  IntegerMatrix torsion_cochains_;
  IntegerMatrix torsion_functionals_;
  IncidenceMatrix pull_next_;
  IncidenceMatrix pull_p_;
  IncidenceMatrix sd_next_;
  Eigen::MatrixXd lifts_;
  double lift_residual_ = 0.0;
  mutable std::vector<std::unique_ptr<SnfResult>> snf_cache_;
};

enum class CheckStatus { kPass, kHeuristicPass, kFail, kNotApplicable };
std::string status_name(CheckStatus s);

struct IntegralityWitness {
  int degree = -1;
  int simplex = -1;
  int child_a = -1;
  int child_b = -1;
  double integral_a = 0.0;
  double integral_b = 0.0;
  long long relation_a = 0;
  long long relation_b = 0;
  // Smallest n with n * W(simplex) integral on every child, 0 when none found.
  long long multiplier = 0;
  bool proven = false;
};

struct ModelReport {
  std::uint64_t seed = 0;
  CheckStatus freeness = CheckStatus::kFail;
  CheckStatus pairing = CheckStatus::kFail;
  std::vector<int> pairing_rank;
  std::vector<int> pairing_expected;
  CheckStatus integrality = CheckStatus::kFail;
  std::vector<CheckStatus> integrality_by_degree;
  std::optional<IntegralityWitness> witness;
  CheckStatus stokes = CheckStatus::kFail;
  double stokes_residual = 0.0;
  CheckStatus de_rham = CheckStatus::kFail;
  std::vector<int> de_rham_e;
  std::vector<int> de_rham_f;
  std::vector<int> de_rham_injective_rank;
  bool passed() const;
};

ModelReport verify_model(const ComplexPtr& base, const ComplexPtr& desc, std::uint64_t seed = 0);
std::string to_json(const ModelReport& r);

// Invariants of an abelian Lie group R^a x T^b x Z^c x F.
struct GroupInvariants {
  int dimension = 0;
  int component_rank = 0;
  BigInt component_torsion = 1;
  int loop_rank = 0;
};

struct GridReport {
  int degree = 0;
  // Row-major 3x3 nodes as in the spark grid.
  std::array<std::array<GroupInvariants, 3>, 3> nodes;
  std::array<std::string, 9> names;
  double q_residual = 0.0;
  bool exact = false;
  std::string failing_node;
};

GridReport grid_table(const CharacterModel& model);
// Throws ExactnessViolation naming the first failing row or column.
GridReport grid_check(const CharacterModel& model);
std::string to_json(const GridReport& g);

}  // namespace simchar
