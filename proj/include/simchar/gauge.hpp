#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "simchar/characters.hpp"
#include "simchar/theta.hpp"

namespace simchar {

enum class ActionKind { kMaxwell, kCustom };
using ActionFunction = std::function<double(const CharacterModel&, const CharacterCoords&)>;

struct ActionSpec {
  ActionKind kind = ActionKind::kMaxwell;
  // g^2 > 0.
  double coupling = 1.0;
  // Character multiplied into every configuration.
  std::optional<CharacterCoords> background;
  ActionFunction custom;
};

enum class ObservableKind { kConstant, kWilson, kCustom };
using ObservableFunction = std::function<std::complex<double>(const CharacterModel&, const CharacterCoords&)>;

struct ObservableSpec {
  ObservableKind kind = ObservableKind::kConstant;
  // Integer p-cycle on the subdivision and charge for Wilson observables.
  IntegerVector cycle;
  long long charge = 0;
  ObservableFunction custom;
};

ObservableSpec wilson_observable(IntegerVector cycle, long long charge);

// Group law on character coordinates.
CharacterCoords add_characters(const CharacterModel& m, const CharacterCoords& a, const CharacterCoords& b);
double maxwell_action(const CharacterModel& m, const CharacterCoords& ch, double coupling);
// Action and observable of the background-shifted character.
double action_value(const ActionSpec& s, const CharacterModel& m, const CharacterCoords& ch);
std::complex<double> observable_value(const ObservableSpec& o, const CharacterModel& m, const CharacterCoords& ch);

// Number x = mantissa * exp(log_scale).
struct ScaledComplex {
  double log_scale = 0.0;
  std::complex<double> mantissa = 0.0;
  std::complex<double> value() const;
};
ScaledComplex scaled_sum(const std::vector<ScaledComplex>& terms);

// Gaussian-fluctuation data on im delta_{p+1} in degree p: eigenvalues of the
// Laplacian and Gram-orthonormal eigenvectors in base cochain coordinates.
struct FluctuationModes {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;
  int dimension() const { return static_cast<int>(eigenvalues.size()); }
};
FluctuationModes fluctuation_modes(const CharacterModel& m);

// Integral over im delta_{p+1} of the torus zero mode of exp(-S) O at class c.
// Closed form for the Maxwell action with constant or Wilson observables,
// numeric otherwise.
ScaledComplex gaussian_integral_im_delta(const ActionSpec& action, const ObservableSpec& observable,
                                         const CharacterModel& m, const IntegralClass& c);

struct PartitionOptions {
  int radius = 8;
  int max_radius = 64;
  // Relative tail tolerance of the class sum.
  double tolerance = 1e-12;
  // Unimodular change of the harmonic integral basis in degree p+1.
  std::optional<IntegerMatrix> harmonic_transform;
};

struct PrefactorBreakdown {
  // Indexed by r = 0..p.
  std::vector<double> log_det_h;
  std::vector<int> betti;
  std::vector<double> log_det_coexact;
  // Same determinants from the exact spectrum one degree up.
  std::vector<double> log_det_exact_shifted;
  std::vector<int> modes;
  BigInt torsion_order = 1;
  double log_prefactor = 0.0;
};

struct ClassTerm {
  IntegralClass c;
  double log_scale = 0.0;
  std::complex<double> mantissa;
};

struct Truncation {
  int radius = 0;
  long long free_points = 0;
  long long torsion_points = 1;
  double tail_bound = 0.0;
  double tail_relative = 0.0;
};

struct PartitionResult {
  int degree = 0;
  double value = 0.0;
  double imaginary = 0.0;
  // log |Re Z|.
  double log_abs_value = 0.0;
  ScaledComplex class_sum;
  PrefactorBreakdown prefactor;
  std::vector<ClassTerm> class_terms;
  Truncation truncation;
  std::optional<double> oracle_value;
};

PrefactorBreakdown partition_prefactor(const CharacterModel& m);
PartitionResult partition_function(const CharacterModel& m, const ActionSpec& action,
                                   const ObservableSpec& observable, const PartitionOptions& options = {});
std::string to_json(const PartitionResult& r);

// Brute-force evaluation of the same sum and integral with numeric torus zero
// modes and numeric integration in the fluctuation eigenbasis.
enum class OracleMethod { kQuadrature, kMonteCarlo };

struct OracleOptions {
  OracleMethod method = OracleMethod::kQuadrature;
  // Initial class window; grown until the outer shell is negligible.
  int radius = 8;
  // Initial Gauss-Hermite order; doubled until converged.
  int nodes = 8;
  int max_nodes = 128;
  // Tensor rules up to this dimension, products of axis rules above.
  int tensor_dimension = 2;
  double tolerance = 1e-10;
  long long samples = 1000000;
  std::uint64_t seed = 1;
  // Proposal variance relative to the quadratic action.
  double inflation = 1.5;
  int max_dimension = 64;
  long long max_window = 1000;
  ZeroModeOptions zero_mode;
};

struct OracleResult {
  double value = 0.0;
  double imaginary = 0.0;
  double standard_error = 0.0;
  // Largest relative defect of the product factorization over eigen axes.
  double separability_residual = 0.0;
  int dimension = 0;
  long long classes = 0;
  double log_prefactor = 0.0;
};

OracleResult partition_oracle(const CharacterModel& m, const ActionSpec& action,
                              const ObservableSpec& observable, const OracleOptions& options = {});

// Integral over im delta_{p+1} of the zero mode of exp(-S) O at class c by the
// oracle's numeric rules.
std::complex<double> numeric_im_delta_integral(const ActionSpec& action, const ObservableSpec& observable,
                                               const CharacterModel& m, const IntegralClass& c,
                                               const OracleOptions& options, double* standard_error = nullptr);

}  // namespace simchar
