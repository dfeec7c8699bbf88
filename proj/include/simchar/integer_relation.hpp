#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace simchar {

constexpr std::int64_t kRelationMaxCoefficient = 10000;
constexpr double kRelationTolerance = 1e-12;

struct IntegerRelation {
  std::int64_t a = 0;
  std::int64_t b = 0;
};

// Smallest (a, b) with a*x == b*y up to `tol`, |a|, |b| <= max_coeff, found by
// two-dimensional lattice reduction (continued fractions of x/y).
std::optional<IntegerRelation> find_integer_relation(double x, double y, std::int64_t max_coeff,
                                                     double tol);

bool has_pairwise_relation(const std::vector<double>& values, std::int64_t max_coeff, double tol);

// Smallest q <= max_coeff with q*x within tol of an integer.
std::optional<std::int64_t> rational_denominator(double x, std::int64_t max_coeff, double tol);

}  // namespace simchar
