#include "simchar/integer_relation.hpp"

#include <cmath>
#include <cstdlib>

namespace simchar {

std::optional<IntegerRelation> find_integer_relation(double x, double y, std::int64_t max_coeff,
                                                     double tol) {
  if (std::abs(x) <= tol) return IntegerRelation{1, 0};
  if (std::abs(y) <= tol) return IntegerRelation{0, 1};
  // Convergents p/q of x/y; a relation q*x = p*y.
  const double ratio = x / y;
  long double rem = ratio;
  std::int64_t p0 = 1, q0 = 0;
  std::int64_t p1 = static_cast<std::int64_t>(std::floor(rem));
  std::int64_t q1 = 1;
  rem -= std::floor(rem);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::llabs(p1) > max_coeff || q1 > max_coeff) break;
    if (std::abs(static_cast<double>(q1) * x - static_cast<double>(p1) * y) <= tol)
      return IntegerRelation{q1, p1};
    if (rem <= 0) break;
    rem = 1.0L / rem;
    const long double fl = std::floor(rem);
    if (fl > 4.0e18L) break;
    const auto a = static_cast<std::int64_t>(fl);
    rem -= fl;
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return std::nullopt;
}

bool has_pairwise_relation(const std::vector<double>& values, std::int64_t max_coeff, double tol) {
  for (size_t i = 0; i < values.size(); ++i)
    for (size_t j = i + 1; j < values.size(); ++j)
      if (find_integer_relation(values[i], values[j], max_coeff, tol)) return true;
  return false;
}

std::optional<std::int64_t> rational_denominator(double x, std::int64_t max_coeff, double tol) {
  for (std::int64_t q = 1; q <= max_coeff; ++q) {
    const double v = q * x;
    if (std::abs(v - std::round(v)) <= tol) return q;
    if (q >= 64) break;
  }
  auto rel = find_integer_relation(x, 1.0, max_coeff, tol);
  if (!rel || rel->a == 0) return std::nullopt;
  return std::llabs(rel->a);
}

}  // namespace simchar
