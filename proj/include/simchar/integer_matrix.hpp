#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

namespace simchar {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using IntegerVector = std::vector<BigInt>;
using IncidenceMatrix = Eigen::SparseMatrix<int>;

// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(int rows, int cols);

  static IntegerMatrix identity(int n);
  static IntegerMatrix from_incidence(const IncidenceMatrix& m);
  static IntegerMatrix from_columns(int rows, const std::vector<IntegerVector>& columns);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  BigInt& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const BigInt& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  IntegerMatrix operator*(const IntegerMatrix& other) const;
  IntegerVector operator*(const IntegerVector& v) const;
  bool operator==(const IntegerMatrix& other) const;
  bool operator!=(const IntegerMatrix& other) const { return !(*this == other); }

  IntegerMatrix transpose() const;
  IntegerMatrix block(int r0, int c0, int nr, int nc) const;
  IntegerVector column(int c) const;
  IntegerVector row(int r) const;
  bool is_zero() const;
  Eigen::MatrixXd to_double() const;

  void swap_rows(int a, int b);
  void swap_cols(int a, int b);
  // row dst += q * row src
  void add_row_multiple(int dst, int src, const BigInt& q);
  // col dst += q * col src
  void add_col_multiple(int dst, int src, const BigInt& q);
  void negate_row(int r);
  void negate_col(int c);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<BigInt> data_;
};

IntegerVector apply(const IncidenceMatrix& m, const IntegerVector& v);
IntegerVector apply_transpose(const IncidenceMatrix& m, const IntegerVector& v);
Eigen::VectorXd to_double(const IntegerVector& v);
BigInt dot(const IntegerVector& a, const IntegerVector& b);
bool is_zero(const IntegerVector& v);
BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);
// Floor-style remainder in [0, m).
BigInt mod_positive(const BigInt& a, const BigInt& m);

// Triplet text format: "rows cols nnz" followed by "i j value" lines.
void write_triplets(std::ostream& os, const IntegerMatrix& m);
IntegerMatrix read_triplets(std::istream& is);

}  // namespace simchar
