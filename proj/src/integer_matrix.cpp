#include "simchar/integer_matrix.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "simchar/error.hpp"

namespace simchar {

IntegerMatrix::IntegerMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) fail(ErrorCode::kInvalidArgument, "negative matrix size");
}

IntegerMatrix IntegerMatrix::identity(int n) {
  IntegerMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::from_incidence(const IncidenceMatrix& s) {
  IntegerMatrix m(static_cast<int>(s.rows()), static_cast<int>(s.cols()));
  for (int k = 0; k < s.outerSize(); ++k)
    for (IncidenceMatrix::InnerIterator it(s, k); it; ++it)
      m(static_cast<int>(it.row()), static_cast<int>(it.col())) += it.value();
  return m;
}

IntegerMatrix IntegerMatrix::from_columns(int rows, const std::vector<IntegerVector>& columns) {
  IntegerMatrix m(rows, static_cast<int>(columns.size()));
  for (int c = 0; c < m.cols(); ++c) {
    if (static_cast<int>(columns[c].size()) != rows)
      fail(ErrorCode::kInvalidArgument, "column length mismatch");
    for (int r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& o) const {
  if (cols_ != o.rows_) fail(ErrorCode::kInvalidArgument, "matrix product size mismatch");
  IntegerMatrix out(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const BigInt& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const BigInt& b = o(k, j);
        if (b != 0) out(i, j) += a * b;
      }
    }
  return out;
}

IntegerVector IntegerMatrix::operator*(const IntegerVector& v) const {
  if (static_cast<int>(v.size()) != cols_)
    fail(ErrorCode::kInvalidArgument, "matrix-vector size mismatch");
  IntegerVector out(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k)
      if ((*this)(i, k) != 0 && v[k] != 0) out[i] += (*this)(i, k) * v[k];
  return out;
}

bool IntegerMatrix::operator==(const IntegerMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntegerMatrix IntegerMatrix::block(int r0, int c0, int nr, int nc) const {
  IntegerMatrix b(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

IntegerVector IntegerMatrix::column(int c) const {
  IntegerVector v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

IntegerVector IntegerMatrix::row(int r) const {
  IntegerVector v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = (*this)(r, j);
  return v;
}

bool IntegerMatrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

Eigen::MatrixXd IntegerMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).convert_to<double>();
  return m;
}

void IntegerMatrix::swap_rows(int a, int b) {
  if (a == b) return;
  for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntegerMatrix::swap_cols(int a, int b) {
  if (a == b) return;
  for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntegerMatrix::add_row_multiple(int dst, int src, const BigInt& q) {
  if (q == 0) return;
  for (int j = 0; j < cols_; ++j) {
    const BigInt& s = (*this)(src, j);
    if (s != 0) (*this)(dst, j) += q * s;
  }
}

void IntegerMatrix::add_col_multiple(int dst, int src, const BigInt& q) {
  if (q == 0) return;
  for (int i = 0; i < rows_; ++i) {
    const BigInt& s = (*this)(i, src);
    if (s != 0) (*this)(i, dst) += q * s;
  }
}

void IntegerMatrix::negate_row(int r) {
  for (int j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
}

void IntegerMatrix::negate_col(int c) {
  for (int i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
}

IntegerVector apply(const IncidenceMatrix& m, const IntegerVector& v) {
  if (static_cast<Eigen::Index>(v.size()) != m.cols())
    fail(ErrorCode::kInvalidArgument, "incidence apply size mismatch");
  IntegerVector out(m.rows());
  for (int k = 0; k < m.outerSize(); ++k)
    for (IncidenceMatrix::InnerIterator it(m, k); it; ++it)
      if (v[it.col()] != 0) out[it.row()] += it.value() * v[it.col()];
  return out;
}

IntegerVector apply_transpose(const IncidenceMatrix& m, const IntegerVector& v) {
  if (static_cast<Eigen::Index>(v.size()) != m.rows())
    fail(ErrorCode::kInvalidArgument, "incidence apply size mismatch");
  IntegerVector out(m.cols());
  for (int k = 0; k < m.outerSize(); ++k)
    for (IncidenceMatrix::InnerIterator it(m, k); it; ++it)
      if (v[it.row()] != 0) out[it.col()] += it.value() * v[it.row()];
  return out;
}

Eigen::VectorXd to_double(const IntegerVector& v) {
  Eigen::VectorXd out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].convert_to<double>();
  return out;
}

BigInt dot(const IntegerVector& a, const IntegerVector& b) {
  if (a.size() != b.size()) fail(ErrorCode::kInvalidArgument, "dot size mismatch");
  BigInt s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

bool is_zero(const IntegerVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

BigInt mod_positive(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += boost::multiprecision::abs(m);
  return r;
}

void write_triplets(std::ostream& os, const IntegerMatrix& m) {
  int nnz = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) ++nnz;
  os << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) os << i << ' ' << j << ' ' << m(i, j) << '\n';
}

IntegerMatrix read_triplets(std::istream& is) {
  int rows = 0, cols = 0, nnz = 0;
  if (!(is >> rows >> cols >> nnz)) fail(ErrorCode::kParseError, "bad triplet header");
  IntegerMatrix m(rows, cols);
  for (int k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    std::string value;
    if (!(is >> i >> j >> value)) fail(ErrorCode::kParseError, "truncated triplet list");
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      fail(ErrorCode::kParseError, "triplet index out of range");
    m(i, j) = BigInt(value);
  }
  return m;
}

}  // namespace simchar
