#include <algorithm>
#include <map>
#include <set>

#include "simchar/error.hpp"
#include "simchar/exact_algebra.hpp"

namespace simchar {

namespace {

using boost::multiprecision::abs;

class SnfWorker {
 public:
  SnfWorker(const IntegerMatrix& a, bool transforms) : a_(a), transforms_(transforms) {
    if (transforms_) {
      u_ = IntegerMatrix::identity(a.rows());
      u_inv_ = IntegerMatrix::identity(a.rows());
      v_ = IntegerMatrix::identity(a.cols());
      v_inv_ = IntegerMatrix::identity(a.cols());
    }
  }

  SnfResult run() {
    const int m = a_.rows(), n = a_.cols();
    const int lim = std::min(m, n);
    int rank = 0;
    for (int t = 0; t < lim; ++t) {
      int bi = -1, bj = -1;
      BigInt best;
      for (int i = t; i < m; ++i)
        for (int j = t; j < n; ++j) {
          const BigInt& x = a_(i, j);
          if (x == 0) continue;
          if (bi < 0 || abs(x) < best) {
            best = abs(x);
            bi = i;
            bj = j;
            if (best == 1) break;
          }
        }
      if (bi < 0) break;
      row_swap(t, bi);
      col_swap(t, bj);
      while (true) {
        for (int i = t + 1; i < m; ++i)
          if (a_(i, t) != 0) row_add(i, t, -(a_(i, t) / a_(t, t)));
        for (int j = t + 1; j < n; ++j)
          if (a_(t, j) != 0) col_add(j, t, -(a_(t, j) / a_(t, t)));
        int pick = -1;
        bool pick_row = true;
        BigInt small;
        for (int i = t + 1; i < m; ++i)
          if (a_(i, t) != 0 && (pick < 0 || abs(a_(i, t)) < small)) {
            small = abs(a_(i, t));
            pick = i;
            pick_row = true;
          }
        for (int j = t + 1; j < n; ++j)
          if (a_(t, j) != 0 && (pick < 0 || abs(a_(t, j)) < small)) {
            small = abs(a_(t, j));
            pick = j;
            pick_row = false;
          }
        if (pick >= 0) {
          if (pick_row) row_swap(t, pick);
          else col_swap(t, pick);
          continue;
        }
        int di = -1;
        for (int i = t + 1; i < m && di < 0; ++i)
          for (int j = t + 1; j < n; ++j)
            if (a_(i, j) % a_(t, t) != 0) {
              di = i;
              break;
            }
        if (di < 0) break;
        row_add(t, di, 1);
      }
      if (a_(t, t) < 0) row_negate(t);
      ++rank;
    }
    SnfResult r;
    r.rank = rank;
    for (int t = 0; t < lim; ++t) r.diagonal.push_back(a_(t, t));
    if (transforms_) {
      r.U = std::move(u_);
      r.V = std::move(v_);
      r.U_inverse = std::move(u_inv_);
      r.V_inverse = std::move(v_inv_);
    }
    return r;
  }

 private:
  void row_add(int dst, int src, const BigInt& q) {
    if (q == 0) return;
    a_.add_row_multiple(dst, src, q);
    if (transforms_) {
      u_.add_row_multiple(dst, src, q);
      u_inv_.add_col_multiple(src, dst, -q);
    }
  }
  void col_add(int dst, int src, const BigInt& q) {
    if (q == 0) return;
    a_.add_col_multiple(dst, src, q);
    if (transforms_) {
      v_.add_col_multiple(dst, src, q);
      v_inv_.add_row_multiple(src, dst, -q);
    }
  }
  void row_swap(int i, int j) {
    if (i == j) return;
    a_.swap_rows(i, j);
    if (transforms_) {
      u_.swap_rows(i, j);
      u_inv_.swap_cols(i, j);
    }
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    a_.swap_cols(i, j);
    if (transforms_) {
      v_.swap_cols(i, j);
      v_inv_.swap_rows(i, j);
    }
  }
  void row_negate(int i) {
    a_.negate_row(i);
    if (transforms_) {
      u_.negate_row(i);
      u_inv_.negate_col(i);
    }
  }

  IntegerMatrix a_;
  bool transforms_;
  IntegerMatrix u_, u_inv_, v_, v_inv_;
};

}  // namespace

std::vector<BigInt> SnfResult::torsion() const {
  std::vector<BigInt> t;
  for (int i = 0; i < rank; ++i)
    if (diagonal[i] > 1) t.push_back(diagonal[i]);
  return t;
}

IntegerMatrix SnfResult::diagonal_matrix(int rows, int cols) const {
  IntegerMatrix d(rows, cols);
  for (size_t i = 0; i < diagonal.size(); ++i) d(static_cast<int>(i), static_cast<int>(i)) = diagonal[i];
  return d;
}

SnfResult smith_normal_form(const IntegerMatrix& a, bool with_transforms) {
  return SnfWorker(a, with_transforms).run();
}

ElementaryDivisors elementary_divisors(const IncidenceMatrix& a) {
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  std::vector<std::map<int, BigInt>> rows(m);
  std::vector<std::set<int>> cols(n);
  for (int k = 0; k < a.outerSize(); ++k)
    for (IncidenceMatrix::InnerIterator it(a, k); it; ++it)
      if (it.value() != 0) {
        rows[it.row()][static_cast<int>(it.col())] = it.value();
        cols[it.col()].insert(static_cast<int>(it.row()));
      }
  std::vector<bool> row_alive(m, true), col_alive(n, true);
  int rank = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int c = 0; c < n; ++c) {
      if (!col_alive[c] || cols[c].empty()) continue;
      int pr = -1;
      size_t best = 0;
      for (int r : cols[c]) {
        const BigInt& v = rows[r].at(c);
        if (v != 1 && v != -1) continue;
        if (pr < 0 || rows[r].size() < best) {
          pr = r;
          best = rows[r].size();
        }
      }
      if (pr < 0) continue;
      const BigInt u = rows[pr].at(c);
      const std::vector<int> others(cols[c].begin(), cols[c].end());
      for (int r : others) {
        if (r == pr) continue;
        const BigInt f = rows[r].at(c) * u;
        for (const auto& [j, v] : rows[pr]) {
          BigInt& slot = rows[r][j];
          slot -= f * v;
          if (slot == 0) {
            rows[r].erase(j);
            cols[j].erase(r);
          } else {
            cols[j].insert(r);
          }
        }
      }
      for (const auto& [j, v] : rows[pr]) cols[j].erase(pr);
      rows[pr].clear();
      row_alive[pr] = false;
      col_alive[c] = false;
      ++rank;
      progress = true;
    }
  }
  std::vector<int> rest_rows, rest_cols;
  for (int r = 0; r < m; ++r)
    if (row_alive[r] && !rows[r].empty()) rest_rows.push_back(r);
  for (int c = 0; c < n; ++c)
    if (col_alive[c] && !cols[c].empty()) rest_cols.push_back(c);
  ElementaryDivisors out;
  out.rank = rank;
  if (!rest_rows.empty() && !rest_cols.empty()) {
    std::map<int, int> col_pos;
    for (size_t j = 0; j < rest_cols.size(); ++j) col_pos[rest_cols[j]] = static_cast<int>(j);
    IntegerMatrix d(static_cast<int>(rest_rows.size()), static_cast<int>(rest_cols.size()));
    for (size_t i = 0; i < rest_rows.size(); ++i)
      for (const auto& [j, v] : rows[rest_rows[i]]) d(static_cast<int>(i), col_pos.at(j)) = v;
    const SnfResult s = smith_normal_form(d, false);
    out.rank += s.rank;
    out.torsion = s.torsion();
  }
  return out;
}

std::optional<IntegerVector> solve_integer(const SnfResult& snf, const IntegerVector& y) {
  if (snf.U.rows() == 0 && !y.empty() && snf.U_inverse.rows() == 0)
    fail(ErrorCode::kInvalidArgument, "integer solve needs SNF transforms");
  const IntegerVector uy = snf.U * y;
  IntegerVector x(snf.V.rows());
  for (int i = 0; i < static_cast<int>(uy.size()); ++i) {
    if (i < snf.rank) {
      if (uy[i] % snf.diagonal[i] != 0) return std::nullopt;
      x[i] = uy[i] / snf.diagonal[i];
    } else if (uy[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V * x;
}

BigInt torsion_order(const std::vector<BigInt>& torsion) {
  BigInt p = 1;
  for (const auto& t : torsion) p *= t;
  return p;
}

}  // namespace simchar
