#include "simchar/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "simchar/error.hpp"

namespace simchar {

namespace {

template <class S>
S determinant(std::vector<std::vector<S>> m) {
  const int n = static_cast<int>(m.size());
  S det(1);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int r = c; r < n; ++r) {
      if (m[r][c] == S(0)) continue;
      if constexpr (std::is_same_v<S, double>) {
        if (p < 0 || std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
      } else {
        p = r;
        break;
      }
    }
    if (p < 0) return S(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (m[r][c] == S(0)) continue;
      const S f = m[r][c] / m[c][c];
      for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// Terms of the elementary Whitney form of the face at local positions `local`.
template <class S>
void append_elementary(std::vector<WhitneyTerm<S>>& out, const std::vector<int>& local, const S& coeff) {
  const int k = static_cast<int>(local.size()) - 1;
  const S scaled = coeff * S(static_cast<long>(factorial(k)));
  for (int a = 0; a <= k; ++a) {
    WhitneyTerm<S> t;
    t.coeff = (a % 2 == 0) ? scaled : S(-scaled);
    t.monomial = local[a];
    for (int b = 0; b <= k; ++b)
      if (b != a) t.wedge.push_back(local[b]);
    out.push_back(std::move(t));
  }
}

template <class S>
BasicWhitneyForm<S> build_form(const ComplexPtr& base, int k, const std::function<S(int)>& coeff) {
  if (!base) fail(ErrorCode::kInvalidArgument, "cochain without base complex");
  const int n = base->dim();
  if (k < 0 || k > n) fail(ErrorCode::kDegreeOutOfRange, "Whitney form degree out of range");
  BasicWhitneyForm<S> w;
  w.degree = k;
  w.base = base;
  w.terms.resize(base->count(n));
  const auto faces = combinations(n + 1, k + 1);
  for (int t = 0; t < base->count(n); ++t) {
    const Simplex& top = base->simplex(n, t);
    for (const auto& local : faces) {
      Simplex s;
      for (int l : local) s.push_back(top[l]);
      const int idx = base->find(s);
      const S c = coeff(idx) * S(base->orientation(k, idx));
      if (c == S(0)) continue;
      append_elementary(w.terms[t], local, c);
    }
  }
  return w;
}

template <class S>
BasicWhitneyForm<S> derivative_impl(const BasicWhitneyForm<S>& w) {
  BasicWhitneyForm<S> d;
  d.degree = w.degree + 1;
  d.base = w.base;
  d.terms.resize(w.terms.size());
  for (size_t t = 0; t < w.terms.size(); ++t)
    for (const auto& term : w.terms[t]) {
      if (term.monomial < 0) continue;
      WhitneyTerm<S> out;
      out.coeff = term.coeff;
      out.monomial = -1;
      out.wedge.push_back(term.monomial);
      out.wedge.insert(out.wedge.end(), term.wedge.begin(), term.wedge.end());
      d.terms[t].push_back(std::move(out));
    }
  return d;
}

// Integral over the simplex with barycentric rows b (k+1 rows over the top's local vertices).
template <class S>
S integrate_terms(const std::vector<WhitneyTerm<S>>& terms, const std::vector<std::vector<S>>& b) {
  const int k = static_cast<int>(b.size()) - 1;
  const S inv_kf = S(1) / S(static_cast<long>(factorial(k)));
  const S inv_k1f = S(1) / S(static_cast<long>(factorial(k + 1)));
  S total(0);
  for (const auto& term : terms) {
    if (static_cast<int>(term.wedge.size()) != k) continue;
    std::vector<std::vector<S>> m(k, std::vector<S>(k));
    for (int a = 0; a < k; ++a)
      for (int j = 0; j < k; ++j) m[a][j] = b[j + 1][term.wedge[a]] - b[0][term.wedge[a]];
    const S det = determinant(m);
    if (det == S(0)) continue;
    S mono;
    if (term.monomial < 0) {
      mono = inv_kf;
    } else {
      S s(0);
      for (int j = 0; j <= k; ++j) s += b[j][term.monomial];
      mono = s * inv_k1f;
    }
    total += term.coeff * det * mono;
  }
  return total;
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> r(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

}  // namespace

Cochain coboundary(const Cochain& c) {
  Cochain d;
  d.degree = c.degree + 1;
  d.base = c.base;
  d.coeffs = c.base->coboundary_sparse(c.degree) * c.coeffs;
  return d;
}

WhitneyForm whitney(const Cochain& tau) {
  if (!tau.base) fail(ErrorCode::kInvalidArgument, "cochain without base complex");
  if (tau.degree < 0 || tau.degree > tau.base->dim() || tau.coeffs.size() != tau.base->count(tau.degree))
    fail(ErrorCode::kDegreeMismatch, "cochain length does not match its degree");
  return build_form<double>(tau.base, tau.degree, [&](int i) { return tau.coeffs[i]; });
}

ExactWhitneyForm whitney_exact(const ComplexPtr& base, int degree, const std::vector<BigRational>& coeffs) {
  if (static_cast<int>(coeffs.size()) != base->count(degree))
    fail(ErrorCode::kDegreeMismatch, "cochain length does not match its degree");
  return build_form<BigRational>(base, degree, [&](int i) { return coeffs[i]; });
}

WhitneyForm exterior_derivative(const WhitneyForm& w) { return derivative_impl(w); }
ExactWhitneyForm exterior_derivative(const ExactWhitneyForm& w) { return derivative_impl(w); }

WhitneyIntegrator::WhitneyIntegrator(const SimplicialComplex& desc, const SimplicialComplex& base)
    : desc_(desc), base_(base) {
  auto m = descent_map(desc, base);
  if (!m) fail(ErrorCode::kNoParentLink, "complex does not descend from the form's base");
  map_ = std::move(*m);
  const int n = base.dim();
  top_of_.resize(n + 1);
  top_of_[n].resize(base.count(n));
  for (int t = 0; t < base.count(n); ++t) top_of_[n][t] = t;
  for (int k = n - 1; k >= 0; --k) {
    top_of_[k].resize(base.count(k));
    for (int i = 0; i < base.count(k); ++i) top_of_[k][i] = top_of_[k + 1][base.cofaces(k, i).front()];
  }
}

template <class S>
S WhitneyIntegrator::integrate_impl(const BasicWhitneyForm<S>& w, int i) const {
  if (w.base.get() != &base_) fail(ErrorCode::kNoParentLink, "form base differs from integrator base");
  const int k = w.degree;
  if (k > desc_.dim()) fail(ErrorCode::kDegreeMismatch, "form degree exceeds complex dimension");
  if (i < 0 || i >= desc_.count(k)) fail(ErrorCode::kIndexOutOfRange, "simplex index out of range");
  const SimplexRef rho = map_.carriers[k][i];
  const int top = top_of_[rho.dim][rho.index];
  const Simplex& frame = base_.simplex(base_.dim(), top);
  std::vector<std::vector<S>> b;
  if constexpr (std::is_same_v<S, double>) b = to_rows(barycentric_rows(map_, desc_, base_, k, i, frame));
  else b = barycentric_rows_exact(map_, desc_, base_, k, i, frame);
  return integrate_terms(w.terms[top], b) * S(desc_.orientation(k, i));
}

double WhitneyIntegrator::integrate(const WhitneyForm& w, int i) const { return integrate_impl(w, i); }
BigRational WhitneyIntegrator::integrate(const ExactWhitneyForm& w, int i) const { return integrate_impl(w, i); }

double WhitneyIntegrator::integrate_chain(const WhitneyForm& w, const Eigen::VectorXd& chain) const {
  if (chain.size() != desc_.count(w.degree)) fail(ErrorCode::kDegreeMismatch, "chain degree does not match form");
  double total = 0.0;
  for (int i = 0; i < chain.size(); ++i)
    if (chain[i] != 0.0) total += chain[i] * integrate(w, i);
  return total;
}

double WhitneyIntegrator::elementary_integral(int k, int c, int s) const {
  const SimplexRef rho = map_.carriers[k][c];
  const Simplex& carrier = base_.simplex(rho.dim, rho.index);
  const Simplex& face = base_.simplex(k, s);
  for (int v : face)
    if (std::find(carrier.begin(), carrier.end(), v) == carrier.end()) return 0.0;
  const int top = top_of_[rho.dim][rho.index];
  const Simplex& frame = base_.simplex(base_.dim(), top);
  std::vector<int> local;
  for (int v : face) local.push_back(static_cast<int>(std::find(frame.begin(), frame.end(), v) - frame.begin()));
  std::vector<WhitneyTerm<double>> terms;
  append_elementary(terms, local, 1.0);
  const auto b = to_rows(barycentric_rows(map_, desc_, base_, k, c, frame));
  return integrate_terms(terms, b) * desc_.orientation(k, c) * base_.orientation(k, s);
}

Eigen::SparseMatrix<double> WhitneyIntegrator::embedding(int k) const {
  if (k < 0 || k > base_.dim()) fail(ErrorCode::kDegreeOutOfRange, "embedding degree out of range");
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < desc_.count(k); ++c) {
    const SimplexRef rho = map_.carriers[k][c];
    const Simplex& carrier = base_.simplex(rho.dim, rho.index);
    for (const auto& local : combinations(static_cast<int>(carrier.size()), k + 1)) {
      Simplex face;
      for (int l : local) face.push_back(carrier[l]);
      const int s = base_.find(face);
      const double v = elementary_integral(k, c, s);
      if (v != 0.0) trip.emplace_back(c, s, v);
    }
  }
  Eigen::SparseMatrix<double> w(desc_.count(k), base_.count(k));
  w.setFromTriplets(trip.begin(), trip.end());
  return w;
}

std::vector<Eigen::Triplet<BigRational>> WhitneyIntegrator::embedding_exact(int k) const {
  std::vector<Eigen::Triplet<BigRational>> trip;
  for (int c = 0; c < desc_.count(k); ++c) {
    const SimplexRef rho = map_.carriers[k][c];
    const Simplex& carrier = base_.simplex(rho.dim, rho.index);
    const int top = top_of_[rho.dim][rho.index];
    const Simplex& frame = base_.simplex(base_.dim(), top);
    const auto b = barycentric_rows_exact(map_, desc_, base_, k, c, frame);
    for (const auto& sel : combinations(static_cast<int>(carrier.size()), k + 1)) {
      Simplex face;
      std::vector<int> local;
      for (int l : sel) {
        face.push_back(carrier[l]);
        local.push_back(static_cast<int>(std::find(frame.begin(), frame.end(), carrier[l]) - frame.begin()));
      }
      const int s = base_.find(face);
      std::vector<WhitneyTerm<BigRational>> terms;
      append_elementary(terms, local, BigRational(1));
      const BigRational v =
          integrate_terms(terms, b) * BigRational(desc_.orientation(k, c) * base_.orientation(k, s));
      if (v != 0) trip.emplace_back(c, s, v);
    }
  }
  return trip;
}

double integrate(const WhitneyForm& w, const SimplicialComplex& desc, int k, int i) {
  if (k != w.degree) fail(ErrorCode::kDegreeMismatch, "chain degree does not match form degree");
  return WhitneyIntegrator(desc, *w.base).integrate(w, i);
}

Cochain de_rham_map(const WhitneyForm& w, const ComplexPtr& desc) {
  WhitneyIntegrator in(*desc, *w.base);
  Cochain c;
  c.degree = w.degree;
  c.base = desc;
  c.coeffs.resize(desc->count(w.degree));
  for (int i = 0; i < c.coeffs.size(); ++i) c.coeffs[i] = in.integrate(w, i);
  return c;
}

std::vector<BigRational> de_rham_map_exact(const ExactWhitneyForm& w, const ComplexPtr& desc) {
  WhitneyIntegrator in(*desc, *w.base);
  std::vector<BigRational> out(desc->count(w.degree));
  for (size_t i = 0; i < out.size(); ++i) out[i] = in.integrate(w, static_cast<int>(i));
  return out;
}

Eigen::SparseMatrix<double> embedding_matrix(const SimplicialComplex& desc, const SimplicialComplex& base, int k) {
  return WhitneyIntegrator(desc, base).embedding(k);
}

Cochain embed_w(const Cochain& tau, const ComplexPtr& desc) {
  Cochain c;
  c.degree = tau.degree;
  c.base = desc;
  c.coeffs = embedding_matrix(*desc, *tau.base, tau.degree) * tau.coeffs;
  return c;
}

Eigen::MatrixXd barycentric_gradient_gram(const SimplicialComplex& x, int top) {
  const int n = x.dim();
  const Simplex& s = x.simplex(n, top);
  Eigen::MatrixXd e(x.embed_dim(), n);
  for (int j = 0; j < n; ++j) e.col(j) = x.vertex(s[j + 1]) - x.vertex(s[0]);
  const Eigen::MatrixXd p = (e.transpose() * e).inverse();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n);
  a.row(0).setConstant(-1.0);
  a.bottomRows(n).setIdentity();
  return a * p * a.transpose();
}

namespace {

double pair_terms(const std::vector<WhitneyTerm<double>>& ta, const std::vector<WhitneyTerm<double>>& tb,
                  const Eigen::MatrixXd& g, double vol, int n) {
  const double c1 = vol / (n + 1);
  const double c2 = vol / ((n + 1.0) * (n + 2.0));
  double total = 0.0;
  for (const auto& a : ta)
    for (const auto& b : tb) {
      const int k = static_cast<int>(a.wedge.size());
      Eigen::MatrixXd m(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = g(a.wedge[i], b.wedge[j]);
      const double det = k == 0 ? 1.0 : m.determinant();
      double mono;
      if (a.monomial < 0 && b.monomial < 0) mono = vol;
      else if (a.monomial < 0 || b.monomial < 0) mono = c1;
      else mono = (a.monomial == b.monomial ? 2.0 : 1.0) * c2;
      total += a.coeff * b.coeff * det * mono;
    }
  return total;
}

}  // namespace

double inner_product(const WhitneyForm& a, const WhitneyForm& b) {
  if (a.degree != b.degree) fail(ErrorCode::kDegreeMismatch, "inner product of forms of different degree");
  if (a.base != b.base) fail(ErrorCode::kInvalidArgument, "inner product of forms on different complexes");
  const SimplicialComplex& x = *a.base;
  const int n = x.dim();
  double total = 0.0;
  for (int t = 0; t < x.count(n); ++t) {
    if (a.terms[t].empty() || b.terms[t].empty()) continue;
    total += pair_terms(a.terms[t], b.terms[t], barycentric_gradient_gram(x, t), x.volume(n, t), n);
  }
  return total;
}

double inner_product(const Cochain& a, const Cochain& b) {
  if (a.degree != b.degree) fail(ErrorCode::kDegreeMismatch, "inner product of cochains of different degree");
  return inner_product(whitney(a), whitney(b));
}

Eigen::MatrixXd gram_matrix(const SimplicialComplex& x, int k) {
  const int n = x.dim();
  if (k < 0 || k > n) fail(ErrorCode::kDegreeOutOfRange, "Gram degree out of range");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(x.count(k), x.count(k));
  const auto faces = combinations(n + 1, k + 1);
  for (int t = 0; t < x.count(n); ++t) {
    const Simplex& top = x.simplex(n, t);
    const Eigen::MatrixXd grad = barycentric_gradient_gram(x, t);
    const double vol = x.volume(n, t);
    std::vector<int> idx;
    std::vector<std::vector<WhitneyTerm<double>>> forms;
    for (const auto& local : faces) {
      Simplex s;
      for (int l : local) s.push_back(top[l]);
      const int i = x.find(s);
      idx.push_back(i);
      std::vector<WhitneyTerm<double>> terms;
      append_elementary(terms, local, static_cast<double>(x.orientation(k, i)));
      forms.push_back(std::move(terms));
    }
    for (size_t p = 0; p < forms.size(); ++p)
      for (size_t q = p; q < forms.size(); ++q) {
        const double v = pair_terms(forms[p], forms[q], grad, vol, n);
        g(idx[p], idx[q]) += v;
        if (q != p) g(idx[q], idx[p]) += v;
      }
  }
  return g;
}

}  // namespace simchar
