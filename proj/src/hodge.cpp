#include "simchar/hodge.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "json.hpp"
#include "simchar/error.hpp"
#include "simchar/exact_algebra.hpp"
#include "simchar/whitney.hpp"

namespace simchar {

namespace {

constexpr std::uint64_t kComplementSeed = 0x5eed;

CoboundarySpectrum whitened_spectrum(const Eigen::MatrixXd& dt, double threshold) {
  CoboundarySpectrum s;
  const int m = static_cast<int>(dt.rows());
  const int n = static_cast<int>(dt.cols());
  if (m == 0 || n == 0) {
    s.source.resize(n, 0);
    s.target.resize(m, 0);
    return s;
  }
  const bool by_source = n <= m;
  const Eigen::MatrixXd gram = by_source ? Eigen::MatrixXd(dt.transpose() * dt) : Eigen::MatrixXd(dt * dt.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = ev.size() ? std::max(ev.maxCoeff(), 0.0) : 0.0;
  std::vector<int> keep;
  for (int j = 0; j < ev.size(); ++j)
    if (top > 0.0 && ev[j] > threshold * top) keep.push_back(j);
  const int r = static_cast<int>(keep.size());
  s.values.resize(r);
  Eigen::MatrixXd kept(by_source ? n : m, r);
  for (int j = 0; j < r; ++j) {
    s.values[j] = ev[keep[j]];
    kept.col(j) = es.eigenvectors().col(keep[j]);
  }
  const Eigen::VectorXd inv_sigma = s.values.cwiseSqrt().cwiseInverse();
  if (by_source) {
    s.source = kept;
    s.target = dt * kept * inv_sigma.asDiagonal();
  } else {
    s.target = kept;
    s.source = dt.transpose() * kept * inv_sigma.asDiagonal();
  }
  return s;
}

// Orthonormal basis of the orthogonal complement of the orthonormal columns q in R^n.
Eigen::MatrixXd complement(const Eigen::MatrixXd& q, int n) {
  const int b = n - static_cast<int>(q.cols());
  if (b <= 0) return Eigen::MatrixXd(n, 0);
  std::mt19937_64 rng(kComplementSeed);
  boost::random::normal_distribution<double> g;
  Eigen::MatrixXd r(n, b);
  for (int j = 0; j < b; ++j)
    for (int i = 0; i < n; ++i) r(i, j) = g(rng);
  for (int pass = 0; pass < 2; ++pass) {
    if (q.cols() > 0) r -= q * (q.transpose() * r);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(r);
    r = qr.householderQ() * Eigen::MatrixXd::Identity(n, b);
  }
  return r;
}

}  // namespace

HodgeComplex::HodgeComplex(ComplexPtr x, HodgeOptions options) : x_(std::move(x)), options_(options) {
  for (int p = 0; p <= x_->dim(); ++p) grams_.push_back(gram_matrix(*x_, p));
  build();
}

HodgeComplex::HodgeComplex(ComplexPtr x, std::vector<Eigen::MatrixXd> grams, HodgeOptions options)
    : x_(std::move(x)), options_(options), grams_(std::move(grams)) {
  if (static_cast<int>(grams_.size()) != x_->dim() + 1)
    fail(ErrorCode::kDegreeMismatch, "one Gram matrix per degree required");
  for (int p = 0; p <= x_->dim(); ++p)
    if (grams_[p].rows() != x_->count(p) || grams_[p].cols() != x_->count(p))
      fail(ErrorCode::kDegreeMismatch, "Gram matrix size does not match cochain dimension");
  build();
}

HodgeComplex HodgeComplex::on_subdivision(ComplexPtr base, const SimplicialComplex& desc, HodgeOptions options) {
  WhitneyIntegrator in(desc, *base);
  std::vector<Eigen::MatrixXd> grams;
  for (int p = 0; p <= base->dim(); ++p) {
    const Eigen::MatrixXd w = Eigen::MatrixXd(in.embedding(p));
    grams.push_back(w.transpose() * gram_matrix(desc, p) * w);
  }
  return HodgeComplex(std::move(base), std::move(grams), options);
}

void HodgeComplex::build() {
  const int n = x_->dim();
  for (int p = 0; p <= n; ++p) {
    grams_[p] = 0.5 * (grams_[p] + grams_[p].transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(grams_[p]);
    if (llt.info() != Eigen::Success) fail(ErrorCode::kSingularGram, "Gram matrix is not positive definite");
    factors_.push_back(llt.matrixL());
    if (p < n) d_.push_back(x_->coboundary_dense(p));
    else d_.push_back(Eigen::MatrixXd::Zero(0, x_->count(n)));
  }
  for (int p = 0; p < n; ++p) {
    // dt = L_{p+1}^T d_p L_p^{-T}
    const Eigen::MatrixXd a = factors_[p + 1].transpose() * d_[p];
    const Eigen::MatrixXd dt =
        factors_[p].triangularView<Eigen::Lower>().solve(a.transpose()).transpose();
    spectra_.push_back(whitened_spectrum(dt, options_.kernel_threshold));
  }
  for (int p = 0; p <= n; ++p) {
    const int ex = p > 0 ? static_cast<int>(spectra_[p - 1].target.cols()) : 0;
    const int co = p < n ? static_cast<int>(spectra_[p].source.cols()) : 0;
    Eigen::MatrixXd q(size(p), ex + co);
    if (ex) q.leftCols(ex) = spectra_[p - 1].target;
    if (co) q.rightCols(co) = spectra_[p].source;
    harmonic_.push_back(unwhiten(p, complement(q, size(p))));
  }
}

Eigen::MatrixXd HodgeComplex::whiten(int p, const Eigen::MatrixXd& x) const {
  return factors_.at(p).transpose() * x;
}

Eigen::MatrixXd HodgeComplex::unwhiten(int p, const Eigen::MatrixXd& y) const {
  return factors_.at(p).transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd HodgeComplex::adjoint(int p) const {
  if (p < 0 || p > dim()) fail(ErrorCode::kDegreeOutOfRange, "degree out of range");
  if (p == 0) return Eigen::MatrixXd::Zero(0, size(0));
  const Eigen::MatrixXd rhs = d_[p - 1].transpose() * grams_[p];
  return Eigen::LLT<Eigen::MatrixXd>(grams_[p - 1]).solve(rhs);
}

Eigen::MatrixXd HodgeComplex::laplacian(int p) const {
  if (p < 0 || p > dim()) fail(ErrorCode::kDegreeOutOfRange, "degree out of range");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(size(p), size(p));
  if (p > 0) l += d_[p - 1] * adjoint(p);
  if (p < dim()) l += adjoint(p + 1) * d_[p];
  return l;
}

Eigen::MatrixXd HodgeComplex::stiffness(int p) const {
  const Eigen::MatrixXd s = grams_.at(p) * laplacian(p);
  return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd HodgeComplex::exact_basis(int p) const {
  if (p == 0) return Eigen::MatrixXd(size(0), 0);
  return unwhiten(p, spectra_.at(p - 1).target);
}

Eigen::MatrixXd HodgeComplex::coexact_basis(int p) const {
  if (p == dim()) return Eigen::MatrixXd(size(p), 0);
  return unwhiten(p, spectra_.at(p).source);
}

namespace {
Eigen::MatrixXd projector(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& gram) {
  return basis * (basis.transpose() * gram);
}
}  // namespace

Eigen::MatrixXd HodgeComplex::projector_harmonic(int p) const { return projector(harmonic_.at(p), grams_[p]); }
Eigen::MatrixXd HodgeComplex::projector_exact(int p) const { return projector(exact_basis(p), grams_.at(p)); }
Eigen::MatrixXd HodgeComplex::projector_coexact(int p) const { return projector(coexact_basis(p), grams_.at(p)); }

Eigen::VectorXd HodgeComplex::project_harmonic(int p, const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd& h = harmonic_.at(p);
  return h * (h.transpose() * (grams_[p] * x));
}

HodgeFrame build_frame(const HodgeComplex& hc, int p) {
  if (p < 0 || p > hc.dim()) fail(ErrorCode::kDegreeOutOfRange, "degree out of range");
  HodgeFrame f;
  f.degree = p;
  f.gram = hc.gram(p);
  f.d = hc.coboundary(p);
  f.d_previous = p > 0 ? hc.coboundary(p - 1) : Eigen::MatrixXd(hc.size(p), 0);
  f.delta = hc.adjoint(p);
  f.delta_next = p < hc.dim() ? hc.adjoint(p + 1) : Eigen::MatrixXd(hc.size(p), 0);
  f.laplacian = hc.laplacian(p);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(hc.stiffness(p), f.gram);
  if (es.info() != Eigen::Success) fail(ErrorCode::kNonConvergent, "generalized eigensolver failed");
  f.eigenvalues = es.eigenvalues();
  f.eigenvectors = es.eigenvectors();
  const double top = f.eigenvalues.size() ? f.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  for (int j = 0; j < f.eigenvalues.size(); ++j)
    if (f.eigenvalues[j] < hc.options().kernel_threshold * top) f.eigenvalues[j] = 0.0;
  f.harmonic_basis = hc.harmonic_basis(p);
  f.projector_harmonic = hc.projector_harmonic(p);
  f.projector_exact = hc.projector_exact(p);
  f.projector_coexact = hc.projector_coexact(p);
  f.harmonic_integral_basis = harmonic_integral_basis(hc, p);
  f.h_matrix = h_matrix(hc, p, f.harmonic_integral_basis);
  return f;
}

HodgeFrame build_frame(const ComplexPtr& x, int p, HodgeOptions options) {
  return build_frame(HodgeComplex(x, options), p);
}

Eigen::MatrixXd harmonic_integral_basis(const HodgeComplex& hc, int p, const IntegerMatrix& cocycles) {
  if (cocycles.rows() != hc.size(p)) fail(ErrorCode::kDegreeMismatch, "cocycle length does not match degree");
  Eigen::MatrixXd rho(hc.size(p), cocycles.cols());
  for (int j = 0; j < cocycles.cols(); ++j) rho.col(j) = hc.project_harmonic(p, to_double(cocycles.column(j)));
  return rho;
}

Eigen::MatrixXd harmonic_integral_basis(const HodgeComplex& hc, int p) {
  return harmonic_integral_basis(hc, p, integral_basis(*hc.complex(), p).cocycles);
}

Eigen::MatrixXd h_matrix(const HodgeComplex& hc, int p, const Eigen::MatrixXd& rho) {
  const Eigen::MatrixXd h = rho.transpose() * hc.gram(p) * rho;
  return 0.5 * (h + h.transpose());
}

double RestrictedDeterminant::value() const { return std::exp(log_value); }

Eigen::VectorXd restricted_spectrum(const HodgeComplex& hc, int p, Subspace s) {
  if (p < 0 || p > hc.dim()) fail(ErrorCode::kDegreeOutOfRange, "degree out of range");
  const Eigen::VectorXd none(0);
  const Eigen::VectorXd& co = p < hc.dim() ? hc.spectrum(p).values : none;
  const Eigen::VectorXd& ex = p > 0 ? hc.spectrum(p - 1).values : none;
  switch (s) {
    case Subspace::kCoexact:
      return co;
    case Subspace::kExact:
      return ex;
    case Subspace::kNonzero: {
      Eigen::VectorXd all(co.size() + ex.size());
      all << ex, co;
      std::sort(all.data(), all.data() + all.size());
      return all;
    }
  }
  return none;
}

double spectral_zeta(const Eigen::VectorXd& u, double s) {
  double z = 0.0;
  for (double v : u)
    if (v > 0.0) z += std::pow(v, -s);
  return z;
}

double spectral_zeta_derivative_at_zero(const Eigen::VectorXd& u) {
  constexpr double h = 1e-30;
  std::complex<double> z(0.0, 0.0);
  const std::complex<double> s(0.0, h);
  for (double v : u)
    if (v > 0.0) z += std::exp(-s * std::log(v));
  return z.imag() / h;
}

double log_determinant(const Eigen::VectorXd& u) {
  double total = 0.0;
  for (double v : u)
    if (v > 0.0) total += std::log(v);
  return total;
}

RestrictedDeterminant restricted_determinant(const HodgeComplex& hc, int p, Subspace s) {
  const Eigen::VectorXd u = restricted_spectrum(hc, p, s);
  RestrictedDeterminant d;
  d.modes = static_cast<int>(u.size());
  d.empty = u.size() == 0;
  d.log_value = log_determinant(u);
  d.log_value_zeta = -spectral_zeta_derivative_at_zero(u);
  return d;
}

std::string spectral_report(const HodgeFrame& frame) {
  nlohmann::json j;
  j["degree"] = frame.degree;
  j["eigenvalues"] = std::vector<double>(frame.eigenvalues.data(), frame.eigenvalues.data() + frame.eigenvalues.size());
  j["betti"] = frame.harmonic_basis.cols();
  std::vector<std::vector<double>> h;
  for (int r = 0; r < frame.h_matrix.rows(); ++r) {
    std::vector<double> row;
    for (int c = 0; c < frame.h_matrix.cols(); ++c) row.push_back(frame.h_matrix(r, c));
    h.push_back(row);
  }
  j["h_matrix"] = h;
  return j.dump();
}

}  // namespace simchar
