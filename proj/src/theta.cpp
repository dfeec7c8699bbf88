#include "simchar/theta.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "simchar/error.hpp"

namespace simchar {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) carry_ += (sum_ - t) + x;
  else carry_ += (x - t) + sum_;
  sum_ = t;
}

long long lattice_window_size(int rank, int radius) {
  long long n = 1;
  for (int i = 0; i < rank; ++i) {
    n *= 2LL * radius + 1;
    if (n > (1LL << 40)) return n;
  }
  return n;
}

std::vector<Eigen::VectorXi> lattice_window(int rank, int radius) {
  if (rank < 0 || radius < 0) fail(ErrorCode::kInvalidArgument, "negative lattice rank or radius");
  if (lattice_window_size(rank, radius) > (1LL << 26)) fail(ErrorCode::kTooLarge, "lattice window too large");
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi v = Eigen::VectorXi::Constant(rank, -radius);
  while (true) {
    out.push_back(v);
    int i = rank - 1;
    while (i >= 0 && v[i] == radius) v[i--] = -radius;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

double lattice_tail_bound(int rank, double a, int radius) {
  if (rank == 0) return 0.0;
  if (!(a > 0.0)) return std::numeric_limits<double>::infinity();
  // Points with sup norm j number at most 2k(2j+1)^(k-1) and have |v|^2 >= j^2.
  auto log_term = [&](double j) { return std::log(2.0 * rank) + (rank - 1) * std::log(2 * j + 1) - a * j * j; };
  double total = 0.0;
  for (long long j = radius + 1;; ++j) {
    const double lt = log_term(static_cast<double>(j));
    const double ratio = std::exp(log_term(static_cast<double>(j + 1)) - lt);
    total += std::exp(lt);
    if (ratio <= 0.5) return total + 2.0 * std::exp(log_term(static_cast<double>(j + 1)));
    if (j > radius + 100000) return std::numeric_limits<double>::infinity();
  }
}

int lattice_radius_for(int rank, double a, double tolerance, int start, int max_radius) {
  for (int r = std::max(start, 0); r <= max_radius; ++r)
    if (lattice_tail_bound(rank, a, r) < tolerance) return r;
  return -1;
}

namespace {

double min_imaginary_eigenvalue(const Eigen::MatrixXcd& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorCode::kInvalidArgument, "theta argument is not symmetric");
  const Eigen::MatrixXd im = 0.5 * (a.imag() + a.imag().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (!(lo > 0.0)) fail(ErrorCode::kNotPositiveDefinite, "imaginary part of theta argument is not positive definite");
  return lo;
}

}  // namespace

std::complex<double> theta_window(const Eigen::MatrixXcd& a, int radius) {
  const std::complex<double> pi_i(0.0, M_PI);
  CompensatedComplexSum s;
  for (const Eigen::VectorXi& v : lattice_window(static_cast<int>(a.rows()), radius)) {
    const Eigen::VectorXcd vc = v.cast<double>().cast<std::complex<double>>();
    s.add(std::exp(pi_i * (vc.transpose() * a * vc)(0, 0)));
  }
  return s.value();
}

ThetaResult theta(const Eigen::MatrixXcd& a, int radius, double tolerance, int max_radius) {
  if (a.rows() != a.cols()) fail(ErrorCode::kInvalidArgument, "theta argument is not square");
  const int k = static_cast<int>(a.rows());
  ThetaResult r;
  if (k == 0) {
    r.value = 1.0;
    return r;
  }
  const double lo = min_imaginary_eigenvalue(a);
  r.radius = lattice_radius_for(k, M_PI * lo, tolerance, radius, max_radius);
  if (r.radius < 0) fail(ErrorCode::kTruncationInsufficient, "theta tail bound exceeds tolerance at max radius");
  r.tail_bound = lattice_tail_bound(k, M_PI * lo, r.radius);
  r.value = theta_window(a, r.radius);
  return r;
}

std::complex<double> fourier_zero_mode(const std::function<std::complex<double>(const Eigen::VectorXd&)>& f,
                                       int torus_dim, ZeroModeOptions options) {
  if (torus_dim < 0 || options.grid < 1) fail(ErrorCode::kInvalidArgument, "invalid zero mode grid");
  if (torus_dim == 0) return f(Eigen::VectorXd());
  auto average = [&](int n) {
    CompensatedComplexSum s;
    Eigen::VectorXi idx = Eigen::VectorXi::Zero(torus_dim);
    Eigen::VectorXd z(torus_dim);
    bool constant = true;
    std::complex<double> first;
    long long count = 0;
    CompensatedSum magnitude;
    while (true) {
      for (int i = 0; i < torus_dim; ++i) z[i] = static_cast<double>(idx[i]) / n;
      const std::complex<double> v = f(z);
      if (count == 0) first = v;
      else if (v != first) constant = false;
      s.add(v);
      magnitude.add(std::abs(v));
      ++count;
      int i = torus_dim - 1;
      while (i >= 0 && idx[i] == n - 1) idx[i--] = 0;
      if (i < 0) break;
      ++idx[i];
    }
    if (constant) return first;
    // Averages at roundoff level of the samples are cancellations to zero.
    if (std::abs(s.value()) <= 64 * std::numeric_limits<double>::epsilon() * magnitude.value())
      return std::complex<double>(0.0);
    return s.value() / static_cast<double>(count);
  };
  auto points = [&](int n) {
    long long p = 1;
    for (int i = 0; i < torus_dim; ++i) p *= n;
    return p;
  };
  int n = options.grid;
  std::complex<double> prev = average(n);
  while (2 * n <= options.max_grid && points(2 * n) <= options.max_points) {
    n *= 2;
    const std::complex<double> next = average(n);
    if (std::abs(next - prev) <= options.tolerance * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
  fail(ErrorCode::kNonConvergent, "zero mode grid average did not converge");
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "Gauss-Hermite rule needs at least one node");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussHermiteRule r;
  r.nodes = es.eigenvalues();
  r.weights = std::sqrt(M_PI) * es.eigenvectors().row(0).transpose().array().square();
  return r;
}

}  // namespace simchar
