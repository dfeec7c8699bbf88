#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace simchar {

// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Points of Z^k with sup norm <= radius in lexicographic order.
std::vector<Eigen::VectorXi> lattice_window(int rank, int radius);
long long lattice_window_size(int rank, int radius);

// Upper bound for sum of exp(-a |v|^2) over v in Z^k with sup norm > radius.
double lattice_tail_bound(int rank, double a, int radius);
// Smallest radius >= start whose tail bound is below tolerance, or -1 past max_radius.
int lattice_radius_for(int rank, double a, double tolerance, int start, int max_radius);

struct ThetaResult {
  std::complex<double> value;
  int radius = 0;
  double tail_bound = 0.0;
};

// Theta(A) = sum over v in Z^k of exp(pi i v^T A v) for symmetric A with Im A > 0.
// The radius grows from `radius` until the tail bound is below `tolerance`.
ThetaResult theta(const Eigen::MatrixXcd& a, int radius = 8, double tolerance = 1e-12,
                  int max_radius = 64);
// Plain window sum without growth or tail estimate.
std::complex<double> theta_window(const Eigen::MatrixXcd& a, int radius);

struct ZeroModeOptions {
  int grid = 8;
  int max_grid = 256;
  double tolerance = 1e-12;
  long long max_points = 1LL << 22;
};

// Constant Fourier coefficient of a function on the torus R^k / Z^k from uniform
// grid averages, doubling the grid until successive averages agree.
std::complex<double> fourier_zero_mode(const std::function<std::complex<double>(const Eigen::VectorXd&)>& f,
                                       int torus_dim, ZeroModeOptions options = {});

struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
// n-point rule for the weight exp(-x^2).
GaussHermiteRule gauss_hermite(int n);

}  // namespace simchar
