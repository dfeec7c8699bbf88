#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "simchar/complex.hpp"
#include "simchar/integer_matrix.hpp"

namespace simchar {

struct HodgeOptions {
  // Eigenvalues below kernel_threshold * (largest eigenvalue) count as zero.
  double kernel_threshold = 1e-12;
};

// Nonzero spectrum of the whitened coboundary d_p, with orthonormal whitened
// singular directions in degree p (coexact) and degree p+1 (exact).
struct CoboundarySpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd source;
  Eigen::MatrixXd target;
};

class HodgeComplex {
 public:
  explicit HodgeComplex(ComplexPtr x, HodgeOptions options = {});
  // Inner products supplied per degree, e.g. pulled back from a subdivision.
  HodgeComplex(ComplexPtr x, std::vector<Eigen::MatrixXd> grams, HodgeOptions options = {});
  // Cochains of `base` identified with E(base, desc) through W'.
  static HodgeComplex on_subdivision(ComplexPtr base, const SimplicialComplex& desc, HodgeOptions options = {});

  int dim() const { return static_cast<int>(grams_.size()) - 1; }
  const ComplexPtr& complex() const { return x_; }
  const HodgeOptions& options() const { return options_; }
  int size(int p) const { return static_cast<int>(grams_.at(p).rows()); }

  const Eigen::MatrixXd& gram(int p) const { return grams_.at(p); }
  const Eigen::MatrixXd& cholesky(int p) const { return factors_.at(p); }
  // d_p : C^p -> C^{p+1}; zero map for p = n.
  const Eigen::MatrixXd& coboundary(int p) const { return d_.at(p); }
  // delta_p = G_{p-1}^{-1} d_{p-1}^T G_p : C^p -> C^{p-1}; zero map for p = 0.
  Eigen::MatrixXd adjoint(int p) const;
  Eigen::MatrixXd laplacian(int p) const;
  // G_p * laplacian(p), symmetric.
  Eigen::MatrixXd stiffness(int p) const;
  const CoboundarySpectrum& spectrum(int p) const { return spectra_.at(p); }

  // Gram-orthonormal bases in cochain coordinates.
  Eigen::MatrixXd exact_basis(int p) const;
  Eigen::MatrixXd coexact_basis(int p) const;
  const Eigen::MatrixXd& harmonic_basis(int p) const { return harmonic_.at(p); }
  int harmonic_dimension(int p) const { return static_cast<int>(harmonic_.at(p).cols()); }

  Eigen::MatrixXd projector_harmonic(int p) const;
  Eigen::MatrixXd projector_exact(int p) const;
  Eigen::MatrixXd projector_coexact(int p) const;
  Eigen::VectorXd project_harmonic(int p, const Eigen::VectorXd& x) const;

  // Whitened coordinates y = L^T x and back.
  Eigen::MatrixXd whiten(int p, const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd unwhiten(int p, const Eigen::MatrixXd& y) const;

 private:
  void build();
  ComplexPtr x_;
  HodgeOptions options_;
  std::vector<Eigen::MatrixXd> grams_;
  std::vector<Eigen::MatrixXd> factors_;
  std::vector<Eigen::MatrixXd> d_;
  std::vector<CoboundarySpectrum> spectra_;
  std::vector<Eigen::MatrixXd> harmonic_;
};

struct HodgeFrame {
  int degree = 0;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd d;
  Eigen::MatrixXd d_previous;
  Eigen::MatrixXd delta;
  Eigen::MatrixXd delta_next;
  Eigen::MatrixXd laplacian;
  // Generalized eigenpairs of the Laplacian, eigenvectors Gram-orthonormal.
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Eigen::MatrixXd harmonic_basis;
  // Columns are harmonic cochains with integral periods; empty when b_p = 0.
  Eigen::MatrixXd harmonic_integral_basis;
  Eigen::MatrixXd h_matrix;
  Eigen::MatrixXd projector_harmonic;
  Eigen::MatrixXd projector_exact;
  Eigen::MatrixXd projector_coexact;
};

HodgeFrame build_frame(const HodgeComplex& hc, int p);
HodgeFrame build_frame(const ComplexPtr& x, int p, HodgeOptions options = {});

// Harmonic projections of integer cocycles (columns).
Eigen::MatrixXd harmonic_integral_basis(const HodgeComplex& hc, int p, const IntegerMatrix& cocycles);
// Harmonic integral basis from the integral cohomology of the complex.
Eigen::MatrixXd harmonic_integral_basis(const HodgeComplex& hc, int p);
Eigen::MatrixXd h_matrix(const HodgeComplex& hc, int p, const Eigen::MatrixXd& rho);

enum class Subspace { kCoexact, kExact, kNonzero };

struct RestrictedDeterminant {
  double log_value = 0.0;
  // Same quantity as exp(-zeta'(0)) with zeta'(0) from a complex-step derivative.
  double log_value_zeta = 0.0;
  int modes = 0;
  bool empty = true;
  double value() const;
};

// Spectrum of the Laplacian in degree p restricted to im delta_{p+1},
// im d_{p-1} or their sum.
Eigen::VectorXd restricted_spectrum(const HodgeComplex& hc, int p, Subspace s);
RestrictedDeterminant restricted_determinant(const HodgeComplex& hc, int p, Subspace s);

// Finite spectral zeta function sum_j u_j^{-s} over nonzero u_j.
double spectral_zeta(const Eigen::VectorXd& u, double s);
// zeta'(0) by complex-step differentiation.
double spectral_zeta_derivative_at_zero(const Eigen::VectorXd& u);
double log_determinant(const Eigen::VectorXd& u);

// One JSON line: degree, eigenvalues, betti, h-matrix.
std::string spectral_report(const HodgeFrame& frame);

}  // namespace simchar
