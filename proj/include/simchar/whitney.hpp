#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "simchar/complex.hpp"
#include "simchar/integer_matrix.hpp"

namespace simchar {

struct Cochain {
  int degree = 0;
  ComplexPtr base;
  Eigen::VectorXd coeffs;
};

Cochain coboundary(const Cochain& c);

// One term coeff * mu_monomial * d mu_wedge[0] ^ ... in the local barycentric
// coordinates of a top simplex; monomial == -1 stands for the constant 1.
template <class Scalar>
struct WhitneyTerm {
  Scalar coeff;
  int monomial = -1;
  std::vector<int> wedge;
};

template <class Scalar>
struct BasicWhitneyForm {
  int degree = 0;
  ComplexPtr base;
  std::vector<std::vector<WhitneyTerm<Scalar>>> terms;
};

using WhitneyForm = BasicWhitneyForm<double>;
using ExactWhitneyForm = BasicWhitneyForm<BigRational>;

WhitneyForm whitney(const Cochain& tau);
ExactWhitneyForm whitney_exact(const ComplexPtr& base, int degree, const std::vector<BigRational>& coeffs);
WhitneyForm exterior_derivative(const WhitneyForm& w);
ExactWhitneyForm exterior_derivative(const ExactWhitneyForm& w);

// Integration of base forms over simplices of a descendant complex.
class WhitneyIntegrator {
 public:
  WhitneyIntegrator(const SimplicialComplex& desc, const SimplicialComplex& base);

  double integrate(const WhitneyForm& w, int i) const;
  BigRational integrate(const ExactWhitneyForm& w, int i) const;
  // Integral over an integer or real chain of the form's degree.
  double integrate_chain(const WhitneyForm& w, const Eigen::VectorXd& chain) const;

  // Integral of the elementary Whitney form of base simplex (k, s) over desc simplex (k, c).
  double elementary_integral(int k, int c, int s) const;
  // Matrix of W' : C^k(base) -> C^k(desc).
  Eigen::SparseMatrix<double> embedding(int k) const;
  std::vector<Eigen::Triplet<BigRational>> embedding_exact(int k) const;

 private:
  template <class Scalar>
  Scalar integrate_impl(const BasicWhitneyForm<Scalar>& w, int i) const;
  const SimplicialComplex& desc_;
  const SimplicialComplex& base_;
  DescentMap map_;
  std::vector<std::vector<int>> top_of_;
};

double integrate(const WhitneyForm& w, const SimplicialComplex& desc, int k, int i);
Cochain de_rham_map(const WhitneyForm& w, const ComplexPtr& desc);
std::vector<BigRational> de_rham_map_exact(const ExactWhitneyForm& w, const ComplexPtr& desc);
Eigen::SparseMatrix<double> embedding_matrix(const SimplicialComplex& desc, const SimplicialComplex& base, int k);
Cochain embed_w(const Cochain& tau, const ComplexPtr& desc);

// L2 pairing of piecewise forms over the base complex.
double inner_product(const WhitneyForm& a, const WhitneyForm& b);
double inner_product(const Cochain& a, const Cochain& b);
// Gram matrix of elementary Whitney forms of degree k.
Eigen::MatrixXd gram_matrix(const SimplicialComplex& base, int k);

// Gradients of local barycentric coordinates of a top simplex, as their Gram matrix.
Eigen::MatrixXd barycentric_gradient_gram(const SimplicialComplex& x, int top);

}  // namespace simchar
