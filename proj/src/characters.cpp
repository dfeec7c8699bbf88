#include "simchar/characters.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/QR>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <cmath>

#include "simchar/error.hpp"
#include "simchar/whitney.hpp"

namespace simchar {

namespace {

constexpr double kSparkTolerance = 1e-8;
constexpr double kPeriodTolerance = 1e-6;
constexpr double kDenseLiftLimit = 4e6;

IntegerMatrix integer_coboundary(const SimplicialComplex& x, int k) {
  return IntegerMatrix::from_incidence(x.boundary(k + 1)).transpose();
}

double dot(const Eigen::VectorXd& a, const IntegerVector& b) {
  double s = 0.0;
  for (size_t i = 0; i < b.size(); ++i)
    if (b[i] != 0) s += a[i] * b[i].convert_to<double>();
  return s;
}

IntegerVector add(IntegerVector a, const IntegerVector& b, const BigInt& scale = 1) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
  return a;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

double mod_one(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

double circle_distance(double x, double y) {
  const double d = mod_one(x - y);
  return std::min(d, 1.0 - d);
}

CharacterModel::CharacterModel(ComplexPtr base, ComplexPtr desc, int degree, HodgeOptions options)
    : base_(std::move(base)), desc_(std::move(desc)), p_(degree), hodge_(base_, options) {
  const int n = base_->dim();
  if (p_ < 0 || p_ > n) fail(ErrorCode::kDegreeOutOfRange, "character degree out of range");
  if (!descent_map(*desc_, *base_)) fail(ErrorCode::kNoParentLink, "subdivision does not descend from base");
  WhitneyIntegrator in(*desc_, *base_);
  w_.resize(n + 1);
  for (int k = p_; k <= std::min(p_ + 1, n); ++k) w_[k] = in.embedding(k);
  snf_cache_.resize(n + 1);

  coexact_ = hodge_.coexact_basis(p_);
  const IntegralBasis ib = integral_basis(*base_, p_);
  cocycles_p_ = ib.cocycles;
  rho_p_ = harmonic_integral_basis(hodge_, p_, ib.cocycles);
  const IncidenceMatrix sd_p = subdivision_chain_map(*desc_, *base_, p_);
  pull_p_ = simplicial_pullback(*desc_, *base_, p_);
  std::vector<IntegerVector> cyc;
  for (int j = 0; j < ib.betti(); ++j) cyc.push_back(simchar::apply(sd_p, ib.cycles.column(j)));
  cycles_p_ = IntegerMatrix::from_columns(desc_->count(p_), cyc);

  if (p_ == n) {
    rho_next_.resize(0, 0);
    return;
  }
  const IntegralBasis next = integral_basis(*base_, p_ + 1);
  cycles_next_ = next.cycles;
  cocycles_next_ = next.cocycles;
  rho_next_ = harmonic_integral_basis(hodge_, p_ + 1, next.cocycles);
  pull_next_ = simplicial_pullback(*desc_, *base_, p_ + 1);
  sd_next_ = subdivision_chain_map(*desc_, *base_, p_ + 1);

  const HomologyTable table = homology_table(*base_);
  if (!table.torsion[p_].empty()) {
    const CohomologySummary coh = cohomology(*base_, p_ + 1);
    torsion_orders_ = coh.torsion;
    torsion_cocycles_ = coh.torsion_cocycles;
    torsion_cochains_ = coh.torsion_cochains;
    torsion_functionals_ = coh.torsion_functionals;
  }

  lifts_.resize(desc_->count(p_), free_rank());
  if (free_rank() == 0) return;
  std::vector<Eigen::VectorXd> rhs;
  for (int j = 0; j < free_rank(); ++j)
    rhs.push_back(w_[p_ + 1] * rho_next_.col(j) - to_double(simchar::apply(pull_next_, cocycles_next_.column(j))));
  const Eigen::SparseMatrix<double> ds = desc_->coboundary_sparse(p_);
  if (static_cast<double>(ds.rows()) * ds.cols() <= kDenseLiftLimit) {
    const Eigen::MatrixXd d(ds);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(d);
    for (int j = 0; j < free_rank(); ++j) lifts_.col(j) = cod.solve(rhs[j]);
  } else {
    // Unpreconditioned CGLS from zero stays in im d^T and reaches the min-norm solution.
    Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<double>, Eigen::IdentityPreconditioner> cg;
    cg.setTolerance(1e-15);
    cg.setMaxIterations(20 * static_cast<int>(ds.cols()));
    cg.compute(ds);
    for (int j = 0; j < free_rank(); ++j) lifts_.col(j) = cg.solve(rhs[j]);
  }
  for (int j = 0; j < free_rank(); ++j)
    lift_residual_ = std::max(lift_residual_, max_abs(ds * lifts_.col(j) - rhs[j]));
}

const Eigen::SparseMatrix<double>& CharacterModel::embedding(int k) const {
  if (k < p_ || k > std::min(p_ + 1, base_->dim())) fail(ErrorCode::kDegreeOutOfRange, "embedding not cached");
  return w_[k];
}

const SnfResult& CharacterModel::desc_snf(int k) const {
  if (!snf_cache_[k]) snf_cache_[k] = std::make_unique<SnfResult>(smith_normal_form(integer_coboundary(*desc_, k)));
  return *snf_cache_[k];
}

IntegralClass CharacterModel::reduce(IntegralClass c) const {
  for (size_t l = 0; l < c.torsion.size(); ++l) c.torsion[l] = mod_positive(c.torsion[l], torsion_orders_[l]);
  return c;
}

IntegerVector CharacterModel::class_cocycle(const IntegralClass& c) const {
  if (p_ == base_->dim()) return {};
  IntegerVector base_cocycle(base_->count(p_ + 1), BigInt(0));
  for (int j = 0; j < free_rank(); ++j) base_cocycle = add(base_cocycle, cocycles_next_.column(j), c.free[j]);
  for (size_t l = 0; l < torsion_orders_.size(); ++l)
    base_cocycle = add(base_cocycle, torsion_cocycles_.column(static_cast<int>(l)), c.torsion[l]);
  return simchar::apply(pull_next_, base_cocycle);
}

Eigen::VectorXd CharacterModel::class_lift(const IntegralClass& c) const {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(desc_->count(p_));
  for (int j = 0; j < free_rank(); ++j) t += c.free[j].convert_to<double>() * lifts_.col(j);
  for (size_t l = 0; l < torsion_orders_.size(); ++l) {
    const Eigen::VectorXd mu = to_double(simchar::apply(pull_p_, torsion_cochains_.column(static_cast<int>(l))));
    t -= (c.torsion[l].convert_to<double>() / torsion_orders_[l].convert_to<double>()) * mu;
  }
  return t;
}

CharacterCoords CharacterModel::zero() const {
  CharacterCoords ch;
  ch.degree = p_;
  ch.z = Eigen::VectorXd::Zero(torus_dimension());
  ch.tau = Eigen::VectorXd::Zero(base_->count(p_));
  ch.c.free.assign(free_rank(), BigInt(0));
  ch.c.torsion.assign(torsion_orders_.size(), BigInt(0));
  return ch;
}

CharacterCoords CharacterModel::random_character(std::mt19937_64& rng, int max_class) const {
  CharacterCoords ch = zero();
  boost::random::uniform_01<double> u;
  boost::random::normal_distribution<double> g;
  boost::random::uniform_int_distribution<int> k(-max_class, max_class);
  for (int j = 0; j < ch.z.size(); ++j) ch.z[j] = u(rng);
  Eigen::VectorXd coeff(coexact_dimension());
  for (int j = 0; j < coeff.size(); ++j) coeff[j] = g(rng);
  ch.tau = coexact_ * coeff;
  for (auto& f : ch.c.free) f = k(rng);
  for (size_t l = 0; l < torsion_orders_.size(); ++l) {
    std::uniform_int_distribution<long long> t(0, torsion_orders_[l].convert_to<long long>() - 1);
    ch.c.torsion[l] = t(rng);
  }
  return ch;
}

CharacterCoords CharacterModel::class_preimage(const IntegralClass& c) const {
  CharacterCoords ch = zero();
  ch.c = reduce(c);
  return ch;
}

CharacterCoords CharacterModel::coexact_character(const Eigen::VectorXd& x) const {
  CharacterCoords ch = zero();
  ch.tau = x;
  return ch;
}

Eigen::VectorXd CharacterModel::delta1(const CharacterCoords& ch) const {
  if (p_ == base_->dim()) return Eigen::VectorXd(0);
  Eigen::VectorXd w = hodge_.coboundary(p_) * ch.tau;
  for (int j = 0; j < free_rank(); ++j) w += ch.c.free[j].convert_to<double>() * rho_next_.col(j);
  return w;
}

IntegralClass CharacterModel::delta2(const CharacterCoords& ch) const { return reduce(ch.c); }

double CharacterModel::evaluate(const CharacterCoords& ch, const IntegerVector& cycle) const {
  if (static_cast<int>(cycle.size()) != desc_->count(p_)) fail(ErrorCode::kDegreeMismatch, "chain has wrong degree");
  if (p_ > 0 && !is_zero(simchar::apply(desc_->boundary(p_), cycle)))
    fail(ErrorCode::kNotACycle, "chain is not a cycle");
  Eigen::VectorXd a = w_[p_] * (rho_p_ * ch.z + ch.tau);
  for (int j = 0; j < free_rank(); ++j) a += ch.c.free[j].convert_to<double>() * lifts_.col(j);
  double value = mod_one(dot(a, cycle));
  BigRational torsion_part(0);
  for (size_t l = 0; l < torsion_orders_.size(); ++l) {
    const IntegerVector mu = simchar::apply(pull_p_, torsion_cochains_.column(static_cast<int>(l)));
    torsion_part -= BigRational(ch.c.torsion[l] * simchar::dot(mu, cycle), torsion_orders_[l]);
  }
  const BigInt whole = numerator(torsion_part) / denominator(torsion_part);
  torsion_part -= BigRational(whole);
  return mod_one(value + torsion_part.convert_to<double>());
}

double CharacterModel::field_integral(const CharacterCoords& ch, const IntegerVector& chain) const {
  if (p_ == base_->dim()) return 0.0;
  return dot(Eigen::VectorXd(w_[p_ + 1] * delta1(ch)), chain);
}

SparkTriple CharacterModel::to_spark(const CharacterCoords& ch) const {
  SparkTriple s;
  s.degree = p_;
  s.a = w_[p_] * (rho_p_ * ch.z + ch.tau) + class_lift(ch.c);
  s.e = p_ < base_->dim() ? Eigen::VectorXd(w_[p_ + 1] * delta1(ch)) : Eigen::VectorXd(0);
  s.r = class_cocycle(ch.c);
  return s;
}

double CharacterModel::spark_residual(const SparkTriple& s) const {
  if (p_ == base_->dim()) return 0.0;
  const Eigen::VectorXd r = to_double(s.r);
  double res = max_abs(desc_->coboundary_sparse(p_) * s.a - (s.e - r));
  if (p_ + 1 < base_->dim()) res = std::max(res, max_abs(desc_->coboundary_sparse(p_ + 1) * r));
  return res;
}

IntegralClass CharacterModel::class_of(const IntegerVector& cocycle) const {
  IntegralClass c;
  c.torsion.assign(torsion_orders_.size(), BigInt(0));
  if (p_ == base_->dim()) return c;
  const IntegerVector down = apply_transpose(sd_next_, cocycle);
  IntegerVector rest = down;
  for (int j = 0; j < free_rank(); ++j) {
    c.free.push_back(simchar::dot(down, cycles_next_.column(j)));
    rest = add(rest, cocycles_next_.column(j), -c.free.back());
  }
  for (size_t l = 0; l < torsion_orders_.size(); ++l)
    c.torsion[l] = simchar::dot(torsion_functionals_.column(static_cast<int>(l)), rest);
  return reduce(c);
}

Eigen::VectorXd CharacterModel::coexact_solve(const Eigen::VectorXd& exact) const {
  const CoboundarySpectrum& s = hodge_.spectrum(p_);
  const Eigen::VectorXd rhs = hodge_.whiten(p_ + 1, exact);
  const Eigen::VectorXd y = s.source * (s.values.cwiseSqrt().cwiseInverse().asDiagonal() * (s.target.transpose() * rhs));
  return hodge_.unwhiten(p_, y);
}

CharacterCoords CharacterModel::from_spark(const SparkTriple& s) const {
  if (s.degree != p_ || s.a.size() != desc_->count(p_)) fail(ErrorCode::kDegreeMismatch, "spark degree mismatch");
  const double scale = std::max(1.0, max_abs(s.e));
  if (spark_residual(s) > kSparkTolerance * scale) fail(ErrorCode::kNotASpark, "spark equation violated");
  CharacterCoords ch = zero();
  Eigen::VectorXd a = s.a;
  if (p_ < base_->dim()) {
    ch.c = class_of(s.r);
    const IntegerVector u = class_cocycle(ch.c);
    IntegerVector diff = s.r;
    for (size_t i = 0; i < diff.size(); ++i) diff[i] -= u[i];
    const auto y = solve_integer(desc_snf(p_), diff);
    if (!y) fail(ErrorCode::kExactnessViolation, "cocycle differs from its class representative by a non-coboundary");
    a += to_double(*y);
    const Eigen::MatrixXd wd = Eigen::MatrixXd(w_[p_ + 1]);
    const Eigen::VectorXd e_base = wd.colPivHouseholderQr().solve(s.e);
    if (max_abs(wd * e_base - s.e) > kSparkTolerance * scale)
      fail(ErrorCode::kNotASpark, "field strength is not in the Whitney subcomplex");
    Eigen::VectorXd exact = e_base;
    for (int j = 0; j < free_rank(); ++j) exact -= ch.c.free[j].convert_to<double>() * rho_next_.col(j);
    ch.tau = coexact_solve(exact);
    if (max_abs(hodge_.coboundary(p_) * ch.tau - exact) > kSparkTolerance * scale)
      fail(ErrorCode::kNotASpark, "field strength is not closed with the class periods");
  }
  const Eigen::VectorXd x = a - class_lift(ch.c) - w_[p_] * ch.tau;
  for (int j = 0; j < torus_dimension(); ++j) ch.z[j] = mod_one(dot(x, cycles_p_.column(j)));
  return ch;
}

std::optional<EquivalenceCertificate> CharacterModel::equivalence(const SparkTriple& x, const SparkTriple& y) const {
  if (x.degree != y.degree || x.degree != p_) return std::nullopt;
  EquivalenceCertificate cert;
  cert.s.assign(desc_->count(p_), BigInt(0));
  if (p_ < base_->dim()) {
    IntegerVector target = y.r;
    for (size_t i = 0; i < target.size(); ++i) target[i] -= x.r[i];
    auto s0 = solve_integer(desc_snf(p_), target);
    if (!s0) return std::nullopt;
    cert.s = *s0;
  }
  Eigen::VectorXd v = x.a - y.a - to_double(cert.s);
  for (int j = 0; j < torus_dimension(); ++j) {
    const double period = dot(v, cycles_p_.column(j));
    const double m = std::round(period);
    if (std::abs(period - m) > kPeriodTolerance) return std::nullopt;
    const IntegerVector phi = simchar::apply(pull_p_, cocycles_p_.column(j));
    cert.s = add(cert.s, phi, BigInt(static_cast<long long>(m)));
    v -= m * to_double(phi);
  }
  double res = std::max(max_abs(x.e - y.e), 0.0);
  if (p_ > 0) {
    const Eigen::MatrixXd d = desc_->coboundary_dense(p_ - 1);
    cert.b = d.completeOrthogonalDecomposition().solve(v);
    res = std::max(res, max_abs(d * cert.b - v));
  } else {
    cert.b.resize(0);
    res = std::max(res, max_abs(v));
  }
  // r - r' = -ds
  if (p_ < base_->dim()) {
    const IntegerVector ds = simchar::apply(desc_->boundary(p_ + 1).transpose(), cert.s);
    for (size_t i = 0; i < ds.size(); ++i)
      if (x.r[i] - y.r[i] != -ds[i]) return std::nullopt;
  }
  cert.residual = res;
  if (res > kPeriodTolerance) return std::nullopt;
  return cert;
}

bool CharacterModel::coords_equal(const CharacterCoords& a, const CharacterCoords& b, double tol) const {
  if (a.degree != b.degree || a.z.size() != b.z.size()) return false;
  for (int j = 0; j < a.z.size(); ++j)
    if (circle_distance(a.z[j], b.z[j]) > tol) return false;
  if (max_abs(a.tau - b.tau) > tol) return false;
  return reduce(a.c) == reduce(b.c);
}

}  // namespace simchar
