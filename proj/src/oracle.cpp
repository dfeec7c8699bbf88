#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>

#include "simchar/error.hpp"
#include "simchar/gauge.hpp"

namespace simchar {

namespace {

struct Modes {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;
};

// Coexact eigenpairs of the degree-p Laplacian read from the frame.
Modes frame_modes(const HodgeFrame& f) {
  std::vector<int> keep;
  for (int j = 0; j < f.eigenvalues.size(); ++j) {
    if (f.eigenvalues[j] <= 0.0) continue;
    const Eigen::VectorXd v = f.eigenvectors.col(j);
    const double norm = std::sqrt(v.dot(f.gram * v));
    if ((f.projector_coexact * v - v).norm() <= 1e-8 * std::max(1.0, v.norm()) && norm > 0.0) keep.push_back(j);
  }
  Modes m;
  m.eigenvalues.resize(static_cast<int>(keep.size()));
  m.vectors.resize(f.gram.rows(), static_cast<int>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    m.eigenvalues[static_cast<int>(i)] = f.eigenvalues[keep[i]];
    m.vectors.col(static_cast<int>(i)) = f.eigenvectors.col(keep[i]);
  }
  return m;
}

Modes model_modes(const CharacterModel& m) {
  if (m.degree() >= m.base()->dim()) {
    Modes x;
    x.vectors = Eigen::MatrixXd(m.base()->count(m.degree()), 0);
    return x;
  }
  return frame_modes(build_frame(m.hodge(), m.degree()));
}

class Integrand {
 public:
  Integrand(const ActionSpec& a, const ObservableSpec& o, const CharacterModel& m, const Modes& modes,
            const IntegralClass& c, const ZeroModeOptions& zm)
      : action_(a), obs_(o), m_(m), modes_(modes), zm_(zm) {
    base_ = m.zero();
    base_.c = c;
    // Translate the fluctuation variable by the background's coexact part.
    offset_ = Eigen::VectorXd::Zero(modes.vectors.cols());
    if (a.background && modes.vectors.cols() > 0)
      offset_ = modes.vectors.transpose() * (m.hodge().gram(m.degree()) * a.background->tau);
  }

  std::complex<double> at(const Eigen::VectorXd& z, const Eigen::VectorXd& y) const {
    CharacterCoords ch = base_;
    ch.z = z;
    ch.tau = modes_.vectors * (y - offset_);
    const CharacterCoords x = action_.background ? add_characters(m_, *action_.background, ch) : ch;
    const double s = action_.kind == ActionKind::kMaxwell ? maxwell_action(m_, x, action_.coupling) : action_.custom(m_, x);
    return std::exp(-s) * observable_value(obs_, m_, x);
  }

  // Torus zero mode at the fluctuation point y.
  std::complex<double> operator()(const Eigen::VectorXd& y) const {
    return fourier_zero_mode([&](const Eigen::VectorXd& z) { return at(z, y); }, m_.torus_dimension(), zm_);
  }

  int dimension() const { return static_cast<int>(modes_.eigenvalues.size()); }
  double sigma(int i) const { return std::sqrt(action_.coupling / modes_.eigenvalues[i]); }

 private:
  const ActionSpec& action_;
  const ObservableSpec& obs_;
  const CharacterModel& m_;
  const Modes& modes_;
  CharacterCoords base_;
  Eigen::VectorXd offset_;
  ZeroModeOptions zm_;
};

bool close(std::complex<double> a, std::complex<double> b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) || a == b;
}

// Gauss-Hermite over the axes in `axes`, others held at zero, with node doubling.
std::complex<double> hermite_rule(const Integrand& f, const std::vector<int>& axes, const OracleOptions& o) {
  const int k = static_cast<int>(axes.size());
  auto apply_rule = [&](int n) {
    const GaussHermiteRule g = gauss_hermite(n);
    CompensatedComplexSum s;
    CompensatedSum l1;
    Eigen::VectorXi idx = Eigen::VectorXi::Zero(k);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(f.dimension());
    while (true) {
      double w = 1.0;
      for (int a = 0; a < k; ++a) {
        const double x = g.nodes[idx[a]];
        y[axes[a]] = std::sqrt(2.0) * f.sigma(axes[a]) * x;
        w *= g.weights[idx[a]] * std::exp(x * x) * std::sqrt(2.0) * f.sigma(axes[a]);
      }
      const std::complex<double> v = w * f(y);
      s.add(v);
      l1.add(std::abs(v));
      int a = k - 1;
      while (a >= 0 && idx[a] == n - 1) idx[a--] = 0;
      if (a < 0) break;
      ++idx[a];
    }
    return std::make_pair(s.value(), l1.value());
  };
  int n = o.nodes;
  std::complex<double> prev = apply_rule(n).first;
  while (2 * n <= o.max_nodes && std::pow(2.0 * n, k) <= (1 << 22)) {
    n *= 2;
    const auto [next, scale] = apply_rule(n);
    // Cancellation limits accuracy to a fraction of the L1 size.
    if (close(prev, next, o.tolerance) || std::abs(next - prev) <= 1e-13 * scale) return next;
    prev = next;
  }
  fail(ErrorCode::kNonConvergent, "Gauss-Hermite rule did not converge");
}

std::complex<double> quadrature(const Integrand& f, const OracleOptions& o, std::uint64_t seed, double* separability) {
  const int m = f.dimension();
  if (m == 0) return f(Eigen::VectorXd());
  if (m <= o.tensor_dimension) {
    std::vector<int> axes(m);
    for (int i = 0; i < m; ++i) axes[i] = i;
    return hermite_rule(f, axes, o);
  }
  // Product of one-dimensional rules along the eigen axes.
  const std::complex<double> f0 = f(Eigen::VectorXd::Zero(m));
  if (f0 == 0.0) return 0.0;
  std::complex<double> value = f0;
  for (int i = 0; i < m; ++i) value *= hermite_rule(f, {i}, o) / f0;
  boost::random::mt19937_64 rng(seed);
  boost::random::normal_distribution<double> normal;
  for (int t = 0; t < 4; ++t) {
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) y[i] = f.sigma(i) * normal(rng);
    std::complex<double> product = f0;
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      e[i] = y[i];
      product *= f(e) / f0;
    }
    const double defect = std::abs(f(y) - product) / std::abs(f0);
    if (separability) *separability = std::max(*separability, defect);
  }
  return value;
}

std::complex<double> monte_carlo(const Integrand& f, int torus_dim, long long samples, double inflation,
                                 std::uint64_t seed, double* standard_error) {
  const int m = f.dimension();
  boost::random::mt19937_64 rng(seed);
  boost::random::normal_distribution<double> normal;
  boost::random::uniform_01<double> uniform;
  double log_norm = 0.0;
  Eigen::VectorXd s(m);
  for (int i = 0; i < m; ++i) {
    s[i] = std::sqrt(inflation) * f.sigma(i);
    log_norm += std::log(std::sqrt(2.0 * M_PI) * s[i]);
  }
  CompensatedComplexSum sum;
  CompensatedSum sum_sq;
  Eigen::VectorXd y(m), z(torus_dim);
  for (long long k = 0; k < samples; ++k) {
    double quad = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = normal(rng);
      y[i] = s[i] * x;
      quad += 0.5 * x * x;
    }
    for (int j = 0; j < torus_dim; ++j) z[j] = uniform(rng);
    const std::complex<double> w = f.at(z, y) * std::exp(log_norm + quad);
    sum.add(w);
    sum_sq.add(std::norm(w));
  }
  const double n = static_cast<double>(samples);
  const std::complex<double> mean = sum.value() / n;
  const double var = std::max(0.0, sum_sq.value() / n - std::norm(mean));
  if (standard_error) *standard_error = std::sqrt(var / n);
  return mean;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::complex<double> integrate_class(const ActionSpec& action, const ObservableSpec& obs, const CharacterModel& m,
                                     const Modes& modes, const IntegralClass& c, const OracleOptions& o,
                                     long long samples, std::uint64_t seed, double* variance, double* separability) {
  const Integrand f(action, obs, m, modes, c, o.zero_mode);
  if (o.method == OracleMethod::kQuadrature) return quadrature(f, o, seed, separability);
  double se = 0.0;
  const std::complex<double> v = monte_carlo(f, m.torus_dimension(), samples, o.inflation, seed, &se);
  if (variance) *variance += se * se;
  return v;
}

}  // namespace

std::complex<double> numeric_im_delta_integral(const ActionSpec& action, const ObservableSpec& observable,
                                               const CharacterModel& m, const IntegralClass& c,
                                               const OracleOptions& options, double* standard_error) {
  const Modes modes = model_modes(m);
  if (modes.eigenvalues.size() > options.max_dimension) fail(ErrorCode::kTooLarge, "fluctuation space too large");
  double var = 0.0, sep = 0.0;
  const std::complex<double> v =
      integrate_class(action, observable, m, modes, c, options, options.samples, options.seed, &var, &sep);
  if (standard_error) *standard_error = std::sqrt(var);
  return v;
}

OracleResult partition_oracle(const CharacterModel& m, const ActionSpec& action, const ObservableSpec& observable,
                              const OracleOptions& options) {
  if (!(action.coupling > 0.0)) fail(ErrorCode::kInvalidArgument, "coupling must be positive");
  if (action.kind == ActionKind::kCustom && !action.custom)
    fail(ErrorCode::kUnsupportedAction, "custom action without a function");
  const int p = m.degree();
  const HodgeComplex& hc = m.hodge();
  const Modes modes = model_modes(m);
  OracleResult res;
  res.dimension = static_cast<int>(modes.eigenvalues.size());
  if (res.dimension > options.max_dimension) fail(ErrorCode::kTooLarge, "fluctuation space too large for the oracle");

  const CohomologySummary top = cohomology(*m.base(), std::min(p + 1, m.base()->dim()));
  BigInt tor = 1;
  if (p + 1 <= m.base()->dim())
    for (const BigInt& e : top.torsion) tor *= e;
  const int b = m.free_rank();
  auto window_size = [&](int radius) { return lattice_window_size(b, radius) * tor.convert_to<long long>(); };
  if (window_size(options.radius) > options.max_window) fail(ErrorCode::kTooLarge, "class window too large for the oracle");

  // Prefactor as a direct product over degrees.
  double log_pre = 0.0;
  for (int r = 0; r <= p; ++r) {
    const HodgeFrame f = build_frame(hc, r);
    const double det_h = f.h_matrix.rows() ? (f.h_matrix / (2.0 * M_PI)).determinant() : 1.0;
    double log_det_lap = 0.0;
    if (r < m.base()->dim()) {
      const Modes mr = frame_modes(f);
      for (int i = 0; i < mr.eigenvalues.size(); ++i) log_det_lap += std::log(mr.eigenvalues[i]);
    }
    const double sign = (p - r) % 2 == 0 ? 1.0 : -1.0;
    log_pre += sign * (0.5 * std::log(det_h) - std::log(tor.convert_to<double>()));
    log_pre -= sign * 0.5 * log_det_lap;
  }
  res.log_prefactor = log_pre;

  IntegralClass shift;
  shift.free.assign(b, BigInt(0));
  shift.torsion.assign(m.torsion_orders().size(), BigInt(0));
  if (action.background) shift = action.background->c;
  std::vector<IntegerVector> tors{IntegerVector()};
  for (const BigInt& e : m.torsion_orders()) {
    std::vector<IntegerVector> next;
    for (const auto& t : tors)
      for (BigInt k = 0; k < e; ++k) {
        auto u = t;
        u.push_back(k);
        next.push_back(u);
      }
    tors = next;
  }
  // Classes of the window, or only of its outer shell.
  auto window = [&](int radius, bool shell) {
    std::vector<IntegralClass> out;
    for (const Eigen::VectorXi& v : lattice_window(b, radius)) {
      if (shell && (b == 0 || v.cwiseAbs().maxCoeff() != radius)) continue;
      IntegralClass c;
      for (int j = 0; j < b; ++j) c.free.push_back(BigInt(v[j]) - shift.free[j]);
      for (const auto& t : tors) {
        c.torsion = t;
        for (size_t l = 0; l < t.size(); ++l) c.torsion[l] -= shift.torsion[l];
        out.push_back(m.reduce(c));
      }
    }
    return out;
  };
  // Grow the window until its outer shell is negligible at the Gaussian centre.
  const Eigen::VectorXd centre = Eigen::VectorXd::Zero(res.dimension);
  auto centre_weight = [&](const std::vector<IntegralClass>& cs) {
    CompensatedSum w;
    for (const auto& c : cs) w.add(std::abs(Integrand(action, observable, m, modes, c, options.zero_mode)(centre)));
    return w.value();
  };
  int radius = options.radius;
  double inside = centre_weight(window(radius, false));
  while (b > 0) {
    const double outer = centre_weight(window(radius, true));
    if (outer <= 1e-3 * options.tolerance * inside) break;
    if (window_size(radius + 1) > options.max_window) fail(ErrorCode::kTooLarge, "class window too large for the oracle");
    ++radius;
    inside += centre_weight(window(radius, true));
  }
  const std::vector<IntegralClass> classes = window(radius, false);
  res.classes = static_cast<long long>(classes.size());
  const long long per_class = std::max<long long>(1, options.samples / static_cast<long long>(classes.size()));
  CompensatedComplexSum total;
  double var = 0.0;
  for (size_t k = 0; k < classes.size(); ++k)
    total.add(integrate_class(action, observable, m, modes, classes[k], options, per_class, mix(options.seed, k), &var,
                              &res.separability_residual));
  const double scale = std::exp(log_pre);
  res.value = total.value().real() * scale;
  res.imaginary = total.value().imag() * scale;
  res.standard_error = std::sqrt(var) * scale;
  return res;
}

}  // namespace simchar
