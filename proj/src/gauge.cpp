#include "simchar/gauge.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "simchar/error.hpp"

namespace simchar {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

ObservableSpec normalized(const ObservableSpec& o) {
  if (o.kind == ObservableKind::kWilson && o.charge == 0) return ObservableSpec{};
  return o;
}

void check_action(const ActionSpec& s) {
  if (!(s.coupling > 0.0)) fail(ErrorCode::kInvalidArgument, "coupling must be positive");
  if (s.kind == ActionKind::kCustom && !s.custom) fail(ErrorCode::kUnsupportedAction, "custom action without a function");
}

IntegralClass class_from(const CharacterModel& m, const Eigen::VectorXi& free, const IntegerVector& torsion) {
  IntegralClass c;
  for (int j = 0; j < free.size(); ++j) c.free.push_back(BigInt(free[j]));
  c.torsion = torsion;
  return m.reduce(c);
}

std::vector<IntegerVector> torsion_elements(const CharacterModel& m) {
  std::vector<IntegerVector> out{IntegerVector()};
  for (const BigInt& e : m.torsion_orders()) {
    std::vector<IntegerVector> next;
    const long long n = e.convert_to<long long>();
    for (const IntegerVector& t : out)
      for (long long k = 0; k < n; ++k) {
        IntegerVector u = t;
        u.push_back(BigInt(k));
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

IntegralClass subtract(const CharacterModel& m, IntegralClass a, const IntegralClass& b) {
  for (size_t j = 0; j < a.free.size(); ++j) a.free[j] -= b.free[j];
  for (size_t l = 0; l < a.torsion.size(); ++l) a.torsion[l] -= b.torsion[l];
  return m.reduce(a);
}

double log_det_spd(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) fail(ErrorCode::kNotPositiveDefinite, "matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

ObservableSpec wilson_observable(IntegerVector cycle, long long charge) {
  ObservableSpec o;
  o.kind = ObservableKind::kWilson;
  o.cycle = std::move(cycle);
  o.charge = charge;
  return o;
}

CharacterCoords add_characters(const CharacterModel& m, const CharacterCoords& a, const CharacterCoords& b) {
  CharacterCoords s = a;
  for (int j = 0; j < s.z.size(); ++j) s.z[j] = mod_one(a.z[j] + b.z[j]);
  s.tau = a.tau + b.tau;
  for (size_t j = 0; j < s.c.free.size(); ++j) s.c.free[j] += b.c.free[j];
  for (size_t l = 0; l < s.c.torsion.size(); ++l) s.c.torsion[l] += b.c.torsion[l];
  s.c = m.reduce(s.c);
  return s;
}

double maxwell_action(const CharacterModel& m, const CharacterCoords& ch, double coupling) {
  const int p = m.degree();
  if (p >= m.base()->dim()) return 0.0;
  const Eigen::VectorXd f = m.delta1(ch);
  return f.dot(m.hodge().gram(p + 1) * f) / (2.0 * coupling);
}

double action_value(const ActionSpec& s, const CharacterModel& m, const CharacterCoords& ch) {
  check_action(s);
  const CharacterCoords x = s.background ? add_characters(m, *s.background, ch) : ch;
  if (s.kind == ActionKind::kMaxwell) return maxwell_action(m, x, s.coupling);
  return s.custom(m, x);
}

std::complex<double> observable_value(const ObservableSpec& o, const CharacterModel& m, const CharacterCoords& ch) {
  switch (o.kind) {
    case ObservableKind::kConstant:
      return 1.0;
    case ObservableKind::kWilson:
      return std::exp(std::complex<double>(0.0, kTwoPi * static_cast<double>(o.charge) * m.evaluate(ch, o.cycle)));
    case ObservableKind::kCustom:
      if (!o.custom) fail(ErrorCode::kInvalidArgument, "custom observable without a function");
      return o.custom(m, ch);
  }
  return 0.0;
}

std::complex<double> ScaledComplex::value() const {
  if (mantissa == 0.0) return 0.0;
  return mantissa * std::exp(log_scale);
}

ScaledComplex scaled_sum(const std::vector<ScaledComplex>& terms) {
  ScaledComplex out;
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (t.mantissa != 0.0) top = std::max(top, t.log_scale);
  if (!std::isfinite(top)) return out;
  CompensatedComplexSum s;
  for (const auto& t : terms)
    if (t.mantissa != 0.0) s.add(t.mantissa * std::exp(t.log_scale - top));
  out.log_scale = top;
  out.mantissa = s.value();
  return out;
}

FluctuationModes fluctuation_modes(const CharacterModel& m) {
  FluctuationModes f;
  const int p = m.degree();
  const int n = m.base()->count(p);
  if (p >= m.base()->dim()) {
    f.vectors = Eigen::MatrixXd(n, 0);
    return f;
  }
  const CoboundarySpectrum& s = m.hodge().spectrum(p);
  f.eigenvalues = s.values;
  f.vectors = m.hodge().unwhiten(p, s.source);
  return f;
}

namespace {

// Closed-form Maxwell integral for constant and Wilson observables.
ScaledComplex maxwell_integral(const ActionSpec& action, const ObservableSpec& obs, const CharacterModel& m,
                               const FluctuationModes& modes, const IntegralClass& c) {
  const double g2 = action.coupling;
  CharacterCoords ch = m.class_preimage(c);
  if (action.background) {
    CharacterCoords b = *action.background;
    b.tau.setZero();
    ch = add_characters(m, b, ch);
  }
  ScaledComplex r;
  r.log_scale = -maxwell_action(m, ch, g2);
  for (int i = 0; i < modes.dimension(); ++i) r.log_scale += 0.5 * std::log(kTwoPi * g2 / modes.eigenvalues[i]);
  r.mantissa = 1.0;
  if (obs.kind == ObservableKind::kConstant) return r;

  const double q = static_cast<double>(obs.charge);
  const int p = m.degree();
  const Eigen::VectorXd alpha = to_double(obs.cycle);
  const Eigen::VectorXd pulled = m.embedding(p).transpose() * alpha;
  const Eigen::VectorXd periods = m.harmonic_basis_degree_p().transpose() * pulled;
  for (int j = 0; j < periods.size(); ++j)
    if (std::abs(std::round(q * periods[j])) > 0.5) {
      r.mantissa = 0.0;
      return r;
    }
  const Eigen::VectorXd ell = modes.vectors.transpose() * pulled;
  for (int i = 0; i < modes.dimension(); ++i)
    r.log_scale -= 2.0 * M_PI * M_PI * q * q * g2 * ell[i] * ell[i] / modes.eigenvalues[i];
  ch.z.setZero();
  r.mantissa = std::exp(std::complex<double>(0.0, kTwoPi * q * m.evaluate(ch, obs.cycle)));
  return r;
}

}  // namespace

ScaledComplex gaussian_integral_im_delta(const ActionSpec& action, const ObservableSpec& observable,
                                         const CharacterModel& m, const IntegralClass& c) {
  check_action(action);
  const ObservableSpec obs = normalized(observable);
  if (action.kind == ActionKind::kMaxwell && obs.kind != ObservableKind::kCustom)
    return maxwell_integral(action, obs, m, fluctuation_modes(m), c);
  ScaledComplex r;
  r.mantissa = numeric_im_delta_integral(action, obs, m, c, OracleOptions{});
  return r;
}

PrefactorBreakdown partition_prefactor(const CharacterModel& m) {
  const HodgeComplex& hc = m.hodge();
  const int p = m.degree();
  PrefactorBreakdown b;
  for (const BigInt& e : m.torsion_orders()) b.torsion_order *= e;
  const double log_tor = std::log(b.torsion_order.convert_to<double>());
  for (int r = 0; r <= p; ++r) {
    const Eigen::MatrixXd rho = harmonic_integral_basis(hc, r);
    const Eigen::MatrixXd h = h_matrix(hc, r, rho);
    b.betti.push_back(static_cast<int>(h.rows()));
    b.log_det_h.push_back(log_det_spd(h / kTwoPi));
    const RestrictedDeterminant co = restricted_determinant(hc, r, Subspace::kCoexact);
    b.log_det_coexact.push_back(co.log_value);
    b.modes.push_back(co.modes);
    b.log_det_exact_shifted.push_back(
        r + 1 <= hc.dim() ? restricted_determinant(hc, r + 1, Subspace::kExact).log_value : 0.0);
    const double sign = (p - r) % 2 == 0 ? 1.0 : -1.0;
    b.log_prefactor += sign * (0.5 * b.log_det_h.back() - log_tor);
    b.log_prefactor += -sign * 0.5 * co.log_value;
  }
  return b;
}

PartitionResult partition_function(const CharacterModel& m, const ActionSpec& action,
                                   const ObservableSpec& observable, const PartitionOptions& options) {
  check_action(action);
  const ObservableSpec obs = normalized(observable);
  if (obs.kind == ObservableKind::kWilson && static_cast<int>(obs.cycle.size()) != m.desc()->count(m.degree()))
    fail(ErrorCode::kDegreeMismatch, "Wilson chain has wrong degree");
  const int b = m.free_rank();
  const double g2 = action.coupling;

  IntegerMatrix u = IntegerMatrix::identity(b);
  if (options.harmonic_transform) {
    u = *options.harmonic_transform;
    if (u.rows() != b || u.cols() != b) fail(ErrorCode::kInvalidArgument, "harmonic transform has wrong size");
    const SnfResult s = smith_normal_form(u, false);
    if (s.rank != b || (b > 0 && s.diagonal[b - 1] != 1)) fail(ErrorCode::kInvalidArgument, "harmonic transform is not unimodular");
  }
  Eigen::MatrixXd ud(b, b);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) ud(i, j) = u(i, j).convert_to<double>();
  const Eigen::MatrixXd rho = m.harmonic_basis_next() * ud;
  const Eigen::MatrixXd h =
      b > 0 ? Eigen::MatrixXd(rho.transpose() * m.hodge().gram(m.degree() + 1) * rho) : Eigen::MatrixXd(0, 0);

  PartitionResult res;
  res.degree = m.degree();
  res.prefactor = partition_prefactor(m);

  // Free lattice window in the transformed basis.
  const double a = b > 0 ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().minCoeff() / (2.0 * g2) : 1.0;
  auto free_sum = [&](int radius) {
    CompensatedSum s;
    for (const Eigen::VectorXi& v : lattice_window(b, radius)) {
      const Eigen::VectorXd vd = v.cast<double>();
      s.add(std::exp(-vd.dot(h * vd) / (2.0 * g2)));
    }
    return s.value();
  };
  int radius = std::max(options.radius, 0);
  double sum = 0.0, tail = 0.0;
  if (b == 0) radius = 0;
  while (true) {
    sum = free_sum(radius);
    tail = lattice_tail_bound(b, a, radius);
    if (tail / sum < options.tolerance) break;
    if (radius >= options.max_radius)
      fail(ErrorCode::kTruncationInsufficient, "class sum tail exceeds tolerance at max radius");
    radius = std::min(options.max_radius, std::max(radius + 1, 2 * radius));
  }
  const std::vector<IntegerVector> torsion = torsion_elements(m);
  res.truncation.radius = radius;
  res.truncation.free_points = lattice_window_size(b, radius);
  res.truncation.torsion_points = static_cast<long long>(torsion.size());

  const FluctuationModes modes = fluctuation_modes(m);
  const bool closed_form = action.kind == ActionKind::kMaxwell && obs.kind != ObservableKind::kCustom;
  IntegralClass background;
  background.free.assign(b, BigInt(0));
  background.torsion.assign(m.torsion_orders().size(), BigInt(0));
  if (action.background) background = action.background->c;

  std::vector<ScaledComplex> terms;
  double log_fluct = 0.0;
  for (int i = 0; i < modes.dimension(); ++i) log_fluct += 0.5 * std::log(kTwoPi * g2 / modes.eigenvalues[i]);
  for (const Eigen::VectorXi& v : lattice_window(b, radius)) {
    const Eigen::VectorXi old = b > 0 ? Eigen::VectorXi((ud * v.cast<double>()).array().round().cast<int>())
                                      : Eigen::VectorXi(0);
    for (const IntegerVector& t : torsion) {
      ClassTerm term;
      term.c = class_from(m, old, t);
      const IntegralClass shifted = subtract(m, term.c, background);
      const ScaledComplex x = closed_form ? maxwell_integral(action, obs, m, modes, shifted)
                                          : gaussian_integral_im_delta(action, obs, m, shifted);
      term.log_scale = x.log_scale;
      term.mantissa = x.mantissa;
      terms.push_back(x);
      res.class_terms.push_back(std::move(term));
    }
  }
  if (closed_form && obs.kind == ObservableKind::kConstant) {
    // Theta value of the free lattice times the torsion count.
    Eigen::MatrixXcd arg = std::complex<double>(0.0, 1.0) * (h / (kTwoPi * g2)).cast<std::complex<double>>();
    const std::complex<double> th = b > 0 ? theta_window(arg, radius) : std::complex<double>(1.0);
    res.class_sum.log_scale = log_fluct;
    res.class_sum.mantissa = th * static_cast<double>(torsion.size());
  } else {
    res.class_sum = scaled_sum(terms);
  }
  res.truncation.tail_bound = tail * static_cast<double>(torsion.size()) * std::exp(log_fluct);
  res.truncation.tail_relative = tail / sum;

  const double log_total = res.prefactor.log_prefactor + res.class_sum.log_scale;
  const std::complex<double> mant = res.class_sum.mantissa;
  res.value = mant.real() == 0.0 ? 0.0 : mant.real() * std::exp(log_total);
  res.imaginary = mant.imag() == 0.0 ? 0.0 : mant.imag() * std::exp(log_total);
  res.log_abs_value = mant.real() == 0.0 ? -std::numeric_limits<double>::infinity()
                                         : log_total + std::log(std::abs(mant.real()));
  return res;
}

namespace {

std::vector<std::string> class_strings(const IntegralClass& c) {
  std::vector<std::string> out;
  for (const auto& x : c.free) out.push_back(x.str());
  for (const auto& x : c.torsion) out.push_back("t" + x.str());
  return out;
}

}  // namespace

std::string to_json(const PartitionResult& r) {
  nlohmann::ordered_json j;
  j["degree"] = r.degree;
  j["value"] = r.value;
  j["imaginary"] = r.imaginary;
  j["log_abs_value"] = r.log_abs_value;
  nlohmann::ordered_json pf;
  pf["log_det_h"] = r.prefactor.log_det_h;
  pf["betti"] = r.prefactor.betti;
  pf["log_det_coexact"] = r.prefactor.log_det_coexact;
  pf["log_det_exact_shifted"] = r.prefactor.log_det_exact_shifted;
  pf["modes"] = r.prefactor.modes;
  pf["torsion_order"] = r.prefactor.torsion_order.str();
  pf["log_prefactor"] = r.prefactor.log_prefactor;
  j["prefactor_breakdown"] = pf;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& t : r.class_terms) {
    nlohmann::ordered_json x;
    x["class"] = class_strings(t.c);
    x["log_scale"] = t.log_scale;
    x["re"] = t.mantissa.real();
    x["im"] = t.mantissa.imag();
    terms.push_back(x);
  }
  j["class_sum_terms"] = terms;
  nlohmann::ordered_json tr;
  tr["radius"] = r.truncation.radius;
  tr["free_points"] = r.truncation.free_points;
  tr["torsion_points"] = r.truncation.torsion_points;
  tr["tail_bound"] = r.truncation.tail_bound;
  tr["tail_relative"] = r.truncation.tail_relative;
  j["truncation"] = tr;
  if (r.oracle_value) j["oracle_value"] = *r.oracle_value;
  j["conventions"] = {{"prefactor_product", "r = 0..p"},
                      {"background_lift", "harmonic"},
                      {"observable_value", "real part, imaginary part reported"}};
  return j.dump();
}

}  // namespace simchar
