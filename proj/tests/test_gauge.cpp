#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "simchar/catalog.hpp"
#include "simchar/error.hpp"
#include "simchar/gauge.hpp"
#include "json.hpp"

using namespace simchar;
using Catch::Approx;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

Eigen::MatrixXcd scalar(std::complex<double> a) { return Eigen::MatrixXcd::Constant(1, 1, a); }

double direct_theta_1(double t, int radius) {
  double s = 0.0;
  for (int v = -radius; v <= radius; ++v) s += std::exp(-M_PI * t * v * v);
  return s;
}

struct Setup {
  ComplexPtr base;
  ComplexPtr desc;
};

Setup setup(ComplexPtr base, std::uint64_t seed = 3) { return {base, perturbed_subdivide(base, seed, 0.2)}; }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("theta of a scalar argument") {
  const ThetaResult r = theta(scalar({0.0, 1.0}));
  CHECK(std::abs(r.value.real() - direct_theta_1(1.0, 8)) <= 1e-10);
  CHECK(r.value.real() == Approx(1.0864348112133080).epsilon(1e-15));
  CHECK(std::abs(r.value.imag()) <= 1e-16);
  CHECK(r.tail_bound < 1e-12);
  CHECK(std::abs(theta(scalar({0.0, 50.0})).value - 1.0) <= 1e-60);
  // Jacobi inversion theta(it) = t^(-1/2) theta(i/t).
  for (double t : {0.05, 0.3, 2.0}) {
    const double lhs = theta(scalar({0.0, t})).value.real();
    const double rhs = theta(scalar({0.0, 1.0 / t})).value.real() / std::sqrt(t);
    CHECK(rel(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("theta with a real part") {
  const std::complex<double> a(0.5, 0.8);
  std::complex<double> direct = 0.0;
  for (int v = -40; v <= 40; ++v) direct += std::exp(std::complex<double>(0.0, M_PI) * a * double(v * v));
  CHECK(std::abs(theta(scalar(a)).value - direct) <= 1e-13);
}

TEST_CASE("theta factorizes over blocks") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(0, 0) = {0.2, 1.1};
  a.block(1, 1, 2, 2) << std::complex<double>(0.1, 0.9), std::complex<double>(0.0, 0.3),
      std::complex<double>(0.0, 0.3), std::complex<double>(-0.4, 1.4);
  const std::complex<double> whole = theta(a).value;
  const std::complex<double> parts = theta(a.block(0, 0, 1, 1)).value * theta(a.block(1, 1, 2, 2)).value;
  CHECK(std::abs(whole - parts) <= 1e-12);
}

TEST_CASE("theta tail bounds dominate the truncation error") {
  for (double t : {0.1, 0.4, 1.0}) {
    const double lam = M_PI * t;
    for (int r = 0; r <= 6; ++r) {
      const double diff = std::abs(theta_window(scalar({0.0, t}), r + 2) - theta_window(scalar({0.0, t}), r));
      CHECK(diff <= lattice_tail_bound(1, lam, r) + 1e-15);
    }
  }
  Eigen::MatrixXcd a(2, 2);
  a << std::complex<double>(0, 0.5), std::complex<double>(0, 0.1), std::complex<double>(0, 0.1),
      std::complex<double>(0, 0.7);
  const double lo = 0.6 - std::sqrt(0.01 + 0.01);
  for (int r = 0; r <= 4; ++r) {
    const double diff = std::abs(theta_window(a, 30) - theta_window(a, r));
    CHECK(diff <= lattice_tail_bound(2, M_PI * lo, r) + 1e-15);
  }
}

TEST_CASE("theta argument errors") {
  CHECK(code_of([] { theta(scalar({1.0, -0.5})); }) == ErrorCode::kNotPositiveDefinite);
  Eigen::MatrixXcd a(2, 2);
  a << std::complex<double>(0, 1), std::complex<double>(0, 0.5), std::complex<double>(0, 0.1),
      std::complex<double>(0, 1);
  CHECK(code_of([&] { theta(a); }) == ErrorCode::kInvalidArgument);
  CHECK(theta(Eigen::MatrixXcd(0, 0)).value == std::complex<double>(1.0));
}

TEST_CASE("lattice windows") {
  const auto w = lattice_window(2, 1);
  REQUIRE(w.size() == 9);
  CHECK(w.front() == Eigen::Vector2i(-1, -1));
  CHECK(w[1] == Eigen::Vector2i(-1, 0));
  CHECK(w.back() == Eigen::Vector2i(1, 1));
  CHECK(lattice_window_size(3, 2) == 125);
  CHECK(lattice_window(0, 5).size() == 1);
  CHECK(lattice_tail_bound(0, 1.0, 0) == 0.0);
  CHECK(std::isinf(lattice_tail_bound(1, 0.0, 3)));
}

TEST_CASE("torus zero modes") {
  auto one = [](const Eigen::VectorXd&) { return std::complex<double>(1.0); };
  CHECK(fourier_zero_mode(one, 2) == std::complex<double>(1.0));
  auto wave = [](const Eigen::VectorXd& z) { return std::exp(std::complex<double>(0, 2 * M_PI * z[0])); };
  CHECK(std::abs(fourier_zero_mode(wave, 1)) <= 1e-12);
  // 2 + 0.5 e(z1 - z2) + 0.25 e(3 z2) + i e(-2 z1)
  auto poly = [](const Eigen::VectorXd& z) {
    auto e = [](double x) { return std::exp(std::complex<double>(0, 2 * M_PI * x)); };
    return 2.0 + 0.5 * e(z[0] - z[1]) + 0.25 * e(3 * z[1]) + std::complex<double>(0, 1) * e(-2 * z[0]);
  };
  CHECK(std::abs(fourier_zero_mode(poly, 2) - 2.0) <= 1e-12);
  auto stored = [](const Eigen::VectorXd&) { return std::complex<double>(0.1); };
  CHECK(fourier_zero_mode(stored, 0) == std::complex<double>(0.1));
  auto saw = [](const Eigen::VectorXd& z) { return std::complex<double>(z[0]); };
  CHECK(code_of([&] { fourier_zero_mode(saw, 1); }) == ErrorCode::kNonConvergent);
}

TEST_CASE("Gauss-Hermite moments") {
  const GaussHermiteRule g = gauss_hermite(6);
  auto moment = [&](int k) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
    return s;
  };
  CHECK(moment(0) == Approx(std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(std::abs(moment(1)) <= 1e-14);
  CHECK(moment(4) == Approx(0.75 * std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(moment(10) == Approx(945.0 / 32.0 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("Maxwell action is gauge invariant") {
  std::mt19937_64 rng(21);
  for (auto base : {circle_complex(5), minimal_torus()}) {
    const Setup s = setup(base);
    for (int p = 0; p < base->dim(); ++p) {
      CharacterModel m(s.base, s.desc, p);
      for (int t = 0; t < 10; ++t) {
        const CharacterCoords ch = m.random_character(rng);
        const double s0 = maxwell_action(m, ch, 1.3);
        CHECK(s0 >= 0.0);
        for (int k = 0; k < 100; ++k) {
          CharacterCoords moved = ch;
          for (int j = 0; j < moved.z.size(); ++j) moved.z[j] = std::uniform_real_distribution<double>()(rng);
          CHECK(std::abs(maxwell_action(m, moved, 1.3) - s0) <= 1e-12 * std::max(1.0, s0));
        }
      }
    }
  }
}

TEST_CASE("group law on coordinates matches evaluation") {
  std::mt19937_64 rng(4);
  const Setup s = setup(fixtures::projective_plane());
  CharacterModel m(s.base, s.desc, 1);
  const HomologySummary h = homology(*s.base, 1);
  const IntegerVector alpha = simchar::apply(subdivision_chain_map(*s.desc, *s.base, 1), h.torsion_cycles.column(0));
  for (int t = 0; t < 20; ++t) {
    const CharacterCoords a = m.random_character(rng);
    const CharacterCoords b = m.random_character(rng);
    const double sum = m.evaluate(a, alpha) + m.evaluate(b, alpha);
    CHECK(circle_distance(m.evaluate(add_characters(m, a, b), alpha), sum) <= 1e-10);
  }
}

TEST_CASE("Gaussian fluctuation integrals") {
  const Setup s = setup(circle_complex(4));
  CharacterModel m(s.base, s.desc, 0);
  const FluctuationModes modes = fluctuation_modes(m);
  REQUIRE(modes.dimension() == 3);
  ActionSpec act;
  act.coupling = 0.7;
  IntegralClass c0{{BigInt(0)}, {}};
  IntegralClass c1{{BigInt(1)}, {}};
  const ScaledComplex z0 = gaussian_integral_im_delta(act, {}, m, c0);
  const ScaledComplex z1 = gaussian_integral_im_delta(act, {}, m, c1);
  double expected = 0.0;
  for (int i = 0; i < 3; ++i) expected += 0.5 * std::log(2 * M_PI * 0.7 / modes.eigenvalues[i]);
  CHECK(z0.log_scale == Approx(expected).epsilon(1e-14));
  const double h = m.harmonic_basis_next().col(0).dot(m.hodge().gram(1) * m.harmonic_basis_next().col(0));
  CHECK(z1.log_scale - z0.log_scale == Approx(-h / (2 * 0.7)).epsilon(1e-12));

  OracleOptions quad;
  const std::complex<double> numeric = numeric_im_delta_integral(act, {}, m, c1, quad);
  CHECK(rel(numeric.real(), z1.value().real()) <= 1e-9);
  OracleOptions mc;
  mc.method = OracleMethod::kMonteCarlo;
  mc.samples = 200000;
  double se = 0.0;
  const std::complex<double> est = numeric_im_delta_integral(act, {}, m, c1, mc, &se);
  CHECK(rel(est.real(), z1.value().real()) <= 0.02);
  CHECK(se > 0.0);
}

TEST_CASE("circle partition function against closed forms") {
  const int n = 6;
  auto base = circle_complex(n);
  const Setup s = setup(base);
  CharacterModel m(s.base, s.desc, 0);
  const double g2 = 0.8;
  ActionSpec act;
  act.coupling = g2;
  const PartitionResult r = partition_function(m, act, {});
  const double hside = (base->vertex(1) - base->vertex(0)).norm();
  const double len = n * hside;
  // P1 mass-matrix spectrum of the regular n-gon.
  double log_det = 0.0;
  for (int k = 1; k < n; ++k) {
    const double c = std::cos(2 * M_PI * k / n);
    log_det += std::log(6 * (2 - 2 * c) / (hside * hside * (4 + 2 * c)));
  }
  double lattice = 0.0;
  for (int v = -40; v <= 40; ++v) lattice += std::exp(-v * v / (2 * g2 * len));
  const double expected =
      std::sqrt(len / (2 * M_PI)) * std::exp(-log_det) * std::pow(2 * M_PI * g2, (n - 1) / 2.0) * lattice;
  CHECK(rel(r.value, expected) <= 1e-10);
  CHECK(r.value > 0.0);
  CHECK(r.prefactor.log_det_h[0] == Approx(std::log(len / (2 * M_PI))).epsilon(1e-12));
  CHECK(r.prefactor.log_det_coexact[0] == Approx(log_det).epsilon(1e-12));
  CHECK(r.truncation.tail_relative < 1e-12);

  PartitionOptions wide;
  wide.radius = 2 * r.truncation.radius;
  CHECK(rel(partition_function(m, act, {}, wide).value, r.value) <= 1e-10);

  const PartitionResult w0 = partition_function(m, act, wilson_observable(m.torus_cycles().column(0), 0));
  CHECK(w0.value == r.value);
  CHECK(w0.log_abs_value == r.log_abs_value);
}

TEST_CASE("determinant products telescope") {
  for (auto base : {circle_complex(7), minimal_torus(), tetrahedron_sphere(1)}) {
    const Setup s = setup(base);
    for (int p = 0; p <= base->dim(); ++p) {
      CharacterModel m(s.base, s.desc, p);
      const PrefactorBreakdown b = partition_prefactor(m);
      for (int r = 0; r <= p; ++r)
        CHECK(std::abs(b.log_det_coexact[r] - b.log_det_exact_shifted[r]) <= 1e-8 * std::max(1.0, std::abs(b.log_det_coexact[r])));
    }
  }
}

TEST_CASE("partition function agrees with the oracle") {
  SECTION("circle, constant observable") {
    const Setup s = setup(circle_complex(8));
    CharacterModel m(s.base, s.desc, 0);
    const PartitionResult r = partition_function(m, {}, {});
    OracleOptions o;
    o.radius = r.truncation.radius;
    const OracleResult q = partition_oracle(m, {}, {}, o);
    CHECK(rel(q.value, r.value) <= 1e-6);
    CHECK(q.separability_residual <= 1e-8);
  }
  SECTION("sphere monopoles") {
    for (int level : {0, 1}) {
      const Setup s = setup(tetrahedron_sphere(level));
      CharacterModel m(s.base, s.desc, 1);
      ActionSpec act;
      act.coupling = 0.5;
      const PartitionResult r = partition_function(m, act, {});
      CHECK(r.prefactor.torsion_order == 1);
      OracleOptions o;
      o.radius = r.truncation.radius;
      const OracleResult q = partition_oracle(m, act, {}, o);
      CHECK(rel(q.value, r.value) <= 1e-8);
    }
  }
  SECTION("Wilson boundary observable on the circle") {
    const Setup s = setup(circle_complex(5));
    CharacterModel m(s.base, s.desc, 0);
    IntegerVector alpha(s.desc->count(0), BigInt(0));
    alpha[1] = 1;
    alpha[3] = -1;
    const ObservableSpec obs = wilson_observable(alpha, 2);
    ActionSpec act;
    act.coupling = 0.3;
    const PartitionResult r = partition_function(m, act, obs);
    OracleOptions o;
    o.radius = r.truncation.radius;
    const OracleResult q = partition_oracle(m, act, obs, o);
    CHECK(rel(q.value, r.value) <= 1e-6);
    CHECK(std::abs(q.imaginary) <= 1e-8 * std::abs(q.value));
    const double plain = partition_function(m, act, {}).value;
    CHECK(std::abs(r.value) < plain);
    CHECK(r.value != 0.0);
  }
  SECTION("coupling trend") {
    const Setup s = setup(circle_complex(5));
    CharacterModel m(s.base, s.desc, 0);
    for (double g2 : {0.25, 1.0, 4.0}) {
      ActionSpec act;
      act.coupling = g2;
      const PartitionResult r = partition_function(m, act, {});
      OracleOptions o;
      o.radius = r.truncation.radius;
      CHECK(rel(partition_oracle(m, act, {}, o).value, r.value) <= 1e-6);
    }
  }
  SECTION("no fluctuations in top degree") {
    const Setup s = setup(circle_complex(4));
    CharacterModel m(s.base, s.desc, 1);
    const PartitionResult r = partition_function(m, {}, {});
    const OracleResult q = partition_oracle(m, {}, {}, {});
    CHECK(q.dimension == 0);
    CHECK(rel(q.value, r.value) <= 1e-14);
  }
}

TEST_CASE("Monte Carlo oracle") {
  const Setup s = setup(circle_complex(5));
  CharacterModel m(s.base, s.desc, 0);
  const PartitionResult r = partition_function(m, {}, {});
  OracleOptions o;
  o.method = OracleMethod::kMonteCarlo;
  o.samples = 200000;
  o.seed = 9;
  o.radius = r.truncation.radius;
  const OracleResult a = partition_oracle(m, {}, {}, o);
  CHECK(rel(a.value, r.value) <= 0.02);
  CHECK(std::abs(a.value - r.value) <= 5 * a.standard_error);
  const OracleResult b = partition_oracle(m, {}, {}, o);
  CHECK(a.value == b.value);
}

TEST_CASE("Wilson observables on nontrivial cycles vanish") {
  const Setup s = setup(minimal_torus());
  CharacterModel m(s.base, s.desc, 1);
  const PartitionResult r = partition_function(m, {}, wilson_observable(m.torus_cycles().column(0), 1));
  CHECK(r.value == 0.0);
}

TEST_CASE("torsion classes and Wilson charges on the projective plane") {
  const Setup s = setup(fixtures::projective_plane());
  CharacterModel m(s.base, s.desc, 1);
  const HomologySummary h = homology(*s.base, 1);
  const IntegerVector alpha = simchar::apply(subdivision_chain_map(*s.desc, *s.base, 1), h.torsion_cycles.column(0));
  ActionSpec act;
  act.coupling = 0.02;
  const PartitionResult plain = partition_function(m, act, {});
  CHECK(plain.truncation.torsion_points == 2);
  CHECK(plain.prefactor.torsion_order == 2);
  const PartitionResult odd = partition_function(m, act, wilson_observable(alpha, 1));
  const PartitionResult even = partition_function(m, act, wilson_observable(alpha, 2));
  CHECK(std::abs(odd.value) <= 1e-12 * plain.value);
  CHECK(even.value > 0.0);
  CHECK(even.value < plain.value);
  const OracleResult q = partition_oracle(m, act, wilson_observable(alpha, 2), {});
  CHECK(rel(q.value, even.value) <= 1e-6);
  const OracleResult q1 = partition_oracle(m, act, wilson_observable(alpha, 1), {});
  CHECK(std::abs(q1.value) <= 1e-9 * plain.value);
}

TEST_CASE("partition function invariances") {
  SECTION("unimodular change of the harmonic basis") {
    const Setup s = setup(minimal_torus());
    CharacterModel m(s.base, s.desc, 0);
    PartitionOptions o;
    o.harmonic_transform = IntegerMatrix::from_columns(2, {IntegerVector{1, 0}, IntegerVector{2, 1}});
    CHECK(rel(partition_function(m, {}, {}, o).value, partition_function(m, {}, {}).value) <= 1e-9);
    o.harmonic_transform = IntegerMatrix::from_columns(2, {IntegerVector{2, 0}, IntegerVector{0, 1}});
    CHECK(code_of([&] { partition_function(m, {}, {}, o); }) == ErrorCode::kInvalidArgument);
  }
  SECTION("relabeling simplices") {
    auto a = minimal_torus();
    std::vector<int> perm = {3, 0, 6, 1, 5, 2, 4};
    Eigen::MatrixXd coords(a->vertex_count(), a->embed_dim());
    for (int i = 0; i < a->vertex_count(); ++i) coords.row(perm[i]) = a->coordinates().row(i);
    std::vector<std::vector<int>> tops;
    for (int i = a->count(2) - 1; i >= 0; --i) {
      const Simplex& t = a->simplex(2, i);
      tops.push_back({perm[t[1]], perm[t[0]], perm[t[2]]});
    }
    auto b = build_complex(coords, tops);
    for (int p = 0; p <= 1; ++p) {
      CharacterModel ma(a, perturbed_subdivide(a, 1, 0.2), p);
      CharacterModel mb(b, perturbed_subdivide(b, 2, 0.2), p);
      CHECK(rel(partition_function(ma, {}, {}).value, partition_function(mb, {}, {}).value) <= 1e-9);
    }
  }
  SECTION("background character") {
    std::mt19937_64 rng(6);
    const Setup s = setup(circle_complex(6));
    CharacterModel m(s.base, s.desc, 0);
    IntegerVector alpha(s.desc->count(0), BigInt(0));
    alpha[0] = 1;
    alpha[2] = -1;
    ActionSpec act;
    act.background = m.random_character(rng);
    for (const ObservableSpec& obs : {ObservableSpec{}, wilson_observable(alpha, 1)}) {
      const double plain = partition_function(m, {}, obs).value;
      CHECK(rel(partition_function(m, act, obs).value, plain) <= 1e-9);
      OracleOptions o;
      o.radius = 12;
      CHECK(rel(partition_oracle(m, act, obs, o).value, plain) <= 1e-6);
    }
  }
}

TEST_CASE("custom actions and observables use numeric integration") {
  const Setup s = setup(circle_complex(4));
  CharacterModel m(s.base, s.desc, 0);
  ActionSpec custom;
  custom.kind = ActionKind::kCustom;
  custom.custom = [](const CharacterModel& mm, const CharacterCoords& ch) { return maxwell_action(mm, ch, 1.0); };
  CHECK(rel(partition_function(m, custom, {}).value, partition_function(m, {}, {}).value) <= 1e-8);
  ObservableSpec o;
  o.kind = ObservableKind::kCustom;
  o.custom = [](const CharacterModel&, const CharacterCoords&) { return std::complex<double>(2.0); };
  CHECK(rel(partition_function(m, {}, o).value, 2.0 * partition_function(m, {}, {}).value) <= 1e-8);
  ActionSpec empty;
  empty.kind = ActionKind::kCustom;
  CHECK(code_of([&] { partition_function(m, empty, {}); }) == ErrorCode::kUnsupportedAction);
}

TEST_CASE("gauge errors") {
  const Setup s = setup(circle_complex(4));
  CharacterModel m(s.base, s.desc, 0);
  PartitionOptions tight;
  tight.max_radius = 2;
  ActionSpec weak;
  weak.coupling = 1e4;
  CHECK(code_of([&] { partition_function(m, weak, {}, tight); }) == ErrorCode::kTruncationInsufficient);
  OracleOptions big;
  big.radius = 600;
  CHECK(code_of([&] { partition_oracle(m, {}, {}, big); }) == ErrorCode::kTooLarge);
  OracleOptions narrow;
  narrow.max_dimension = 2;
  CHECK(code_of([&] { partition_oracle(m, {}, {}, narrow); }) == ErrorCode::kTooLarge);
  ActionSpec bad;
  bad.coupling = -1.0;
  CHECK(code_of([&] { partition_function(m, bad, {}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("partition report") {
  const Setup s = setup(circle_complex(4));
  CharacterModel m(s.base, s.desc, 0);
  const auto j = nlohmann::json::parse(to_json(partition_function(m, {}, {})));
  CHECK(j.contains("prefactor_breakdown"));
  CHECK(j["truncation"]["radius"].get<int>() >= 8);
  CHECK(j["class_sum_terms"].size() == 17);
}
