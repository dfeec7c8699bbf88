#include "simchar/complex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "simchar/error.hpp"
#include "simchar/integer_relation.hpp"

namespace simchar {

namespace {

double gram_volume(const Eigen::MatrixXd& coords, const Simplex& s, double* normalized) {
  const int k = static_cast<int>(s.size()) - 1;
  if (k == 0) {
    if (normalized) *normalized = 1.0;
    return 1.0;
  }
  Eigen::MatrixXd e(coords.cols(), k);
  double lengths = 1.0;
  for (int j = 0; j < k; ++j) {
    e.col(j) = (coords.row(s[j + 1]) - coords.row(s[0])).transpose();
    lengths *= e.col(j).norm();
  }
  const double det = std::max(0.0, (e.transpose() * e).determinant());
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  if (normalized) *normalized = lengths > 0 ? std::sqrt(det) / lengths : 0.0;
  return std::sqrt(det) / fact;
}

Simplex without(const Simplex& s, int pos) {
  Simplex f;
  f.reserve(s.size() - 1);
  for (int j = 0; j < static_cast<int>(s.size()); ++j)
    if (j != pos) f.push_back(s[j]);
  return f;
}

std::uint64_t fnv_mix(std::uint64_t h, const void* data, size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

double uniform01(std::mt19937_64& rng) { return boost::random::uniform_01<double>()(rng); }

double standard_normal(std::mt19937_64& rng) { return boost::random::normal_distribution<double>()(rng); }

struct NewVertex {
  Eigen::VectorXd position;
  VertexCarrier carrier;
};

// Weights of a vertex carrier expanded onto the ordered vertex list `frame`.
template <class T>
std::vector<T> expand_weights(const SimplicialComplex& parent, const VertexCarrier& vc,
                              const std::vector<T>& weights, const Simplex& frame) {
  std::vector<T> row(frame.size(), T(0));
  const Simplex& s = parent.simplex(vc.simplex.dim, vc.simplex.index);
  for (size_t a = 0; a < s.size(); ++a) {
    auto it = std::find(frame.begin(), frame.end(), s[a]);
    if (it == frame.end()) {
      if (weights[a] != T(0)) fail(ErrorCode::kInvalidArgument, "carrier outside frame simplex");
      continue;
    }
    row[it - frame.begin()] += weights[a];
  }
  return row;
}

ComplexPtr assemble_subdivision(const ComplexPtr& x, const std::vector<NewVertex>& verts,
                                const std::vector<std::vector<int>>& children,
                                const std::vector<int>& child_parent_top) {
  const int n = x->dim();
  Eigen::MatrixXd coords(verts.size(), x->embed_dim());
  for (size_t v = 0; v < verts.size(); ++v) coords.row(v) = verts[v].position.transpose();

  std::vector<int> signs;
  if (x->oriented()) {
    signs.resize(children.size());
    for (size_t c = 0; c < children.size(); ++c) {
      const Simplex& top = x->simplex(n, child_parent_top[c]);
      Eigen::MatrixXd b(n + 1, n + 1);
      for (int r = 0; r <= n; ++r) {
        const VertexCarrier& vc = verts[children[c][r]].carrier;
        auto row = expand_weights<double>(*x, vc, vc.weights, top);
        for (int j = 0; j <= n; ++j) b(r, j) = row[j];
      }
      const double det = b.determinant();
      if (!(std::abs(det) > 0)) fail(ErrorCode::kDegenerateSimplex, "degenerate child simplex");
      signs[c] = (det > 0 ? 1 : -1) * x->orientation(n, child_parent_top[c]);
    }
  }
  BuildOptions opts;
  opts.require_closed = x->closed();
  opts.require_orientable = x->oriented();
  opts.check_geometry = x->options().check_geometry;
  auto built = build_complex(coords, children, signs, opts);
  auto child = std::make_shared<SimplicialComplex>(*built);

  ParentLink link;
  link.parent = x;
  link.vertex_carriers.reserve(verts.size());
  for (const auto& v : verts) link.vertex_carriers.push_back(v.carrier);
  link.simplex_carriers.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    link.simplex_carriers[k].resize(child->count(k));
    for (int i = 0; i < child->count(k); ++i) {
      std::set<int> span;
      for (int v : child->simplex(k, i)) {
        const SimplexRef& r = link.vertex_carriers[v].simplex;
        for (int u : x->simplex(r.dim, r.index)) span.insert(u);
      }
      Simplex s(span.begin(), span.end());
      const int idx = x->find(s);
      if (idx < 0) fail(ErrorCode::kInvalidArgument, "child simplex has no parent carrier");
      link.simplex_carriers[k][i] = SimplexRef{static_cast<int>(s.size()) - 1, idx};
    }
  }
  return attach_parent(child, std::move(link));
}

std::vector<NewVertex> original_vertices(const SimplicialComplex& x) {
  std::vector<NewVertex> verts;
  for (int v = 0; v < x.vertex_count(); ++v) {
    NewVertex nv;
    nv.position = x.vertex(v);
    nv.carrier.simplex = SimplexRef{0, v};
    nv.carrier.weights = {1.0};
    nv.carrier.exact_weights = {BigRational(1)};
    verts.push_back(std::move(nv));
  }
  return verts;
}

Eigen::VectorXd weighted_point(const SimplicialComplex& x, const Simplex& s,
                               const std::vector<double>& w) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(x.embed_dim());
  for (size_t j = 0; j < s.size(); ++j) p += w[j] * x.vertex(s[j]);
  return p;
}

// Flag subdivision of every top simplex using one inserted point per simplex.
// point_weights[k][i] holds the weights of the point inserted in simplex (k, i).
ComplexPtr flag_subdivision(const ComplexPtr& x,
                            const std::vector<std::vector<std::vector<BigRational>>>& point_weights) {
  const int n = x->dim();
  std::vector<NewVertex> verts = original_vertices(*x);
  std::vector<std::vector<int>> vertex_of(n + 1);
  vertex_of[0].resize(x->count(0));
  std::iota(vertex_of[0].begin(), vertex_of[0].end(), 0);
  for (int k = 1; k <= n; ++k) {
    vertex_of[k].resize(x->count(k));
    for (int i = 0; i < x->count(k); ++i) {
      NewVertex nv;
      nv.carrier.simplex = SimplexRef{k, i};
      nv.carrier.exact_weights = point_weights[k][i];
      for (const auto& w : point_weights[k][i]) nv.carrier.weights.push_back(w.convert_to<double>());
      nv.position = weighted_point(*x, x->simplex(k, i), nv.carrier.weights);
      vertex_of[k][i] = static_cast<int>(verts.size());
      verts.push_back(std::move(nv));
    }
  }
  std::vector<std::vector<int>> children;
  std::vector<int> parent_top;
  for (int t = 0; t < x->count(n); ++t) {
    const Simplex& top = x->simplex(n, t);
    std::vector<int> perm(n + 1);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<int> child;
      for (int j = 0; j <= n; ++j) {
        Simplex face;
        for (int a = 0; a <= j; ++a) face.push_back(top[perm[a]]);
        std::sort(face.begin(), face.end());
        child.push_back(vertex_of[j][x->find(face)]);
      }
      children.push_back(std::move(child));
      parent_top.push_back(t);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return assemble_subdivision(x, verts, children, parent_top);
}

}  // namespace

int permutation_sign(std::vector<int> values) {
  int sign = 1;
  for (size_t i = 0; i < values.size(); ++i)
    for (size_t j = i + 1; j < values.size(); ++j)
      if (values[i] > values[j]) sign = -sign;
  return sign;
}

int SimplicialComplex::count(int k) const {
  if (k < 0 || k > dim_) return 0;
  return static_cast<int>(simplices_[k].size());
}

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
  if (k < 0 || k > dim_) fail(ErrorCode::kDegreeOutOfRange, "simplex degree out of range");
  return simplices_[k];
}

int SimplicialComplex::find(const Simplex& s) const {
  const int k = static_cast<int>(s.size()) - 1;
  if (k < 0 || k > dim_) return -1;
  const auto& list = simplices_[k];
  auto it = std::lower_bound(list.begin(), list.end(), s);
  if (it == list.end() || *it != s) return -1;
  return static_cast<int>(it - list.begin());
}

int SimplicialComplex::orientation(int k, int i) const {
  if (k < 0 || k > dim_) fail(ErrorCode::kDegreeOutOfRange, "orientation degree out of range");
  return orientation_[k][i];
}

const IncidenceMatrix& SimplicialComplex::boundary(int k) const {
  if (k < 1 || k > dim_) fail(ErrorCode::kDegreeOutOfRange, "boundary degree out of range");
  return boundary_[k];
}

Eigen::SparseMatrix<double> SimplicialComplex::coboundary_sparse(int k) const {
  if (k < 0 || k >= dim_) fail(ErrorCode::kDegreeOutOfRange, "coboundary degree out of range");
  return Eigen::SparseMatrix<double>(boundary_[k + 1].cast<double>().transpose());
}

Eigen::MatrixXd SimplicialComplex::coboundary_dense(int k) const {
  return Eigen::MatrixXd(coboundary_sparse(k));
}

std::vector<int> SimplicialComplex::f_vector() const {
  std::vector<int> f;
  for (int k = 0; k <= dim_; ++k) f.push_back(count(k));
  return f;
}

int SimplicialComplex::euler_characteristic() const {
  int chi = 0;
  for (int k = 0; k <= dim_; ++k) chi += (k % 2 == 0 ? 1 : -1) * count(k);
  return chi;
}

double SimplicialComplex::volume(int k, int i) const {
  return gram_volume(coords_, simplex(k, i), nullptr);
}

double SimplicialComplex::inradius(int k, int i) const {
  if (k < 1) return 0.0;
  const Simplex& s = simplex(k, i);
  double facets = 0.0;
  for (int j = 0; j <= k; ++j) facets += gram_volume(coords_, without(s, j), nullptr);
  return k * volume(k, i) / facets;
}

const std::vector<int>& SimplicialComplex::cofaces(int k, int i) const {
  if (k < 0 || k >= dim_) fail(ErrorCode::kDegreeOutOfRange, "coface degree out of range");
  return cofaces_[k][i];
}

std::uint64_t SimplicialComplex::content_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  h = fnv_mix(h, &dim_, sizeof dim_);
  const int embed = embed_dim();
  h = fnv_mix(h, &embed, sizeof embed);
  for (Eigen::Index r = 0; r < coords_.rows(); ++r)
    for (Eigen::Index c = 0; c < coords_.cols(); ++c) {
      const double v = coords_(r, c);
      h = fnv_mix(h, &v, sizeof v);
    }
  for (int t = 0; t < count(dim_); ++t) {
    for (int v : simplices_[dim_][t]) h = fnv_mix(h, &v, sizeof v);
    const int o = orientation_[dim_][t];
    h = fnv_mix(h, &o, sizeof o);
  }
  return h;
}

ComplexPtr build_complex(const Eigen::MatrixXd& coords, const std::vector<std::vector<int>>& tops_in,
                         const std::vector<int>& orientation_in, const BuildOptions& options) {
  if (tops_in.empty()) fail(ErrorCode::kInvalidArgument, "no top simplices given");
  const int n = static_cast<int>(tops_in[0].size()) - 1;
  if (n < 1) fail(ErrorCode::kInvalidArgument, "top simplices must have dimension >= 1");
  const int nv = static_cast<int>(coords.rows());
  if (coords.cols() < n) fail(ErrorCode::kInvalidArgument, "embedding dimension below manifold dimension");
  if (!orientation_in.empty() && orientation_in.size() != tops_in.size())
    fail(ErrorCode::kInvalidArgument, "orientation list length mismatch");

  auto cx = std::make_shared<SimplicialComplex>();
  cx->dim_ = n;
  cx->coords_ = coords;
  cx->options_ = options;

  const int m = static_cast<int>(tops_in.size());
  std::vector<std::pair<Simplex, int>> sorted_tops;
  sorted_tops.reserve(m);
  for (int t = 0; t < m; ++t) {
    const auto& tuple = tops_in[t];
    if (static_cast<int>(tuple.size()) != n + 1)
      fail(ErrorCode::kInvalidArgument, "top simplices of mixed dimension");
    for (int v : tuple)
      if (v < 0 || v >= nv) fail(ErrorCode::kInvalidArgument, "vertex index out of range");
    Simplex s(tuple.begin(), tuple.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      fail(ErrorCode::kInvalidArgument, "repeated vertex in simplex");
    int sign = permutation_sign(tuple);
    if (!orientation_in.empty()) {
      if (orientation_in[t] != 1 && orientation_in[t] != -1)
        fail(ErrorCode::kInvalidArgument, "orientation sign must be +1 or -1");
      sign *= orientation_in[t];
    }
    sorted_tops.emplace_back(std::move(s), sign);
  }
  std::sort(sorted_tops.begin(), sorted_tops.end());
  for (int t = 1; t < m; ++t)
    if (sorted_tops[t].first == sorted_tops[t - 1].first)
      fail(ErrorCode::kInvalidArgument, "duplicate top simplex");

  cx->simplices_.assign(n + 1, {});
  std::vector<int> tuple_sign(m);
  for (int t = 0; t < m; ++t) {
    cx->simplices_[n].push_back(sorted_tops[t].first);
    tuple_sign[t] = sorted_tops[t].second;
  }
  for (int k = n - 1; k >= 0; --k) {
    std::set<Simplex> faces;
    for (const auto& s : cx->simplices_[k + 1])
      for (int j = 0; j <= k + 1; ++j) faces.insert(without(s, j));
    cx->simplices_[k].assign(faces.begin(), faces.end());
  }
  if (cx->count(0) != nv) fail(ErrorCode::kInvalidArgument, "some vertex is not used by any simplex");

  cx->cofaces_.assign(n, {});
  for (int k = 0; k < n; ++k) {
    cx->cofaces_[k].assign(cx->count(k), {});
    for (int i = 0; i < cx->count(k + 1); ++i)
      for (int j = 0; j <= k + 1; ++j)
        cx->cofaces_[k][cx->find(without(cx->simplices_[k + 1][i], j))].push_back(i);
  }

  // Facet incidences of top simplices: facet_of[t][j] = facet index opposite vertex j.
  std::vector<std::vector<int>> facet_of(m, std::vector<int>(n + 1));
  for (int t = 0; t < m; ++t)
    for (int j = 0; j <= n; ++j) facet_of[t][j] = cx->find(without(cx->simplices_[n][t], j));
  bool closed = true;
  for (int f = 0; f < cx->count(n - 1); ++f) {
    const auto sz = cx->cofaces_[n - 1][f].size();
    if (sz > 2) fail(ErrorCode::kBoundaryDetected, "facet with more than two cofaces");
    if (sz < 2) closed = false;
  }

  auto position_in = [&](int t, int f) {
    for (int j = 0; j <= n; ++j)
      if (facet_of[t][j] == f) return j;
    return -1;
  };
  auto induced = [](int sign, int pos) { return (pos % 2 == 0) ? sign : -sign; };

  std::vector<int> top_sign(m, 0);
  bool consistent = true;
  if (!orientation_in.empty()) {
    top_sign = tuple_sign;
    for (int f = 0; f < cx->count(n - 1) && consistent; ++f) {
      const auto& cf = cx->cofaces_[n - 1][f];
      if (cf.size() != 2) continue;
      if (induced(top_sign[cf[0]], position_in(cf[0], f)) ==
          induced(top_sign[cf[1]], position_in(cf[1], f)))
        consistent = false;
    }
  } else {
    for (int seed = 0; seed < m && consistent; ++seed) {
      if (top_sign[seed] != 0) continue;
      top_sign[seed] = tuple_sign[seed];
      std::deque<int> queue{seed};
      while (!queue.empty() && consistent) {
        const int t = queue.front();
        queue.pop_front();
        for (int j = 0; j <= n; ++j) {
          const int f = facet_of[t][j];
          for (int u : cx->cofaces_[n - 1][f]) {
            if (u == t) continue;
            const int want = -induced(induced(top_sign[t], j), position_in(u, f));
            if (top_sign[u] == 0) {
              top_sign[u] = want;
              queue.push_back(u);
            } else if (top_sign[u] != want) {
              consistent = false;
            }
          }
        }
      }
    }
  }
  if (!consistent) {
    if (options.require_orientable) fail(ErrorCode::kNonOrientable, "no consistent orientation exists");
    cx->oriented_ = false;
    std::fill(top_sign.begin(), top_sign.end(), 1);
  }
  if (!closed && options.require_closed)
    fail(ErrorCode::kBoundaryDetected, "facet with a single coface");
  cx->closed_ = closed;

  cx->orientation_.assign(n + 1, {});
  for (int k = 0; k < n; ++k) cx->orientation_[k].assign(cx->count(k), 1);
  cx->orientation_[n] = top_sign;

  if (options.check_geometry) {
    for (int k = 1; k <= n; ++k)
      for (const auto& s : cx->simplices_[k]) {
        double normalized = 0.0;
        gram_volume(coords, s, &normalized);
        if (!(normalized > 1e-10)) fail(ErrorCode::kDegenerateSimplex, "simplex with zero affine volume");
      }
  }

  cx->boundary_.assign(n + 1, IncidenceMatrix());
  for (int k = 1; k <= n; ++k) {
    std::vector<Eigen::Triplet<int>> trip;
    for (int i = 0; i < cx->count(k); ++i) {
      const Simplex& s = cx->simplices_[k][i];
      for (int j = 0; j <= k; ++j) {
        const int f = cx->find(without(s, j));
        const int sign = (j % 2 == 0 ? 1 : -1) * cx->orientation_[k][i] * cx->orientation_[k - 1][f];
        trip.emplace_back(f, i, sign);
      }
    }
    IncidenceMatrix b(cx->count(k - 1), cx->count(k));
    b.setFromTriplets(trip.begin(), trip.end());
    cx->boundary_[k] = std::move(b);
  }
  return cx;
}

ComplexPtr attach_parent(std::shared_ptr<SimplicialComplex> child, ParentLink link) {
  child->parent_ = std::move(link);
  return child;
}

IntegerMatrix boundary_matrix(const SimplicialComplex& x, int k) {
  return IntegerMatrix::from_incidence(x.boundary(k));
}

ComplexPtr barycentric_subdivide(const ComplexPtr& x) {
  std::vector<std::vector<std::vector<BigRational>>> w(x->dim() + 1);
  for (int k = 1; k <= x->dim(); ++k)
    w[k].assign(x->count(k), std::vector<BigRational>(k + 1, BigRational(1, k + 1)));
  return flag_subdivision(x, w);
}

ComplexPtr perturbed_subdivide(const ComplexPtr& x, std::uint64_t seed, double scale) {
  if (!(scale > 0.0 && scale < 0.5))
    fail(ErrorCode::kInvalidArgument, "perturbation scale must lie in (0, 1/2)");
  constexpr int kMaxAttempts = 64;
  std::mt19937_64 rng(seed);
  const int n = x->dim();
  std::vector<std::vector<std::vector<BigRational>>> w(n + 1);
  for (int k = 1; k <= n; ++k) {
    w[k].resize(x->count(k));
    for (int i = 0; i < x->count(k); ++i) {
      const Simplex& s = x->simplex(k, i);
      Eigen::MatrixXd e(x->embed_dim(), k);
      for (int j = 0; j < k; ++j) e.col(j) = x->vertex(s[j + 1]) - x->vertex(s[0]);
      const double radius = scale * x->inradius(k, i);
      bool accepted = false;
      for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
        Eigen::VectorXd a(k);
        for (int j = 0; j < k; ++j) a[j] = standard_normal(rng);
        const double len = (e * a).norm();
        const double r = radius * (1.0 - uniform01(rng));
        if (!(len > 0)) continue;
        std::vector<BigRational> cand(k + 1);
        BigRational rest(1);
        for (int j = 1; j <= k; ++j) {
          cand[j] = BigRational(1.0 / (k + 1) + r * a[j - 1] / len);
          rest -= cand[j];
        }
        cand[0] = rest;
        bool inside = true;
        for (const auto& c : cand)
          if (!(c.convert_to<double>() > 1e-9)) inside = false;
        if (!inside) continue;

        // Integrals of the top Whitney form of s over the flag children of s.
        std::vector<double> integrals;
        std::vector<int> perm(k + 1);
        std::iota(perm.begin(), perm.end(), 0);
        do {
          Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k + 1, k + 1);
          for (int j = 0; j <= k; ++j) {
            Simplex face;
            for (int q = 0; q <= j; ++q) face.push_back(s[perm[q]]);
            std::sort(face.begin(), face.end());
            const std::vector<BigRational>* fw;
            std::vector<BigRational> vertex_w{BigRational(1)};
            if (j == 0) fw = &vertex_w;
            else if (j == k) fw = &cand;
            else fw = &w[j][x->find(face)];
            for (int q = 0; q <= j; ++q) {
              const int pos = static_cast<int>(std::find(s.begin(), s.end(), face[q]) - s.begin());
              b(j, pos) = (*fw)[q].convert_to<double>();
            }
          }
          integrals.push_back(std::abs(b.determinant()));
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (has_pairwise_relation(integrals, kRelationMaxCoefficient, kRelationTolerance)) continue;
        w[k][i] = std::move(cand);
        accepted = true;
      }
      if (!accepted)
        fail(ErrorCode::kPerturbationEscapedSimplex,
             "perturbed point could not be placed inside simplex " + std::to_string(i) +
                 " of dimension " + std::to_string(k));
    }
  }
  return flag_subdivision(x, w);
}

ComplexPtr midpoint_subdivide(const ComplexPtr& x) {
  const int n = x->dim();
  if (n == 1) return barycentric_subdivide(x);
  if (n != 2) fail(ErrorCode::kInvalidArgument, "midpoint refinement supports dimensions 1 and 2");
  std::vector<NewVertex> verts = original_vertices(*x);
  std::vector<int> mid(x->count(1));
  for (int e = 0; e < x->count(1); ++e) {
    NewVertex nv;
    nv.carrier.simplex = SimplexRef{1, e};
    nv.carrier.weights = {0.5, 0.5};
    nv.carrier.exact_weights = {BigRational(1, 2), BigRational(1, 2)};
    nv.position = weighted_point(*x, x->simplex(1, e), nv.carrier.weights);
    mid[e] = static_cast<int>(verts.size());
    verts.push_back(std::move(nv));
  }
  std::vector<std::vector<int>> children;
  std::vector<int> parent_top;
  for (int t = 0; t < x->count(2); ++t) {
    const Simplex& s = x->simplex(2, t);
    const int ab = mid[x->find({s[0], s[1]})];
    const int ac = mid[x->find({s[0], s[2]})];
    const int bc = mid[x->find({s[1], s[2]})];
    for (auto child : {std::vector<int>{s[0], ab, ac}, std::vector<int>{s[1], ab, bc},
                       std::vector<int>{s[2], ac, bc}, std::vector<int>{ab, ac, bc}}) {
      children.push_back(child);
      parent_top.push_back(t);
    }
  }
  return assemble_subdivision(x, verts, children, parent_top);
}

double mesh(const SimplicialComplex& x) {
  double m = 0.0;
  for (const auto& e : x.simplices(1))
    m = std::max(m, (x.vertex(e[0]) - x.vertex(e[1])).norm());
  return m;
}

double fullness(const SimplicialComplex& x) {
  const double h = mesh(x);
  const int n = x.dim();
  double f = std::numeric_limits<double>::infinity();
  for (int t = 0; t < x.count(n); ++t) f = std::min(f, x.volume(n, t) / std::pow(h, n));
  return f;
}

std::optional<DescentMap> descent_map(const SimplicialComplex& desc, const SimplicialComplex& ancestor) {
  const int n = desc.dim();
  if (&desc == &ancestor) {
    DescentMap map;
    for (int v = 0; v < desc.vertex_count(); ++v)
      map.vertices.push_back(VertexCarrier{SimplexRef{0, v}, {1.0}, {BigRational(1)}});
    map.carriers.resize(n + 1);
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i < desc.count(k); ++i) map.carriers[k].push_back(SimplexRef{k, i});
    return map;
  }
  const ParentLink* link = desc.parent();
  if (!link || link->parent->dim() != n) return std::nullopt;
  auto upper = descent_map(*link->parent, ancestor);
  if (!upper) return std::nullopt;
  if (link->parent.get() == &ancestor) {
    DescentMap map;
    map.vertices = link->vertex_carriers;
    map.carriers = link->simplex_carriers;
    return map;
  }
  const SimplicialComplex& mid = *link->parent;
  DescentMap map;
  map.vertices.resize(desc.vertex_count());
  for (int v = 0; v < desc.vertex_count(); ++v) {
    const VertexCarrier& vc = link->vertex_carriers[v];
    const Simplex& ms = mid.simplex(vc.simplex.dim, vc.simplex.index);
    std::map<int, std::pair<double, BigRational>> acc;
    const bool exact = vc.exact_weights.size() == ms.size();
    for (size_t a = 0; a < ms.size(); ++a) {
      const VertexCarrier& uc = upper->vertices[ms[a]];
      const Simplex& as = ancestor.simplex(uc.simplex.dim, uc.simplex.index);
      const bool uexact = uc.exact_weights.size() == as.size();
      for (size_t b = 0; b < as.size(); ++b) {
        auto& slot = acc[as[b]];
        slot.first += vc.weights[a] * uc.weights[b];
        if (exact && uexact) slot.second += vc.exact_weights[a] * uc.exact_weights[b];
      }
    }
    Simplex s;
    VertexCarrier out;
    for (const auto& [u, wt] : acc) {
      s.push_back(u);
      out.weights.push_back(wt.first);
      out.exact_weights.push_back(wt.second);
    }
    out.simplex = SimplexRef{static_cast<int>(s.size()) - 1, ancestor.find(s)};
    if (out.simplex.index < 0) return std::nullopt;
    map.vertices[v] = std::move(out);
  }
  map.carriers.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    map.carriers[k].resize(desc.count(k));
    for (int i = 0; i < desc.count(k); ++i) {
      std::set<int> span;
      for (int v : desc.simplex(k, i)) {
        const SimplexRef& r = map.vertices[v].simplex;
        for (int u : ancestor.simplex(r.dim, r.index)) span.insert(u);
      }
      Simplex s(span.begin(), span.end());
      map.carriers[k][i] = SimplexRef{static_cast<int>(s.size()) - 1, ancestor.find(s)};
      if (map.carriers[k][i].index < 0) return std::nullopt;
    }
  }
  return map;
}

Eigen::MatrixXd barycentric_rows(const DescentMap& map, const SimplicialComplex& desc,
                                 const SimplicialComplex& ancestor, int k, int i, const Simplex& frame) {
  const Simplex& s = desc.simplex(k, i);
  Eigen::MatrixXd b(k + 1, frame.size());
  for (int r = 0; r <= k; ++r) {
    const VertexCarrier& vc = map.vertices[s[r]];
    auto row = expand_weights<double>(ancestor, vc, vc.weights, frame);
    for (size_t j = 0; j < frame.size(); ++j) b(r, j) = row[j];
  }
  return b;
}

std::vector<std::vector<BigRational>> barycentric_rows_exact(
    const DescentMap& map, const SimplicialComplex& desc, const SimplicialComplex& ancestor, int k, int i,
    const Simplex& frame) {
  const Simplex& s = desc.simplex(k, i);
  std::vector<std::vector<BigRational>> b;
  for (int r = 0; r <= k; ++r) {
    const VertexCarrier& vc = map.vertices[s[r]];
    std::vector<BigRational> w = vc.exact_weights;
    if (w.size() != vc.weights.size())
      fail(ErrorCode::kInvalidArgument, "exact weights unavailable for descendant vertex");
    b.push_back(expand_weights<BigRational>(ancestor, vc, w, frame));
  }
  return b;
}

IncidenceMatrix subdivision_chain_map(const SimplicialComplex& desc, const SimplicialComplex& ancestor, int k) {
  auto map = descent_map(desc, ancestor);
  if (!map) fail(ErrorCode::kNoParentLink, "complex does not descend from the given ancestor");
  std::vector<Eigen::Triplet<int>> trip;
  for (int c = 0; c < desc.count(k); ++c) {
    const SimplexRef& r = map->carriers[k][c];
    if (r.dim != k) continue;
    const Eigen::MatrixXd b = barycentric_rows(*map, desc, ancestor, k, c, ancestor.simplex(k, r.index));
    const double det = b.determinant();
    const int sign = (det > 0 ? 1 : -1) * desc.orientation(k, c) * ancestor.orientation(k, r.index);
    trip.emplace_back(c, r.index, sign);
  }
  IncidenceMatrix sd(desc.count(k), ancestor.count(k));
  sd.setFromTriplets(trip.begin(), trip.end());
  return sd;
}

IncidenceMatrix simplicial_pullback(const SimplicialComplex& desc, const SimplicialComplex& ancestor, int k) {
  auto map = descent_map(desc, ancestor);
  if (!map) fail(ErrorCode::kNoParentLink, "complex does not descend from the given ancestor");
  std::vector<Eigen::Triplet<int>> trip;
  for (int c = 0; c < desc.count(k); ++c) {
    std::vector<int> image;
    for (int v : desc.simplex(k, c)) {
      const SimplexRef& r = map->vertices[v].simplex;
      image.push_back(ancestor.simplex(r.dim, r.index)[0]);
    }
    Simplex sorted = image;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    const int idx = ancestor.find(sorted);
    if (idx < 0) fail(ErrorCode::kInvalidArgument, "vertex map is not simplicial");
    const int sign = permutation_sign(image) * desc.orientation(k, c) * ancestor.orientation(k, idx);
    trip.emplace_back(c, idx, sign);
  }
  IncidenceMatrix p(desc.count(k), ancestor.count(k));
  p.setFromTriplets(trip.begin(), trip.end());
  return p;
}

}  // namespace simchar
