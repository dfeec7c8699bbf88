#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "simchar/error.hpp"
#include "simchar/exact_algebra.hpp"

namespace simchar {

namespace {

constexpr int kDenseLimit = 400;

const SimplicialComplex* root_of(const SimplicialComplex& x) {
  const SimplicialComplex* r = &x;
  while (r->parent()) r = r->parent()->parent.get();
  return r;
}

bool connected(const SimplicialComplex& x) {
  std::vector<int> parent(x.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  int parts = x.vertex_count();
  if (x.dim() == 0) return parts == 1;
  for (const auto& e : x.simplices(1)) {
    const int a = find(e[0]);
    const int b = find(e[1]);
    if (a != b) {
      parent[a] = b;
      --parts;
    }
  }
  return parts == 1;
}

bool fundamental_cycle_exists(const SimplicialComplex& x) {
  const int n = x.dim();
  if (n == 0 || !x.closed() || !x.oriented()) return false;
  Eigen::VectorXi ones = Eigen::VectorXi::Ones(x.count(n));
  return (x.boundary(n) * ones).isZero();
}

IntegralBasis from_homology(const SimplicialComplex& x, int k) {
  const HomologySummary h = homology(x, k);
  return IntegralBasis{k, h.generators, h.cocycle_duals};
}

IntegralBasis transported(const SimplicialComplex& x, const SimplicialComplex& root, int k) {
  const IntegralBasis base = integral_basis(root, k);
  const IncidenceMatrix sd = subdivision_chain_map(x, root, k);
  const IncidenceMatrix pull = simplicial_pullback(x, root, k);
  std::vector<IntegerVector> cyc, coc;
  for (int j = 0; j < base.betti(); ++j) {
    cyc.push_back(simchar::apply(sd, base.cycles.column(j)));
    coc.push_back(simchar::apply(pull, base.cocycles.column(j)));
  }
  return IntegralBasis{k, IntegerMatrix::from_columns(x.count(k), cyc),
                       IntegerMatrix::from_columns(x.count(k), coc)};
}

// Tree-cotree generators of H_1 on a closed oriented connected surface.
IntegralBasis tree_cotree(const SimplicialComplex& x) {
  const int nv = x.vertex_count();
  const int ne = x.count(1);
  const int nt = x.count(2);
  const IncidenceMatrix& d1 = x.boundary(1);
  const IncidenceMatrix& d2 = x.boundary(2);
  std::vector<std::vector<std::pair<int, int>>> vertex_edges(nv);
  for (int e = 0; e < ne; ++e)
    for (IncidenceMatrix::InnerIterator it(d1, e); it; ++it) vertex_edges[it.row()].push_back({e, it.value()});

  // Primal spanning tree with root paths P_v satisfying d P_v = v - root.
  std::vector<char> in_tree(ne, 0), seen(nv, 0);
  std::vector<std::map<int, int>> path(nv);
  std::deque<int> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (auto [e, cu] : vertex_edges[u]) {
      int v = -1, cv = 0;
      for (IncidenceMatrix::InnerIterator it(d1, e); it; ++it)
        if (it.row() != u) {
          v = it.row();
          cv = it.value();
        }
      if (seen[v]) continue;
      seen[v] = 1;
      in_tree[e] = 1;
      path[v] = path[u];
      path[v][e] += cv;
      queue.push_back(v);
    }
  }

  // Dual spanning tree over the remaining edges.
  std::vector<int> cotree_edge(nt, -1), order;
  std::vector<char> in_cotree(ne, 0), tseen(nt, 0);
  std::vector<std::vector<int>> tri_edges(nt);
  for (int t = 0; t < nt; ++t)
    for (IncidenceMatrix::InnerIterator it(d2, t); it; ++it) tri_edges[t].push_back(it.row());
  queue = {0};
  tseen[0] = 1;
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    order.push_back(t);
    for (int e : tri_edges[t]) {
      if (in_tree[e]) continue;
      for (int s : x.cofaces(1, e)) {
        if (tseen[s]) continue;
        tseen[s] = 1;
        cotree_edge[s] = e;
        in_cotree[e] = 1;
        queue.push_back(s);
      }
    }
  }

  std::vector<int> loops;
  for (int e = 0; e < ne; ++e)
    if (!in_tree[e] && !in_cotree[e]) loops.push_back(e);

  std::vector<IntegerVector> cyc, coc;
  for (int e : loops) {
    IntegerVector c(ne, BigInt(0));
    c[e] = 1;
    for (IncidenceMatrix::InnerIterator it(d1, e); it; ++it)
      for (const auto& [f, a] : path[it.row()]) c[f] -= BigInt(it.value() * a);
    cyc.push_back(std::move(c));

    IntegerVector phi(ne, BigInt(0));
    phi[e] = 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int t = *it;
      const int pe = cotree_edge[t];
      if (pe < 0) continue;
      BigInt sum = 0;
      int coeff = 0;
      for (IncidenceMatrix::InnerIterator jt(d2, t); jt; ++jt) {
        if (jt.row() == pe) coeff = jt.value();
        else sum += BigInt(jt.value()) * phi[jt.row()];
      }
      phi[pe] = -sum * coeff;
    }
    coc.push_back(std::move(phi));
  }
  return IntegralBasis{1, IntegerMatrix::from_columns(ne, cyc), IntegerMatrix::from_columns(ne, coc)};
}

}  // namespace

IntegralBasis integral_basis(const SimplicialComplex& x, int k) {
  if (k < 0 || k > x.dim()) fail(ErrorCode::kDegreeOutOfRange, "homology degree out of range");
  const SimplicialComplex* root = root_of(x);
  if (root != &x) return transported(x, *root, k);
  const int size = x.count(k) + (k < x.dim() ? x.count(k + 1) : 0);
  if (size <= kDenseLimit) return from_homology(x, k);
  if (!connected(x)) return from_homology(x, k);
  const int n = x.dim();
  if (k == 0) {
    IntegerVector v(x.vertex_count(), BigInt(0));
    v[0] = 1;
    IntegerVector ones(x.vertex_count(), BigInt(1));
    return IntegralBasis{0, IntegerMatrix::from_columns(x.vertex_count(), std::vector<IntegerVector>{v}),
                         IntegerMatrix::from_columns(x.vertex_count(), std::vector<IntegerVector>{ones})};
  }
  if (fundamental_cycle_exists(x)) {
    if (k == n) {
      IntegerVector fund(x.count(n), BigInt(1));
      IntegerVector dual(x.count(n), BigInt(0));
      dual[0] = 1;
      return IntegralBasis{n, IntegerMatrix::from_columns(x.count(n), std::vector<IntegerVector>{fund}),
                           IntegerMatrix::from_columns(x.count(n), std::vector<IntegerVector>{dual})};
    }
    if (n == 2 && k == 1) return tree_cotree(x);
  }
  return from_homology(x, k);
}

}  // namespace simchar
