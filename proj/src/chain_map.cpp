#include "deepho/chain_map.hpp"

#include <algorithm>
#include <map>

#include "deepho/errors.hpp"

namespace deepho {

int latticeDistance(const Point& a, const Point& b) {
  int up = 0, down = 0;
  for (int i = 0; i < 3; ++i) {
    up = std::max(up, b[i] - a[i]);
    down = std::max(down, a[i] - b[i]);
  }
  return up + down;
}

SparseIntMatrix boundaryMatrixOf(const SimplicialComplex& X, int d) {
  require(d >= 1 && d <= X.dim(), "boundary matrix degree out of range");
  std::vector<SparseIntMatrix::Column> cols(X.count(d));
  for (int id = 0; id < X.count(d); ++id) {
    auto f = X.facets(d, id);
    auto& col = cols[id];
    for (int i = 0; i <= d; ++i) col.push_back({f[i], Integer(i % 2 ? -1 : 1)});
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.row < b.row; });
  }
  return SparseIntMatrix::fromColumns(X.count(d - 1), std::move(cols));
}

Chain GradedChainMap::apply(const Chain& c) const {
  const int td = targetDegree(c.dim);
  if (c.dim < 0 || c.dim >= static_cast<int>(components.size())) return makeChain(td, {});
  const auto& M = components[c.dim];
  std::vector<std::pair<int, Integer>> t;
  for (const auto& [id, v] : c.terms) {
    require(id >= 0 && id < M.cols(), "chain term outside the source complex");
    for (const auto& e : M.column(id)) t.emplace_back(e.row, e.value * v);
  }
  return makeChain(td, std::move(t));
}

Chain GradedChainMap::pullback(const Chain& cochain) const {
  require(!fromCochains, "pullback needs a covariant chain map");
  if (cochain.dim < 0 || cochain.dim >= static_cast<int>(components.size())) return makeChain(cochain.dim, {});
  const auto& M = components[cochain.dim];
  std::vector<std::pair<int, Integer>> t;
  for (int s = 0; s < M.cols(); ++s) {
    Integer acc = 0;
    for (const auto& e : M.column(s)) {
      Integer phi = cochain.coefficient(e.row);
      if (phi != 0) acc += phi * e.value;
    }
    if (acc != 0) t.emplace_back(s, acc);
  }
  return makeChain(cochain.dim, std::move(t));
}

ChainMapFn GradedChainMap::asFunction() const {
  return [this](const Chain& c) { return apply(c); };
}

bool verifyChainMapLaw(const GradedChainMap& f, const Subcomplex* relativeTo) {
  const int top = static_cast<int>(f.components.size()) - 1;
  if (!f.fromCochains) {
    for (int d = 1; d <= top && d <= f.source->dim(); ++d) {
      auto rhs = f.components[d - 1] * boundaryMatrixOf(*f.source, d);
      auto lhs = d <= f.target->dim() ? boundaryMatrixOf(*f.target, d) * f.components[d]
                                      : SparseIntMatrix(rhs.rows(), rhs.cols());
      if (!(lhs == rhs)) return false;
    }
    return true;
  }
  // boundary P_k(e_t) = P_{k+1}(delta e_t) for t off the relative subcomplex
  for (int k = 0; k < top; ++k) {
    const int j = f.targetDegree(k);
    if (j < 1) continue;
    auto dT = boundaryMatrixOf(*f.target, j);
    auto delta = boundaryMatrixOf(*f.source, k + 1).transpose();
    auto lhs = dT * f.components[k];
    auto rhs = f.components[k + 1] * delta;
    for (int t = 0; t < lhs.cols(); ++t) {
      if (relativeTo && relativeTo->contains(k, t)) continue;
      if (lhs.column(t).size() != rhs.column(t).size()) return false;
      for (std::size_t i = 0; i < lhs.column(t).size(); ++i)
        if (lhs.column(t)[i].row != rhs.column(t)[i].row || lhs.column(t)[i].value != rhs.column(t)[i].value)
          return false;
    }
  }
  return true;
}

int measuredDisplacement(const GradedChainMap& f) {
  int worst = 0;
  for (int d = 0; d < static_cast<int>(f.components.size()); ++d) {
    const int td = f.targetDegree(d);
    const auto& M = f.components[d];
    for (int s = 0; s < M.cols(); ++s) {
      auto sv = f.source->vertices(d, s);
      for (const auto& e : M.column(s)) {
        for (int v : f.target->vertices(td, e.row)) {
          int best = -1;
          for (int u : sv) {
            int dd = latticeDistance(f.source->point(u), f.target->point(v));
            if (best < 0 || dd < best) best = dd;
          }
          worst = std::max(worst, best);
        }
      }
    }
  }
  return worst;
}

Chain fundamentalCycle(const Window& W, int orientation) {
  require(orientation == 1 || orientation == -1, "orientation must be +1 or -1");
  const auto& X = *W.complex;
  std::vector<std::pair<int, Integer>> t;
  for (int id = 0; id < X.count(W.n); ++id) t.emplace_back(id, Integer(orientation * topSimplexOrientation(X, id)));
  return makeChain(W.n, std::move(t));
}

int capSign(int k) { return (k * (k + 1) / 2) % 2 ? -1 : 1; }

GradedChainMap capWithFundamentalCycle(const Window& W, int orientation) {
  require(orientation == 1 || orientation == -1, "orientation must be +1 or -1");
  const auto& X = *W.complex;
  const int n = W.n;
  GradedChainMap P;
  P.source = P.target = W.complex;
  P.fromCochains = true;
  P.n = n;
  P.declaredDisplacement = 1;
  std::vector<std::vector<Triplet>> trip(n + 1);
  for (int id = 0; id < X.count(n); ++id) {
    const int eps = orientation * topSimplexOrientation(X, id);
    auto v = X.vertices(n, id);
    for (int k = 0; k <= n; ++k) {
      int front = X.find(k, v.subspan(0, k + 1));
      int back = X.find(n - k, v.subspan(k));
      trip[k].push_back({back, front, Integer(capSign(k) * eps)});
    }
  }
  for (int k = 0; k <= n; ++k) P.components.push_back(SparseIntMatrix::fromTriplets(X.count(n - k), X.count(k), trip[k]));
  return P;
}

}  // namespace deepho
