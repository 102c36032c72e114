#pragma once

#include <functional>
#include <memory>

#include "deepho/grid_complex.hpp"

namespace fixture {

using namespace deepho;

// Full subcomplex spanned by the window vertices satisfying `pred`.
inline std::shared_ptr<const Subcomplex> spanned(const Window& W, const std::function<bool(const Point&)>& pred) {
  std::vector<char> mask(W.complex->count(0), 0);
  for (int v = 0; v < W.complex->count(0); ++v) mask[v] = pred(W.complex->point(v));
  return std::make_shared<const Subcomplex>(Subcomplex::spannedBy(W.complex, mask));
}

inline std::shared_ptr<const Subcomplex> zAxis(const Window& W) {
  return spanned(W, [](const Point& p) { return p[0] == 0 && p[1] == 0; });
}
inline std::shared_ptr<const Subcomplex> planeX0(const Window& W) {
  return spanned(W, [](const Point& p) { return p[0] == 0; });
}
inline std::shared_ptr<const Subcomplex> planeY0(const Window& W) {
  return spanned(W, [](const Point& p) { return p[1] == 0; });
}
inline std::shared_ptr<const Subcomplex> halfPlane(const Window& W) {
  return spanned(W, [](const Point& p) { return p[1] == 0 && p[0] >= 0; });
}
inline std::shared_ptr<const Subcomplex> whole(const Window& W) {
  return std::make_shared<const Subcomplex>(W.full());
}
inline std::shared_ptr<const Subcomplex> empty(const Window& W) {
  return std::make_shared<const Subcomplex>(Subcomplex(W.complex));
}

}  // namespace fixture
