#include "bandjoin/geometry.hpp"

#include <cmath>

namespace bandjoin {

bool joins(const Tuple& a, const Tuple& b, const BandSpec& spec) {
  if (static_cast<int>(a.coords.size()) != spec.d ||
      static_cast<int>(b.coords.size()) != spec.d)
    throw std::invalid_argument("joins: tuple dimensionality mismatch");
  for (int i = 0; i < spec.d; ++i)
    if (std::abs(a.coords[i] - b.coords[i]) > spec.eps[i]) return false;
  return true;
}

Rect eps_range(const Tuple& t, const BandSpec& spec) {
  if (static_cast<int>(t.coords.size()) != spec.d)
    throw std::invalid_argument("eps_range: tuple dimensionality mismatch");
  Rect r;
  r.lo.resize(spec.d);
  r.hi.resize(spec.d);
  for (int i = 0; i < spec.d; ++i) {
    r.lo[i] = t.coords[i] - spec.eps[i];
    r.hi[i] = t.coords[i] + spec.eps[i];
  }
  return r;
}

bool rect_intersects(const Rect& box, const Rect& closed_range) {
  if (box.lo.size() != closed_range.lo.size())
    throw std::invalid_argument("rect_intersects: dimensionality mismatch");
  for (size_t i = 0; i < box.lo.size(); ++i) {
    if (!(closed_range.lo[i] < box.hi[i])) return false;
    if (!(closed_range.hi[i] >= box.lo[i])) return false;
  }
  return true;
}

bool closed_contains(const Rect& closed_range, const std::vector<double>& x) {
  for (size_t i = 0; i < closed_range.lo.size(); ++i)
    if (x[i] < closed_range.lo[i] || x[i] > closed_range.hi[i]) return false;
  return true;
}

bool is_small(const Rect& p, const BandSpec& spec) {
  if (!p.bounded()) return false;
  for (int i = 0; i < spec.d; ++i) {
    if (spec.eps[i] == 0.0) return false;
    if (!(p.hi[i] - p.lo[i] < 2.0 * spec.eps[i])) return false;
  }
  return true;
}

}  // namespace bandjoin
