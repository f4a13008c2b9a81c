// Core domain types for band-joins: join specs, tuples, boxes, and the
// geometric predicates the partitioners and the executor are built on.
//
// Conventions (pinned once, relied on everywhere):
//  - Partition boxes are half-open per dimension: [lo, hi). A tuple whose
//    coordinate equals a split value belongs to the right child.
//  - eps-ranges are closed boxes [a_i - eps_i, a_i + eps_i] (the join
//    predicate uses <=). rect_intersects() treats its second argument as
//    closed: a range touching a partition's lo edge intersects it, a range
//    touching the hi edge does not (the neighbor owns that edge).

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bandjoin {

using std::size_t;

enum class RelationTag : uint8_t { S, T };

inline const char* to_string(RelationTag tag) {
  return tag == RelationTag::S ? "S" : "T";
}

/// Join condition plus the load weights of the per-worker load model
/// L_i = beta2 * I_i + beta3 * O_i.
struct BandSpec {
  int d = 1;
  std::vector<double> eps;
  double beta2 = 4.0;
  double beta3 = 1.0;

  BandSpec() = default;
  BandSpec(int dims, std::vector<double> widths, double b2, double b3)
      : d(dims), eps(std::move(widths)), beta2(b2), beta3(b3) {
    validate();
  }

  void validate() const {
    if (d <= 0) throw std::invalid_argument("BandSpec: d must be positive");
    if (static_cast<int>(eps.size()) != d)
      throw std::invalid_argument("BandSpec: len(eps) != d");
    for (double e : eps)
      if (!(e >= 0.0)) throw std::invalid_argument("BandSpec: eps must be >= 0");
    if (beta2 < 0.0 || beta3 < 0.0)
      throw std::invalid_argument("BandSpec: load weights must be >= 0");
    if (beta2 == 0.0 && beta3 == 0.0)
      throw std::invalid_argument("BandSpec: beta2 and beta3 cannot both be 0");
  }
};

struct Tuple {
  std::vector<double> coords;
  uint64_t id = 0;
};

struct Relation {
  int d = 1;
  std::vector<Tuple> tuples;

  size_t size() const { return tuples.size(); }
};

/// Axis-aligned box. Used both for half-open partition rects and (by the
/// eps_range() convention above) for closed ranges.
struct Rect {
  std::vector<double> lo;
  std::vector<double> hi;

  static Rect whole(int d) {
    Rect r;
    r.lo.assign(d, -std::numeric_limits<double>::infinity());
    r.hi.assign(d, std::numeric_limits<double>::infinity());
    return r;
  }

  int dims() const { return static_cast<int>(lo.size()); }

  /// Half-open membership: lo_i <= x_i < hi_i in every dimension.
  bool contains(const std::vector<double>& x) const {
    for (size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] >= hi[i]) return false;
    return true;
  }

  bool bounded() const {
    for (size_t i = 0; i < lo.size(); ++i)
      if (std::numeric_limits<double>::infinity() == hi[i] ||
          -std::numeric_limits<double>::infinity() == lo[i] ||
          hi[i] - lo[i] == std::numeric_limits<double>::infinity())
        return false;
    return true;
  }
};

/// Band predicate: |a_i - b_i| <= eps_i in every dimension. Symmetric.
bool joins(const Tuple& a, const Tuple& b, const BandSpec& spec);

/// Closed box [t_i - eps_i, t_i + eps_i] per dimension.
Rect eps_range(const Tuple& t, const BandSpec& spec);

/// Does half-open partition box intersect the closed range?
/// Non-empty overlap per dimension: range.lo < box.hi and range.hi >= box.lo.
bool rect_intersects(const Rect& box, const Rect& closed_range);

/// Closed membership: lo_i <= x_i <= hi_i (for eps-ranges).
bool closed_contains(const Rect& closed_range, const std::vector<double>& x);

/// A partition is "small" when bounded and below twice the band width in
/// every dimension; dimensions with eps_i = 0 can always be split further,
/// so any such dimension makes the partition not small.
bool is_small(const Rect& p, const BandSpec& spec);

}  // namespace bandjoin
