// Routes input tuples through a split tree to their destination partitions.
// At an inner node of the opposite kind the tuple follows the single child
// containing it; at a matching-kind node it is copied to every child whose
// rect intersects its eps-range. Small leaves place S-tuples on one hashed
// row (all columns) and T-tuples on one hashed column (all rows).

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bandjoin/geometry.hpp"
#include "bandjoin/split_tree.hpp"

namespace bandjoin {

struct Destination {
  int leafId = 0;
  int row = 0;  // always 0 for regular leaves
  int col = 0;

  bool operator==(const Destination&) const = default;
  bool operator<(const Destination& o) const {
    if (leafId != o.leafId) return leafId < o.leafId;
    if (row != o.row) return row < o.row;
    return col < o.col;
  }
};

std::vector<Destination> assign_input(const Tuple& t, RelationTag tag,
                                      const SplitTree& tree,
                                      const BandSpec& spec, uint64_t seed);

/// One destination partition's input, as indices into S and T.
struct DestinationInput {
  Destination dest;
  std::vector<uint32_t> sIdx;
  std::vector<uint32_t> tIdx;
};

struct RoutedInput {
  std::vector<DestinationInput> destinations;  // sorted by Destination
  size_t totalInput = 0;                       // I: every tuple copy counted
};

RoutedInput route_all(const Relation& S, const Relation& T,
                      const SplitTree& tree, const BandSpec& spec,
                      uint64_t seed);

/// Generic variant used by the baseline partitioners: `destsOf` maps a tuple
/// to its destinations (identified by an opaque integer key).
RoutedInput route_with(
    const Relation& S, const Relation& T,
    const std::function<void(const Tuple&, RelationTag, std::vector<Destination>&)>&
        destsOf);

}  // namespace bandjoin
