#include "bandjoin/routing.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "bandjoin/rng.hpp"

namespace bandjoin {

namespace {

void leaf_destinations(const SplitTree::Node& leaf, const Tuple& t,
                       RelationTag tag, uint64_t seed,
                       std::vector<Destination>& out) {
  if (!leaf.small) {
    out.push_back({leaf.leafId, 0, 0});
    return;
  }
  uint64_t h = hash_mix(t.id, static_cast<uint64_t>(leaf.leafId), seed,
                        tag == RelationTag::S ? 0x5 : 0x7);
  if (tag == RelationTag::S) {
    int row = static_cast<int>(h % static_cast<uint64_t>(leaf.rows));
    for (int c = 0; c < leaf.cols; ++c) out.push_back({leaf.leafId, row, c});
  } else {
    int col = static_cast<int>(h % static_cast<uint64_t>(leaf.cols));
    for (int r = 0; r < leaf.rows; ++r) out.push_back({leaf.leafId, r, col});
  }
}

}  // namespace

std::vector<Destination> assign_input(const Tuple& t, RelationTag tag,
                                      const SplitTree& tree,
                                      const BandSpec& spec, uint64_t seed) {
  if (static_cast<int>(t.coords.size()) != spec.d)
    throw std::invalid_argument("assign_input: tuple dimensionality mismatch");
  std::vector<Destination> out;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const SplitTree::Node& n = tree.nodes[stack.back()];
    stack.pop_back();
    if (n.isLeaf) {
      leaf_destinations(n, t, tag, seed, out);
      continue;
    }
    const bool duplicating =
        (n.kind == SplitKind::TSplit && tag == RelationTag::T) ||
        (n.kind == SplitKind::SSplit && tag == RelationTag::S);
    const double x = t.coords[n.dim];
    if (duplicating) {
      // Closed eps-range vs half-open children along the split dimension.
      const double e = spec.eps[n.dim];
      if (x - e < n.value) stack.push_back(n.left);
      if (x + e >= n.value) stack.push_back(n.right);
    } else {
      stack.push_back(x < n.value ? n.left : n.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RoutedInput route_all(const Relation& S, const Relation& T,
                      const SplitTree& tree, const BandSpec& spec,
                      uint64_t seed) {
  spec.validate();
  return route_with(S, T,
                    [&](const Tuple& t, RelationTag tag,
                        std::vector<Destination>& out) {
                      out = assign_input(t, tag, tree, spec, seed);
                    });
}

RoutedInput route_with(
    const Relation& S, const Relation& T,
    const std::function<void(const Tuple&, RelationTag, std::vector<Destination>&)>&
        destsOf) {
  std::map<Destination, size_t> slots;
  RoutedInput routed;
  auto add = [&](const Destination& d) -> DestinationInput& {
    auto [it, inserted] = slots.try_emplace(d, routed.destinations.size());
    if (inserted) {
      routed.destinations.emplace_back();
      routed.destinations.back().dest = d;
    }
    return routed.destinations[it->second];
  };
  std::vector<Destination> dests;
  for (uint32_t i = 0; i < S.size(); ++i) {
    dests.clear();
    destsOf(S.tuples[i], RelationTag::S, dests);
    for (const Destination& d : dests) {
      add(d).sIdx.push_back(i);
      ++routed.totalInput;
    }
  }
  for (uint32_t i = 0; i < T.size(); ++i) {
    dests.clear();
    destsOf(T.tuples[i], RelationTag::T, dests);
    for (const Destination& d : dests) {
      add(d).tIdx.push_back(i);
      ++routed.totalInput;
    }
  }
  std::sort(routed.destinations.begin(), routed.destinations.end(),
            [](const DestinationInput& a, const DestinationInput& b) {
              return a.dest < b.dest;
            });
  return routed;
}

}  // namespace bandjoin
