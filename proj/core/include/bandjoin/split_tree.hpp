// Structural split tree: inner nodes carry (dimension, value, split kind),
// leaves are either regular partitions or small partitions refined by an
// internal r x c 1-Bucket grid. By convention the left child satisfies
// A_dim < value.

#pragma once

#include <string>
#include <vector>

#include "bandjoin/geometry.hpp"

namespace bandjoin {

enum class SplitKind : uint8_t { TSplit, SSplit };

struct SplitTree {
  struct Node {
    bool isLeaf = true;
    // Inner fields.
    int dim = 0;
    double value = 0.0;
    SplitKind kind = SplitKind::TSplit;
    int left = -1;
    int right = -1;
    // Leaf fields.
    int leafId = -1;
    Rect rect;
    bool small = false;
    int rows = 1;
    int cols = 1;
  };

  std::vector<Node> nodes;  // nodes[0] is the root
  int numLeaves = 0;

  static SplitTree single_leaf(int d) {
    SplitTree t;
    Node root;
    root.isLeaf = true;
    root.leafId = 0;
    root.rect = Rect::whole(d);
    t.nodes.push_back(std::move(root));
    t.numLeaves = 1;
    return t;
  }

  bool validate() const;  // leaf rects tile the root, ids are 0..numLeaves-1
  int find_leaf_dims() const;
};

std::string to_json(const SplitTree& tree);
SplitTree split_tree_from_json(const std::string& text);

}  // namespace bandjoin
