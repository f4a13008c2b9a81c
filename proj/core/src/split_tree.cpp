#include "bandjoin/split_tree.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <set>

namespace bandjoin {

namespace {

using nlohmann::json;

json bound_to_json(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  return v;
}

double bound_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("split tree: bad bound '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

bool SplitTree::validate() const {
  if (nodes.empty()) return false;
  std::set<int> ids;
  // Recompute every node's rect from the root and check leaf consistency.
  struct Item {
    int node;
    Rect rect;
  };
  std::vector<Item> stack{{0, Rect::whole(find_leaf_dims())}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const Node& n = nodes[it.node];
    if (n.isLeaf) {
      if (n.leafId < 0 || !ids.insert(n.leafId).second) return false;
      if (n.rect.lo != it.rect.lo || n.rect.hi != it.rect.hi) return false;
      if (n.rows < 1 || n.cols < 1) return false;
      if (!n.small && (n.rows != 1 || n.cols != 1)) return false;
    } else {
      if (n.left < 0 || n.right < 0 ||
          n.left >= static_cast<int>(nodes.size()) ||
          n.right >= static_cast<int>(nodes.size()))
        return false;
      if (!(it.rect.lo[n.dim] < n.value && n.value < it.rect.hi[n.dim]))
        return false;
      Rect l = it.rect, r = it.rect;
      l.hi[n.dim] = n.value;
      r.lo[n.dim] = n.value;
      stack.push_back({n.left, std::move(l)});
      stack.push_back({n.right, std::move(r)});
    }
  }
  if (static_cast<int>(ids.size()) != numLeaves) return false;
  return *ids.begin() == 0 && *ids.rbegin() == numLeaves - 1;
}

int SplitTree::find_leaf_dims() const {
  for (const Node& n : nodes)
    if (n.isLeaf) return n.rect.dims();
  return 0;
}

std::string to_json(const SplitTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    json jn;
    if (n.isLeaf) {
      jn["type"] = "leaf";
      jn["id"] = n.leafId;
      json lo = json::array(), hi = json::array();
      for (double v : n.rect.lo) lo.push_back(bound_to_json(v));
      for (double v : n.rect.hi) hi.push_back(bound_to_json(v));
      jn["lo"] = std::move(lo);
      jn["hi"] = std::move(hi);
      jn["mode"] = n.small ? "small" : "regular";
      jn["rows"] = n.rows;
      jn["cols"] = n.cols;
    } else {
      jn["type"] = "inner";
      jn["dim"] = n.dim;
      jn["value"] = n.value;
      jn["split"] = n.kind == SplitKind::TSplit ? "T" : "S";
      jn["left"] = n.left;
      jn["right"] = n.right;
    }
    nodes.push_back(std::move(jn));
  }
  json root;
  root["kind"] = "recpart";
  root["numLeaves"] = tree.numLeaves;
  root["nodes"] = std::move(nodes);
  return root.dump(2);
}

SplitTree split_tree_from_json(const std::string& text) {
  json root = json::parse(text);
  if (root.at("kind").get<std::string>() != "recpart")
    throw std::runtime_error("split tree: kind is not 'recpart'");
  SplitTree tree;
  tree.numLeaves = root.at("numLeaves").get<int>();
  for (const json& jn : root.at("nodes")) {
    SplitTree::Node n;
    const std::string type = jn.at("type").get<std::string>();
    if (type == "leaf") {
      n.isLeaf = true;
      n.leafId = jn.at("id").get<int>();
      for (const json& v : jn.at("lo")) n.rect.lo.push_back(bound_from_json(v));
      for (const json& v : jn.at("hi")) n.rect.hi.push_back(bound_from_json(v));
      n.small = jn.at("mode").get<std::string>() == "small";
      n.rows = jn.at("rows").get<int>();
      n.cols = jn.at("cols").get<int>();
    } else if (type == "inner") {
      n.isLeaf = false;
      n.dim = jn.at("dim").get<int>();
      n.value = jn.at("value").get<double>();
      n.kind = jn.at("split").get<std::string>() == "T" ? SplitKind::TSplit
                                                        : SplitKind::SSplit;
      n.left = jn.at("left").get<int>();
      n.right = jn.at("right").get<int>();
    } else {
      throw std::runtime_error("split tree: unknown node type '" + type + "'");
    }
    tree.nodes.push_back(std::move(n));
  }
  return tree;
}

}  // namespace bandjoin
