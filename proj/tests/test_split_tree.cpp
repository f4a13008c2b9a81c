#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bandjoin/plan.hpp"
#include "bandjoin/split_tree.hpp"

using namespace bandjoin;

namespace {

// Root T-split at 5.5 over two regular leaves; left child is A_0 < 5.5.
SplitTree two_leaf_tree(double value = 5.5, SplitKind kind = SplitKind::TSplit) {
  SplitTree t = SplitTree::single_leaf(1);
  SplitTree::Node inner;
  inner.isLeaf = false;
  inner.dim = 0;
  inner.value = value;
  inner.kind = kind;
  inner.left = 1;
  inner.right = 2;
  SplitTree::Node left = t.nodes[0], right = t.nodes[0];
  left.leafId = 0;
  left.rect.hi[0] = value;
  right.leafId = 1;
  right.rect.lo[0] = value;
  t.nodes = {inner, left, right};
  t.numLeaves = 2;
  return t;
}

}  // namespace

TEST_CASE("single_leaf: valid tree over the whole space") {
  SplitTree t = SplitTree::single_leaf(3);
  CHECK(t.validate());
  CHECK_EQ(t.numLeaves, 1);
  CHECK_EQ(t.find_leaf_dims(), 3);
  CHECK_FALSE(t.nodes[0].rect.bounded());
}

TEST_CASE("validate: rects must tile, leaf ids must be dense") {
  SplitTree t = two_leaf_tree();
  CHECK(t.validate());

  SplitTree badRect = two_leaf_tree();
  badRect.nodes[1].rect.hi[0] = 6.0;  // disagrees with the split value
  CHECK_FALSE(badRect.validate());

  SplitTree dupIds = two_leaf_tree();
  dupIds.nodes[2].leafId = 0;
  CHECK_FALSE(dupIds.validate());

  SplitTree gapIds = two_leaf_tree();
  gapIds.nodes[2].leafId = 2;
  CHECK_FALSE(gapIds.validate());

  SplitTree smallShape = two_leaf_tree();
  smallShape.nodes[1].rows = 2;  // r > 1 on a regular leaf
  CHECK_FALSE(smallShape.validate());
}

TEST_CASE("json: bit-exact round-trip including infinities and small leaves") {
  SplitTree t = two_leaf_tree(0.1 + 0.2);  // value without a short decimal form
  t.nodes[2].small = false;
  std::string text = to_json(t);
  SplitTree back = split_tree_from_json(text);
  CHECK(back.validate());
  REQUIRE_EQ(back.nodes.size(), t.nodes.size());
  CHECK_EQ(back.nodes[0].value, t.nodes[0].value);
  CHECK_EQ(back.nodes[1].rect.lo[0], t.nodes[1].rect.lo[0]);
  CHECK_EQ(to_json(back), text);
}

TEST_CASE("json: rejects foreign documents") {
  CHECK_THROWS(split_tree_from_json("{\"kind\":\"grid\",\"numLeaves\":1}"));
  CHECK_THROWS(split_tree_from_json("not json"));
}

TEST_CASE("plan: every kind round-trips through the envelope") {
  Plan rp = Plan::recpart(two_leaf_tree());
  Plan rp2 = plan_from_json(to_json(rp));
  CHECK_EQ(rp2.kind, Plan::Kind::RecPart);
  CHECK_EQ(to_json(rp2), to_json(rp));

  Plan ob = Plan::one_bucket({5, 6});
  Plan ob2 = plan_from_json(to_json(ob));
  CHECK_EQ(ob2.kind, Plan::Kind::OneBucket);
  CHECK_EQ(ob2.oneBucket.r, 5);
  CHECK_EQ(ob2.oneBucket.c, 6);

  GridPlan g;
  g.j = 16;
  g.anchor = {1.0, -2.5};
  Plan gp = Plan::grid_plan(g);
  Plan gp2 = plan_from_json(to_json(gp));
  CHECK_EQ(gp2.kind, Plan::Kind::Grid);
  CHECK_EQ(gp2.grid.j, 16);
  CHECK_EQ(gp2.grid.anchor, g.anchor);

  Plan q = Plan::quantile(1000);
  Plan q2 = plan_from_json(to_json(q));
  CHECK_EQ(q2.kind, Plan::Kind::Quantile);
  CHECK_EQ(q2.sizePerBlock, 1000);
}
