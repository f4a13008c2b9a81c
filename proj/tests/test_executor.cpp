#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bandjoin/datagen.hpp"
#include "bandjoin/executor.hpp"
#include "helpers.hpp"

using namespace bandjoin;
using namespace bandjoin::testing;

namespace {

std::vector<std::pair<uint32_t, uint32_t>> nested_loop(
    const std::vector<Tuple>& Sp, const std::vector<Tuple>& Tp,
    const BandSpec& spec) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (uint32_t i = 0; i < Sp.size(); ++i)
    for (uint32_t j = 0; j < Tp.size(); ++j)
      if (joins(Sp[i], Tp[j], spec)) out.emplace_back(i, j);
  return out;
}

template <typename P>
std::vector<P> sorted(std::vector<P> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Relation random_rel(size_t n, int d, uint64_t seed, double hi) {
  GenSpec g;
  g.kind = GenSpec::Kind::Uniform;
  g.n = n;
  g.d = d;
  g.seed = seed;
  g.hi = hi;
  return gen(g);
}

}  // namespace

TEST_CASE("assign_workers: LPT makespans on the worked examples") {
  auto loads = [](std::initializer_list<double> ls) {
    std::vector<DestLoad> out;
    for (double l : ls) out.push_back({l, l, 0});
    return out;
  };
  WorkerAssignment a = assign_workers(loads({3, 3, 3}), 3, AssignStrategy::LPT);
  CHECK_EQ(a.load[a.maxWorker], 3.0);

  WorkerAssignment b = assign_workers(loads({6, 3, 3}), 2, AssignStrategy::LPT);
  CHECK_EQ(b.load[b.maxWorker], 6.0);

  // LPT places 5|4, 3 -> 7, 3 -> 8, 3 -> 10: makespan 10 (optimum is 9).
  WorkerAssignment c =
      assign_workers(loads({5, 4, 3, 3, 3}), 2, AssignStrategy::LPT);
  CHECK_EQ(c.load[c.maxWorker], 10.0);

  WorkerAssignment one = assign_workers(loads({2, 7, 1}), 1, AssignStrategy::LPT);
  CHECK_EQ(one.load[0], 10.0);
  for (int w : one.workerOf) CHECK_EQ(w, 0);
}

TEST_CASE("assign_workers: random strategy is a valid seeded assignment") {
  std::vector<DestLoad> dests(100, DestLoad{1, 1, 0});
  WorkerAssignment a = assign_workers(dests, 7, AssignStrategy::Random, 5);
  WorkerAssignment b = assign_workers(dests, 7, AssignStrategy::Random, 5);
  CHECK_EQ(a.workerOf, b.workerOf);
  double total = 0;
  for (double l : a.load) total += l;
  CHECK_EQ(total, 100.0);
  for (int w : a.workerOf) {
    CHECK(w >= 0);
    CHECK(w < 7);
  }
}

TEST_CASE("local_band_join: the worked example") {
  std::vector<Tuple> Sp;
  for (double v : {1, 2, 3, 5, 6, 8, 9, 10})
    Sp.push_back(tup({v}, Sp.size()));
  std::vector<Tuple> Tp;
  for (double v : {1, 5, 6, 10}) Tp.push_back(tup({v}, Tp.size()));
  BandSpec spec = spec1(1.0);
  auto got = sorted(local_band_join(Sp, Tp, spec));
  auto want = sorted(nested_loop(Sp, Tp, spec));
  CHECK_EQ(got, want);
  CHECK_EQ(got.size(), 8);

  CHECK(local_band_join(Sp, {}, spec).empty());
  CHECK(local_band_join({}, Tp, spec).empty());
}

TEST_CASE("local_band_join: multiset-equal to nested loop in 3D") {
  BandSpec spec(3, {0.05, 0.2, 0.5}, 4.0, 1.0);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Relation S = random_rel(200, 3, seed * 2 + 1, 1.0);
    Relation T = random_rel(200, 3, seed * 2 + 2, 1.0);
    CHECK_EQ(sorted(local_band_join(S.tuples, T.tuples, spec)),
             sorted(nested_loop(S.tuples, T.tuples, spec)));
  }
}

TEST_CASE("local_band_join: eps_1 = 0 equi path, including -0.0") {
  BandSpec spec(2, {0.0, 0.3}, 4.0, 1.0);
  std::vector<Tuple> Sp, Tp;
  std::vector<double> vals = {0.0, -0.0, 1.0, 1.0, 2.5};
  for (double v : vals) {
    Sp.push_back(tup({v, v / 2}, Sp.size()));
    Tp.push_back(tup({v, v / 2 + 0.2}, Tp.size()));
  }
  CHECK_EQ(sorted(local_band_join(Sp, Tp, spec)),
           sorted(nested_loop(Sp, Tp, spec)));
}

TEST_CASE("oracle_join: degenerate bands and the size bound") {
  Relation S = rel1d({1, 1, 2});
  Relation T = rel1d({1, 3}, 10);
  CHECK_EQ(oracle_join(S, T, spec1(0.0)).size(), 2);  // both S copies of 1

  BandSpec inf = spec1(std::numeric_limits<double>::infinity());
  CHECK_EQ(oracle_join(S, T, inf).size(), 6);  // Cartesian

  Relation far = rel1d({100, 200});
  CHECK(oracle_join(S, far, spec1(1.0)).empty());

  Relation big;
  big.d = 1;
  big.tuples.resize(20000, {{0.0}, 0});
  CHECK_THROWS_AS(oracle_join(big, big, spec1(1.0)), std::invalid_argument);
}

TEST_CASE("densest_eps_region") {
  Relation point;
  point.d = 1;
  for (int i = 0; i < 1000; ++i) point.tuples.push_back({{5.0}, uint64_t(i)});
  CHECK_EQ(densest_eps_region(point, spec1(0.1), point.size(), 1), 1000);

  Relation clusters;
  clusters.d = 1;
  for (int i = 0; i < 500; ++i) clusters.tuples.push_back({{0.0}, uint64_t(i)});
  for (int i = 0; i < 300; ++i)
    clusters.tuples.push_back({{100.0}, uint64_t(500 + i)});
  CHECK_EQ(densest_eps_region(clusters, spec1(1.0), clusters.size(), 1), 500);

  // Uniform data: about 2 * eps * n / range, anchored scan is approximate.
  Relation u = random_rel(10000, 1, 3, 100.0);
  size_t densest = densest_eps_region(u, spec1(1.0), u.size(), 1);
  CHECK(densest > 120);
  CHECK(densest < 320);
}

TEST_CASE("run_plan: single-leaf plan equals the oracle, bounds hold") {
  Relation S = random_rel(300, 2, 1, 1.0);
  Relation T = random_rel(300, 2, 2, 1.0);
  BandSpec spec(2, {0.05, 0.1}, 4.0, 1.0);
  Plan plan = Plan::recpart(SplitTree::single_leaf(2));
  RunResult res = run_plan(S, T, plan, spec, 4, 0);

  auto want = oracle_join(S, T, spec);
  auto got = res.output;
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  CHECK_EQ(got, want);

  CHECK_EQ(res.metrics.I, 600);
  CHECK_EQ(res.metrics.dupOverhead, 0.0);
  CHECK_EQ(res.metrics.outputSize, want.size());
  CHECK(res.metrics.Lm >= res.metrics.L0);
  // Everything lands on one worker: Lm is the whole load, overhead w - 1.
  CHECK(res.metrics.loadOverhead == doctest::Approx(3.0));
  double maxLoad = *std::max_element(res.metrics.workerLoads.begin(),
                                     res.metrics.workerLoads.end());
  CHECK_EQ(res.metrics.Lm, maxLoad);
}

TEST_CASE("run_plan: zero-dup splits balance the example output 4/4") {
  Relation S = rel1d({1, 2, 3, 5, 6, 8, 9, 10});
  Relation T = rel1d({1, 5, 6, 10}, 100);
  BandSpec spec = spec1(1.0);

  // T-splits at 3 and 8 duplicate nothing; outputs per leaf are 2, 4, 2.
  SplitTree t = SplitTree::single_leaf(1);
  SplitTree::Node top, lowInner;
  top.isLeaf = false;
  top.dim = 0;
  top.value = 3.0;
  top.kind = SplitKind::TSplit;
  top.left = 1;
  top.right = 2;
  lowInner.isLeaf = false;
  lowInner.dim = 0;
  lowInner.value = 8.0;
  lowInner.kind = SplitKind::TSplit;
  lowInner.left = 3;
  lowInner.right = 4;
  SplitTree::Node leafL = t.nodes[0], leafM = t.nodes[0], leafR = t.nodes[0];
  leafL.rect.hi[0] = 3;
  leafL.leafId = 0;
  leafM.rect.lo[0] = 3;
  leafM.rect.hi[0] = 8;
  leafM.leafId = 1;
  leafR.rect.lo[0] = 8;
  leafR.leafId = 2;
  t.nodes = {top, leafL, lowInner, leafM, leafR};
  t.numLeaves = 3;
  REQUIRE(t.validate());

  RunResult res = run_plan(S, T, Plan::recpart(t), spec, 2, 0);
  CHECK_EQ(res.metrics.I, 12);
  CHECK_EQ(res.metrics.dupOverhead, 0.0);
  CHECK_EQ(res.metrics.outputSize, 8);
  // LPT pairs the two light leaves (loads 14 and 18) against the heavy
  // center (24); the max-load worker holds outputs 2 + 2.
  CHECK_EQ(res.metrics.Om, 4);
  CHECK_EQ(res.metrics.Im, 7);
  CHECK_EQ(res.metrics.Lm, 32.0);
}

TEST_CASE("run_plan: all plan kinds verified against the oracle") {
  Relation S = random_rel(250, 1, 21, 10.0);
  Relation T = random_rel(250, 1, 22, 10.0);
  BandSpec spec = spec1(0.2);
  auto want = oracle_join(S, T, spec);
  std::sort(want.begin(), want.end());

  std::vector<Plan> plans;
  plans.push_back(Plan::recpart(SplitTree::single_leaf(1)));
  plans.push_back(Plan::one_bucket(choose_one_bucket_shape(6, 250, 250)));
  plans.push_back(Plan::grid_plan(make_grid_plan(S, T, spec, 2)));
  plans.push_back(Plan::quantile(40));
  for (const Plan& plan : plans) {
    RunResult res = run_plan(S, T, plan, spec, 6, 3);
    auto got = res.output;
    std::sort(got.begin(), got.end());
    CHECK_EQ(got, want);
    CHECK(res.metrics.I >= 500);
    CHECK(res.metrics.Lm >= res.metrics.L0 - 1e-9);
    CHECK(res.metrics.dupOverhead >= 0.0);
  }
}

TEST_CASE("metrics json and csv are stable") {
  JoinMetrics m;
  m.I = 100;
  m.Im = 30;
  m.Om = 7;
  m.Lm = 127.0;
  m.L0 = 100.0;
  m.outputSize = 20;
  m.dupOverhead = 0.25;
  m.loadOverhead = 0.27;
  m.workerLoads = {127.0, 93.0};
  std::string a = metrics_to_json("demo", m);
  CHECK_EQ(a, metrics_to_json("demo", m));
  CHECK(a.find("\"plan\": \"demo\"") != std::string::npos);
  CHECK(a.find("\"I\": 100") != std::string::npos);
  std::string row = metrics_csv_row("demo", m);
  std::string header = metrics_csv_header();
  CHECK_EQ(row.substr(0, 5), "demo,");
  CHECK_EQ(std::count(row.begin(), row.end(), ','),
           std::count(header.begin(), header.end(), ','));
}
