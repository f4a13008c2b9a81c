#include "bandjoin/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "bandjoin/executor.hpp"
#include "bandjoin/rng.hpp"

namespace bandjoin {

OneBucketPlan choose_one_bucket_shape(int w, size_t nS, size_t nT) {
  if (w < 1) throw std::invalid_argument("choose_one_bucket_shape: w >= 1");
  int maxP = 0;
  for (int r = 1; r <= w; ++r) maxP = std::max(maxP, r * (w / r));

  OneBucketPlan best;
  double bestCost = std::numeric_limits<double>::infinity();
  int bestPref = 2;
  for (int r = 1; r <= w; ++r) {
    int c = w / r;
    if (r * c != maxP) continue;
    double cost = static_cast<double>(c) * static_cast<double>(nS) +
                  static_cast<double>(r) * static_cast<double>(nT);
    int pref = r <= c ? 0 : 1;
    if (cost < bestCost || (cost == bestCost && pref < bestPref)) {
      bestCost = cost;
      bestPref = pref;
      best = {r, c};
    }
  }
  return best;
}

std::vector<Destination> one_bucket_route(const Tuple& t, RelationTag tag,
                                          const OneBucketPlan& plan,
                                          uint64_t seed) {
  std::vector<Destination> out;
  uint64_t h = hash_mix(t.id, 0, seed, tag == RelationTag::S ? 0x5 : 0x7);
  if (tag == RelationTag::S) {
    int row = static_cast<int>(h % static_cast<uint64_t>(plan.r));
    for (int c = 0; c < plan.c; ++c) out.push_back({0, row, c});
  } else {
    int col = static_cast<int>(h % static_cast<uint64_t>(plan.c));
    for (int r = 0; r < plan.r; ++r) out.push_back({0, r, col});
  }
  return out;
}

RoutedInput one_bucket_route_all(const Relation& S, const Relation& T,
                                 const OneBucketPlan& plan, uint64_t seed) {
  return route_with(S, T,
                    [&](const Tuple& t, RelationTag tag,
                        std::vector<Destination>& out) {
                      out = one_bucket_route(t, tag, plan, seed);
                    });
}

namespace {

void check_grid_spec(const BandSpec& spec) {
  for (double e : spec.eps)
    if (e <= 0.0)
      throw std::invalid_argument("grid: band width must be > 0 per dimension");
}

int64_t cell_index(double x, double anchor, double width) {
  return static_cast<int64_t>(std::floor((x - anchor) / width));
}

}  // namespace

GridPlan make_grid_plan(const Relation& S, const Relation& T,
                        const BandSpec& spec, int j) {
  check_grid_spec(spec);
  if (j < 1) throw std::invalid_argument("make_grid_plan: j >= 1");
  GridPlan plan;
  plan.j = j;
  plan.anchor.assign(spec.d, std::numeric_limits<double>::infinity());
  for (const Relation* rel : {&S, &T})
    for (const Tuple& t : rel->tuples)
      for (int i = 0; i < spec.d; ++i)
        plan.anchor[i] = std::min(plan.anchor[i], t.coords[i]);
  for (double a : plan.anchor)
    if (!std::isfinite(a))
      throw std::invalid_argument("make_grid_plan: empty input");
  return plan;
}

std::vector<std::vector<int64_t>> grid_cells(const Tuple& t, RelationTag tag,
                                             const GridPlan& plan,
                                             const BandSpec& spec) {
  check_grid_spec(spec);
  std::vector<std::vector<int64_t>> out;
  if (tag == RelationTag::S) {
    std::vector<int64_t> cell(spec.d);
    for (int i = 0; i < spec.d; ++i)
      cell[i] = cell_index(t.coords[i], plan.anchor[i], plan.j * spec.eps[i]);
    out.push_back(std::move(cell));
    return out;
  }
  // Closed eps-range vs half-open cells: both endpoints land via floor.
  std::vector<int64_t> lo(spec.d), hi(spec.d);
  for (int i = 0; i < spec.d; ++i) {
    double width = plan.j * spec.eps[i];
    lo[i] = cell_index(t.coords[i] - spec.eps[i], plan.anchor[i], width);
    hi[i] = cell_index(t.coords[i] + spec.eps[i], plan.anchor[i], width);
  }
  std::vector<int64_t> cur = lo;
  while (true) {
    out.push_back(cur);
    int i = spec.d - 1;
    while (i >= 0 && cur[i] == hi[i]) cur[i--] = lo[i];
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

RoutedInput grid_route_all(const Relation& S, const Relation& T,
                           const GridPlan& plan, const BandSpec& spec) {
  // Two passes: first assign dense ids to occupied cells in lexicographic
  // order, then fill the destination lists.
  std::map<std::vector<int64_t>, int> ids;
  for (const Relation* rel : {&S, &T}) {
    RelationTag tag = rel == &S ? RelationTag::S : RelationTag::T;
    for (const Tuple& t : rel->tuples)
      for (auto& cell : grid_cells(t, tag, plan, spec))
        ids.emplace(std::move(cell), 0);
  }
  int next = 0;
  for (auto& [cell, id] : ids) id = next++;

  RoutedInput routed;
  routed.destinations.resize(ids.size());
  for (const auto& [cell, id] : ids) routed.destinations[id].dest = {id, 0, 0};
  for (uint32_t i = 0; i < S.size(); ++i)
    for (const auto& cell : grid_cells(S.tuples[i], RelationTag::S, plan, spec)) {
      routed.destinations[ids.at(cell)].sIdx.push_back(i);
      ++routed.totalInput;
    }
  for (uint32_t i = 0; i < T.size(); ++i)
    for (const auto& cell : grid_cells(T.tuples[i], RelationTag::T, plan, spec)) {
      routed.destinations[ids.at(cell)].tIdx.push_back(i);
      ++routed.totalInput;
    }
  return routed;
}

GridPlan grid_star(const SampleSet& samples, const BandSpec& spec, int w,
                   const CostModel& model, int jMax) {
  check_grid_spec(spec);
  if (jMax < 1) throw std::invalid_argument("grid_star: jMax >= 1");

  GridPlan base;
  base.anchor.assign(spec.d, std::numeric_limits<double>::infinity());
  for (const auto* vec : {&samples.sS, &samples.sT})
    for (const Tuple& t : *vec)
      for (int i = 0; i < spec.d; ++i)
        base.anchor[i] = std::min(base.anchor[i], t.coords[i]);
  for (double a : base.anchor)
    if (!std::isfinite(a)) throw std::invalid_argument("grid_star: empty samples");

  GridPlan bestPlan;
  double prevTime = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= jMax; ++j) {
    GridPlan plan = base;
    plan.j = j;

    struct CellAgg {
      size_t s = 0, t = 0, o = 0;
    };
    std::map<std::vector<int64_t>, CellAgg> cells;
    size_t tCopies = 0;
    for (const Tuple& s : samples.sS)
      ++cells[grid_cells(s, RelationTag::S, plan, spec)[0]].s;
    for (const Tuple& t : samples.sT)
      for (const auto& cell : grid_cells(t, RelationTag::T, plan, spec)) {
        ++cells[cell].t;
        ++tCopies;
      }
    for (const Tuple& s : samples.oS)
      ++cells[grid_cells(s, RelationTag::S, plan, spec)[0]].o;

    double inputEst = samples.wS * static_cast<double>(samples.sS.size()) +
                      samples.wT * static_cast<double>(tCopies);
    std::vector<DestLoad> dests;
    dests.reserve(cells.size());
    for (const auto& [cell, agg] : cells) {
      double in = samples.wS * agg.s + samples.wT * agg.t;
      double out = samples.wO * agg.o;
      dests.push_back({spec.beta2 * in + spec.beta3 * out, in, out});
    }
    WorkerAssignment wa = assign_workers(dests, w, AssignStrategy::LPT);
    double time = model.estimate(inputEst, wa.input[wa.maxWorker],
                                 wa.output[wa.maxWorker]);
    if (time > prevTime) return bestPlan;
    prevTime = time;
    bestPlan = plan;
  }
  return bestPlan;
}

QuantileBlocks quantile_partition(const Relation& S, const Relation& T,
                                  const BandSpec& spec, size_t sizePerBlock) {
  if (sizePerBlock < 1)
    throw std::invalid_argument("quantile_partition: sizePerBlock >= 1");

  auto sorted_blocks = [&](const Relation& rel) {
    std::vector<uint32_t> order(rel.size());
    for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      const Tuple& ta = rel.tuples[a];
      const Tuple& tb = rel.tuples[b];
      if (ta.coords != tb.coords) return ta.coords < tb.coords;
      return ta.id < tb.id;
    });
    std::vector<std::vector<uint32_t>> blocks;
    for (size_t off = 0; off < order.size(); off += sizePerBlock) {
      size_t end = std::min(off + sizePerBlock, order.size());
      blocks.emplace_back(order.begin() + off, order.begin() + end);
    }
    return blocks;
  };

  QuantileBlocks out;
  out.sizePerBlock = sizePerBlock;
  out.sBlocks = sorted_blocks(S);
  out.tBlocks = sorted_blocks(T);

  // First-dimension range of a block: the sort is lexicographic, so it runs
  // from the first tuple's A_1 to the last one's.
  auto a1_range = [](const Relation& rel, const std::vector<uint32_t>& block) {
    return std::pair<double, double>{rel.tuples[block.front()].coords[0],
                                     rel.tuples[block.back()].coords[0]};
  };
  const double e = spec.eps[0];
  std::vector<bool> sUsed(out.sBlocks.size(), false);
  std::vector<bool> tUsed(out.tBlocks.size(), false);
  for (size_t bs = 0; bs < out.sBlocks.size(); ++bs) {
    auto [sLo, sHi] = a1_range(S, out.sBlocks[bs]);
    for (size_t bt = 0; bt < out.tBlocks.size(); ++bt) {
      auto [tLo, tHi] = a1_range(T, out.tBlocks[bt]);
      if (tLo > sHi + e) break;  // blocks ordered by A_1
      if (sLo > tHi + e) continue;
      out.tasks.emplace_back(static_cast<int>(bs), static_cast<int>(bt));
      sUsed[bs] = true;
      tUsed[bt] = true;
    }
  }
  // Blocks with no joinable partner still have to be read once; model them
  // as single-relation tasks so I never drops below nS + nT.
  for (size_t bs = 0; bs < out.sBlocks.size(); ++bs)
    if (!sUsed[bs]) out.tasks.emplace_back(static_cast<int>(bs), -1);
  for (size_t bt = 0; bt < out.tBlocks.size(); ++bt)
    if (!tUsed[bt]) out.tasks.emplace_back(-1, static_cast<int>(bt));
  return out;
}

RoutedInput quantile_route_all(const Relation& S, const Relation& T,
                               const QuantileBlocks& blocks) {
  (void)S;
  (void)T;
  RoutedInput routed;
  routed.destinations.resize(blocks.tasks.size());
  for (size_t i = 0; i < blocks.tasks.size(); ++i) {
    DestinationInput& dst = routed.destinations[i];
    dst.dest = {static_cast<int>(i), 0, 0};
    auto [bs, bt] = blocks.tasks[i];
    if (bs >= 0) dst.sIdx = blocks.sBlocks[static_cast<size_t>(bs)];
    if (bt >= 0) dst.tIdx = blocks.tBlocks[static_cast<size_t>(bt)];
    routed.totalInput += dst.sIdx.size() + dst.tIdx.size();
  }
  return routed;
}

}  // namespace bandjoin
