// Competitor partitioners: global 1-Bucket (r x c random grid over the join
// matrix), Grid-eps (cells of width j*eps_i anchored at the data minimum),
// Grid* (model-tuned grid multiplier), and quantile blocks (lexicographic
// sort, fixed-size blocks, tasks for block pairs close on the first
// dimension).

#pragma once

#include <cstdint>
#include <vector>

#include "bandjoin/cost_model.hpp"
#include "bandjoin/geometry.hpp"
#include "bandjoin/routing.hpp"
#include "bandjoin/sampling.hpp"

namespace bandjoin {

struct OneBucketPlan {
  int r = 1;
  int c = 1;
};

/// Among shapes with r*c <= w and r*c maximal, the minimizer of c*nS + r*nT;
/// ties prefer r <= c, then smaller r.
OneBucketPlan choose_one_bucket_shape(int w, size_t nS, size_t nT);

/// S-tuple: one hashed row, all c columns. T-tuple: one hashed column, all r
/// rows. Destinations use leafId 0 and the (row, col) cell.
std::vector<Destination> one_bucket_route(const Tuple& t, RelationTag tag,
                                          const OneBucketPlan& plan,
                                          uint64_t seed);

RoutedInput one_bucket_route_all(const Relation& S, const Relation& T,
                                 const OneBucketPlan& plan, uint64_t seed);

struct GridPlan {
  int j = 1;                   // cell width is j * eps_i per dimension
  std::vector<double> anchor;  // per-dimension data minimum
};

GridPlan make_grid_plan(const Relation& S, const Relation& T,
                        const BandSpec& spec, int j);

/// Cell multi-indices for one tuple: an S-tuple maps to its containing cell,
/// a T-tuple to every cell intersecting its closed eps-range (at most 3^d
/// for j >= 1).
std::vector<std::vector<int64_t>> grid_cells(const Tuple& t, RelationTag tag,
                                             const GridPlan& plan,
                                             const BandSpec& spec);

/// Routes both relations; occupied cells get dense destination ids in
/// lexicographic cell order (leafId = dense id, cell (0,0)).
RoutedInput grid_route_all(const Relation& S, const Relation& T,
                           const GridPlan& plan, const BandSpec& spec);

/// Grid with the multiplier tuned on samples: increasing j from 1, stop at
/// the first local minimum of model-predicted time (LPT worker assignment of
/// estimated cell loads), capped at jMax. Rejects any eps_i = 0.
GridPlan grid_star(const SampleSet& samples, const BandSpec& spec, int w,
                   const CostModel& model, int jMax);

struct QuantileBlocks {
  size_t sizePerBlock = 0;
  // Tuple indices grouped into blocks, lexicographically sorted by coords
  // (ties by tuple id).
  std::vector<std::vector<uint32_t>> sBlocks;
  std::vector<std::vector<uint32_t>> tBlocks;
  // Joinable (sBlock, tBlock) pairs: first-dimension ranges within eps_1.
  std::vector<std::pair<int, int>> tasks;
};

QuantileBlocks quantile_partition(const Relation& S, const Relation& T,
                                  const BandSpec& spec, size_t sizePerBlock);

/// One destination per task (leafId = task index); each block's tuples are
/// copied into every task it appears in.
RoutedInput quantile_route_all(const Relation& S, const Relation& T,
                               const QuantileBlocks& blocks);

}  // namespace bandjoin
