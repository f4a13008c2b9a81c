// A partitioning plan of any kind, with a common JSON envelope tagged by
// "kind". Quantile plans store only the block size; blocks are recomputed
// deterministically from the data at run time.

#pragma once

#include <string>

#include "bandjoin/baselines.hpp"
#include "bandjoin/split_tree.hpp"

namespace bandjoin {

struct Plan {
  enum class Kind { RecPart, OneBucket, Grid, Quantile };
  Kind kind = Kind::RecPart;

  SplitTree tree;           // RecPart
  OneBucketPlan oneBucket;  // OneBucket
  GridPlan grid;            // Grid / Grid*
  size_t sizePerBlock = 0;  // Quantile

  static Plan recpart(SplitTree t) {
    Plan p;
    p.kind = Kind::RecPart;
    p.tree = std::move(t);
    return p;
  }
  static Plan one_bucket(OneBucketPlan ob) {
    Plan p;
    p.kind = Kind::OneBucket;
    p.oneBucket = ob;
    return p;
  }
  static Plan grid_plan(GridPlan g) {
    Plan p;
    p.kind = Kind::Grid;
    p.grid = std::move(g);
    return p;
  }
  static Plan quantile(size_t sizePerBlock) {
    Plan p;
    p.kind = Kind::Quantile;
    p.sizePerBlock = sizePerBlock;
    return p;
  }
};

std::string kind_name(Plan::Kind kind);

std::string to_json(const Plan& plan);
Plan plan_from_json(const std::string& text);

}  // namespace bandjoin
