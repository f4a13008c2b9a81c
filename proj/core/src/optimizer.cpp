#include "bandjoin/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "bandjoin/executor.hpp"
#include "bandjoin/routing.hpp"

namespace bandjoin {

namespace {

double variance_factor(int w) {
  double wd = static_cast<double>(w);
  return (wd - 1.0) / (wd * wd);
}

size_t count_below(const std::vector<double>& sorted, double v) {
  return static_cast<size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

struct LeafArrays {
  std::vector<double> s;  // sorted coords of routed S-sample tuples
  std::vector<double> t;
  std::vector<double> o;  // sorted T-side coords of localized output pairs
};

LeafArrays leaf_arrays(const LeafState& leaf, const SampleSet& samples,
                       int dim) {
  LeafArrays a;
  a.s.reserve(leaf.sIdx.size());
  a.t.reserve(leaf.tIdx.size());
  a.o.reserve(leaf.oIdx.size());
  for (uint32_t i : leaf.sIdx) a.s.push_back(samples.sS[i].coords[dim]);
  for (uint32_t i : leaf.tIdx) a.t.push_back(samples.sT[i].coords[dim]);
  for (uint32_t i : leaf.oIdx) a.o.push_back(samples.oT[i].coords[dim]);
  std::sort(a.s.begin(), a.s.end());
  std::sort(a.t.begin(), a.t.end());
  std::sort(a.o.begin(), a.o.end());
  return a;
}

void append_load_items(const LeafState& leaf, const SampleSet& samples,
                       const BandSpec& spec, std::vector<DestLoad>& out) {
  PartitionStats st = leaf_stats(leaf, samples, spec);
  if (!leaf.small) {
    out.push_back({st.load, st.estS + st.estT, st.estO});
    return;
  }
  double r = leaf.rows, c = leaf.cols;
  double cellIn = st.estS / r + st.estT / c;
  double cellOut = st.estO / (r * c);
  double cellLoad = spec.beta2 * cellIn + spec.beta3 * cellOut;
  for (int i = 0; i < leaf.rows * leaf.cols; ++i)
    out.push_back({cellLoad, cellIn, cellOut});
}

/// LPT over estimated loads; returns (Lm, Im, Om) of the heaviest worker.
PlanEstimate lpt_estimate(std::vector<DestLoad> items, int w) {
  WorkerAssignment wa = assign_workers(items, w, AssignStrategy::LPT);
  PlanEstimate est;
  est.Lm = wa.load[wa.maxWorker];
  est.Im = wa.input[wa.maxWorker];
  est.Om = wa.output[wa.maxWorker];
  return est;
}

}  // namespace

double load_variance(const std::vector<double>& leafLoads, int w) {
  if (w < 1) throw std::invalid_argument("load_variance: w must be >= 1");
  double sumSq = 0.0;
  for (double l : leafLoads) sumSq += l * l;
  return variance_factor(w) * sumSq;
}

double theoretical_objective(double I, double Lm, size_t nS, size_t nT,
                             double estOut, const BandSpec& spec, int w) {
  double nTotal = static_cast<double>(nS + nT);
  double L0 = (spec.beta2 * nTotal + spec.beta3 * estOut) / w;
  if (!(L0 > 0.0))
    throw std::invalid_argument("theoretical_objective: L0 must be > 0");
  return std::max((I - nTotal) / nTotal, (Lm - L0) / L0);
}

LeafState make_root_leaf(const SampleSet& samples, const BandSpec& spec) {
  LeafState root;
  root.id = 0;
  root.rect = Rect::whole(spec.d);
  root.sIdx.resize(samples.sS.size());
  root.tIdx.resize(samples.sT.size());
  root.oIdx.resize(samples.oT.size());
  for (uint32_t i = 0; i < root.sIdx.size(); ++i) root.sIdx[i] = i;
  for (uint32_t i = 0; i < root.tIdx.size(); ++i) root.tIdx[i] = i;
  for (uint32_t i = 0; i < root.oIdx.size(); ++i) root.oIdx[i] = i;
  return root;
}

PartitionStats leaf_stats(const LeafState& leaf, const SampleSet& samples,
                          const BandSpec& spec) {
  PartitionStats st;
  st.estS = samples.wS * static_cast<double>(leaf.sIdx.size());
  st.estT = samples.wT * static_cast<double>(leaf.tIdx.size());
  st.estO = samples.wO * static_cast<double>(leaf.oIdx.size());
  st.load = spec.beta2 * (st.estS + st.estT) + spec.beta3 * st.estO;
  return st;
}

double leaf_input_estimate(const LeafState& leaf, const SampleSet& samples) {
  double estS = samples.wS * static_cast<double>(leaf.sIdx.size());
  double estT = samples.wT * static_cast<double>(leaf.tIdx.size());
  if (!leaf.small) return estS + estT;
  return leaf.cols * estS + leaf.rows * estT;
}

double leaf_squared_load_sum(const LeafState& leaf, const SampleSet& samples,
                             const BandSpec& spec) {
  PartitionStats st = leaf_stats(leaf, samples, spec);
  if (!leaf.small) return st.load * st.load;
  double r = leaf.rows, c = leaf.cols;
  double cell = spec.beta2 * (st.estS / r + st.estT / c) +
                spec.beta3 * st.estO / (r * c);
  return r * c * cell * cell;
}

double delta_dup(const LeafState& leaf, const SplitCandidate& cand,
                 const SampleSet& samples, const BandSpec& spec) {
  if (cand.forSmall) {
    PartitionStats st = leaf_stats(leaf, samples, spec);
    return cand.growRow ? st.estT : st.estS;
  }
  const double e = spec.eps[cand.dim];
  size_t dup = 0;
  if (cand.kind == SplitKind::TSplit) {
    for (uint32_t i : leaf.tIdx) {
      double x = samples.sT[i].coords[cand.dim];
      if (x - e < cand.value && x + e >= cand.value) ++dup;
    }
    return samples.wT * static_cast<double>(dup);
  }
  for (uint32_t i : leaf.sIdx) {
    double x = samples.sS[i].coords[cand.dim];
    if (x - e < cand.value && x + e >= cand.value) ++dup;
  }
  return samples.wS * static_cast<double>(dup);
}

std::pair<std::optional<SplitCandidate>, Score> best_split_regular(
    const LeafState& leaf, const SampleSet& samples, const BandSpec& spec,
    int w, bool allowSSplits, int maxCandidatesPerDim) {
  const double f = variance_factor(w);
  const double wS = samples.wS, wT = samples.wT, wO = samples.wO;

  std::optional<SplitCandidate> best;
  Score bestScore{};

  for (int dim = 0; dim < spec.d; ++dim) {
    const double extent = leaf.rect.hi[dim] - leaf.rect.lo[dim];
    // A dimension already below twice the band width takes no further
    // recursive splits.
    if (spec.eps[dim] > 0.0 && !(extent >= 2.0 * spec.eps[dim])) continue;

    LeafArrays a = leaf_arrays(leaf, samples, dim);
    const double ns = static_cast<double>(a.s.size());
    const double nt = static_cast<double>(a.t.size());
    const double no = static_cast<double>(a.o.size());
    const double parentLoad =
        spec.beta2 * (wS * ns + wT * nt) + spec.beta3 * wO * no;

    // Candidate split values: midpoints between consecutive distinct
    // coordinates of the combined in-leaf sample.
    std::vector<double> merged;
    merged.reserve(a.s.size() + a.t.size());
    merged.insert(merged.end(), a.s.begin(), a.s.end());
    merged.insert(merged.end(), a.t.begin(), a.t.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    std::vector<double> mids;
    mids.reserve(merged.empty() ? 0 : merged.size() - 1);
    for (size_t i = 0; i + 1 < merged.size(); ++i) {
      double v = 0.5 * (merged[i] + merged[i + 1]);
      if (v > leaf.rect.lo[dim] && v < leaf.rect.hi[dim] && v > merged[i])
        mids.push_back(v);
    }
    if (static_cast<int>(mids.size()) > maxCandidatesPerDim) {
      std::vector<double> thin;
      thin.reserve(maxCandidatesPerDim);
      double step = static_cast<double>(mids.size()) / maxCandidatesPerDim;
      for (int i = 0; i < maxCandidatesPerDim; ++i)
        thin.push_back(mids[static_cast<size_t>(i * step)]);
      mids = std::move(thin);
    }

    const double e = spec.eps[dim];
    for (double v : mids) {
      const double oL = static_cast<double>(count_below(a.o, v));
      const double oR = no - oL;

      auto consider = [&](SplitKind kind, double estSL, double estSR,
                          double estTL, double estTR, double dup) {
        double lL = spec.beta2 * (estSL + estTL) + spec.beta3 * wO * oL;
        double lR = spec.beta2 * (estSR + estTR) + spec.beta3 * wO * oR;
        double dVar = f * (parentLoad * parentLoad - lL * lL - lR * lR);
        if (!(dVar > 0.0)) return;
        Score sc = dup == 0.0 ? Score{1, dVar} : Score{0, dVar / dup};
        if (bestScore < sc) {
          bestScore = sc;
          best = SplitCandidate{false, dim, v, kind, true, dVar, dup};
        }
      };

      {  // T-split: S partitioned cleanly, T duplicated near the boundary.
        double sL = static_cast<double>(count_below(a.s, v));
        double tL = static_cast<double>(count_below(a.t, v + e));
        double tR = nt - static_cast<double>(count_below(a.t, v - e));
        consider(SplitKind::TSplit, wS * sL, wS * (ns - sL), wT * tL,
                 wT * tR, wT * (tL + tR - nt));
      }
      if (allowSSplits) {
        double tL = static_cast<double>(count_below(a.t, v));
        double sL = static_cast<double>(count_below(a.s, v + e));
        double sR = ns - static_cast<double>(count_below(a.s, v - e));
        consider(SplitKind::SSplit, wS * sL, wS * sR, wT * tL,
                 wT * (nt - tL), wS * (sL + sR - ns));
      }
    }
  }
  return {best, best ? bestScore : Score{}};
}

std::pair<SplitCandidate, Score> best_split_small(const LeafState& leaf,
                                                  const SampleSet& samples,
                                                  const BandSpec& spec,
                                                  int w) {
  const double f = variance_factor(w);
  PartitionStats st = leaf_stats(leaf, samples, spec);

  auto sqSum = [&](int r, int c) {
    double rd = r, cd = c;
    double cell = spec.beta2 * (st.estS / rd + st.estT / cd) +
                  spec.beta3 * st.estO / (rd * cd);
    return rd * cd * cell * cell;
  };
  const double before = sqSum(leaf.rows, leaf.cols);

  auto score_of = [&](double dVar, double dup) {
    if (!(dVar > 0.0)) return Score{};
    return dup == 0.0 ? Score{1, dVar} : Score{0, dVar / dup};
  };
  double dVarRow = f * (before - sqSum(leaf.rows + 1, leaf.cols));
  double dVarCol = f * (before - sqSum(leaf.rows, leaf.cols + 1));
  Score rowScore = score_of(dVarRow, st.estT);
  Score colScore = score_of(dVarCol, st.estS);

  SplitCandidate cand;
  cand.forSmall = true;
  if (colScore.positive() && rowScore < colScore) {
    cand.growRow = false;
    cand.deltaVar = dVarCol;
    cand.deltaDup = st.estS;
    return {cand, colScore};
  }
  cand.growRow = true;
  cand.deltaVar = dVarRow;
  cand.deltaDup = st.estT;
  return {cand, rowScore};
}

bool leaf_is_small(const LeafState& leaf, const SampleSet&, const BandSpec& spec) {
  return is_small(leaf.rect, spec);
}

std::pair<LeafState, LeafState> apply_regular_split(const LeafState& leaf,
                                                    const SplitCandidate& cand,
                                                    const SampleSet& samples,
                                                    const BandSpec& spec) {
  if (cand.forSmall || leaf.small)
    throw std::invalid_argument("apply_regular_split: regular leaves only");
  LeafState l, r;
  l.rect = leaf.rect;
  r.rect = leaf.rect;
  l.rect.hi[cand.dim] = cand.value;
  r.rect.lo[cand.dim] = cand.value;

  const double e = spec.eps[cand.dim];
  const double v = cand.value;
  auto split_clean = [&](const std::vector<uint32_t>& src, auto coordOf,
                         std::vector<uint32_t>& lo, std::vector<uint32_t>& ro) {
    for (uint32_t i : src) (coordOf(i) < v ? lo : ro).push_back(i);
  };
  auto split_dup = [&](const std::vector<uint32_t>& src, auto coordOf,
                       std::vector<uint32_t>& lo, std::vector<uint32_t>& ro) {
    for (uint32_t i : src) {
      double x = coordOf(i);
      if (x - e < v) lo.push_back(i);
      if (x + e >= v) ro.push_back(i);
    }
  };
  auto sCoord = [&](uint32_t i) { return samples.sS[i].coords[cand.dim]; };
  auto tCoord = [&](uint32_t i) { return samples.sT[i].coords[cand.dim]; };
  auto oCoord = [&](uint32_t i) { return samples.oT[i].coords[cand.dim]; };
  if (cand.kind == SplitKind::TSplit) {
    split_clean(leaf.sIdx, sCoord, l.sIdx, r.sIdx);
    split_dup(leaf.tIdx, tCoord, l.tIdx, r.tIdx);
  } else {
    split_dup(leaf.sIdx, sCoord, l.sIdx, r.sIdx);
    split_clean(leaf.tIdx, tCoord, l.tIdx, r.tIdx);
  }
  split_clean(leaf.oIdx, oCoord, l.oIdx, r.oIdx);
  l.small = leaf_is_small(l, samples, spec);
  r.small = leaf_is_small(r, samples, spec);
  return {std::move(l), std::move(r)};
}

PlanEstimate estimate_plan_metrics(const SplitTree& tree,
                                   const SampleSet& samples,
                                   const BandSpec& spec, int w) {
  // Route the samples through the structural tree.
  struct Counts {
    size_t s = 0, t = 0, o = 0;
  };
  std::vector<Counts> counts(static_cast<size_t>(tree.numLeaves));
  std::vector<const SplitTree::Node*> leafOf(counts.size(), nullptr);

  std::vector<int> stack;
  auto route_leafset = [&](const std::vector<double>& coords, RelationTag tag,
                           auto&& bump) {
    stack.assign(1, 0);
    while (!stack.empty()) {
      const SplitTree::Node& n = tree.nodes[stack.back()];
      stack.pop_back();
      if (n.isLeaf) {
        bump(n);
        continue;
      }
      const bool duplicating =
          (n.kind == SplitKind::TSplit && tag == RelationTag::T) ||
          (n.kind == SplitKind::SSplit && tag == RelationTag::S);
      const double x = coords[n.dim];
      if (duplicating) {
        const double e = spec.eps[n.dim];
        if (x - e < n.value) stack.push_back(n.left);
        if (x + e >= n.value) stack.push_back(n.right);
      } else {
        stack.push_back(x < n.value ? n.left : n.right);
      }
    }
  };
  auto descend_contained = [&](const std::vector<double>& coords,
                               auto&& bump) {
    int node = 0;
    while (!tree.nodes[node].isLeaf) {
      const SplitTree::Node& n = tree.nodes[node];
      node = coords[n.dim] < n.value ? n.left : n.right;
    }
    bump(tree.nodes[node]);
  };

  for (size_t i = 0; i < tree.nodes.size(); ++i)
    if (tree.nodes[i].isLeaf) leafOf[tree.nodes[i].leafId] = &tree.nodes[i];
  for (const Tuple& s : samples.sS)
    route_leafset(s.coords, RelationTag::S,
                  [&](const SplitTree::Node& n) { ++counts[n.leafId].s; });
  for (const Tuple& t : samples.sT)
    route_leafset(t.coords, RelationTag::T,
                  [&](const SplitTree::Node& n) { ++counts[n.leafId].t; });
  for (const Tuple& t : samples.oT)
    descend_contained(t.coords,
                      [&](const SplitTree::Node& n) { ++counts[n.leafId].o; });

  PlanEstimate est;
  std::vector<DestLoad> items;
  for (int id = 0; id < tree.numLeaves; ++id) {
    const SplitTree::Node* n = leafOf[id];
    if (!n) continue;
    double estS = samples.wS * static_cast<double>(counts[id].s);
    double estT = samples.wT * static_cast<double>(counts[id].t);
    double estO = samples.wO * static_cast<double>(counts[id].o);
    if (!n->small) {
      est.I += estS + estT;
      items.push_back({spec.beta2 * (estS + estT) + spec.beta3 * estO,
                       estS + estT, estO});
    } else {
      double r = n->rows, c = n->cols;
      est.I += c * estS + r * estT;
      double cellIn = estS / r + estT / c;
      double cellOut = estO / (r * c);
      double cellLoad = spec.beta2 * cellIn + spec.beta3 * cellOut;
      for (int k = 0; k < n->rows * n->cols; ++k)
        items.push_back({cellLoad, cellIn, cellOut});
    }
  }
  PlanEstimate lpt = lpt_estimate(std::move(items), w);
  est.Lm = lpt.Lm;
  est.Im = lpt.Im;
  est.Om = lpt.Om;
  return est;
}

namespace {

SplitTree renumber_leaves(SplitTree tree) {
  // Pre-order, left before right, for stable ids.
  int next = 0;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int idx = stack.back();
    stack.pop_back();
    SplitTree::Node& n = tree.nodes[idx];
    if (n.isLeaf) {
      n.leafId = next++;
    } else {
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
  tree.numLeaves = next;
  return tree;
}

}  // namespace

OptimizeResult optimize(const SampleSet& samples, const BandSpec& spec,
                        const OptimizerConfig& cfg) {
  spec.validate();
  if (cfg.w < 1) throw std::invalid_argument("optimize: w must be >= 1");
  if (samples.sS.empty() && samples.sT.empty())
    throw std::invalid_argument("optimize: empty samples");

  const double f = variance_factor(cfg.w);
  const int maxIter = cfg.maxIterations > 0 ? cfg.maxIterations : 50 * cfg.w;
  const int window =
      std::max(1, static_cast<int>(std::lround(cfg.windowFraction * cfg.w)));
  const double nTotal = static_cast<double>(samples.nS + samples.nT);
  const double estOut = samples.est_output();
  const double L0 = (spec.beta2 * nTotal + spec.beta3 * estOut) / cfg.w;

  SplitTree tree = SplitTree::single_leaf(spec.d);
  std::vector<LeafState> leaves{make_root_leaf(samples, spec)};
  std::vector<int> nodeOf{0};  // leaf id -> tree node index
  std::vector<SplitCandidate> cand(1);
  std::vector<bool> hasCand(1, false);
  std::vector<int> version(1, 0);

  // Leaves compete in the queue on an effective ratio. A sample duplication
  // count of zero only bounds the true duplication below the weight of a
  // single sample tuple, so zero-duplication candidates are ranked as if they
  // cost that one-tuple resolution floor; within a leaf the strict
  // zero-duplication preference still applies when the candidate is chosen.
  // Without the floor, any zero-duplication candidate anywhere — however
  // negligible its variance reduction — would outrank every finite-ratio
  // candidate and starve the dense regions.
  auto queue_score = [&](const SplitCandidate& c) {
    double floorDup;
    if (c.forSmall)
      floorDup = c.growRow ? samples.wT : samples.wS;
    else
      floorDup = c.kind == SplitKind::TSplit ? samples.wT : samples.wS;
    return c.deltaVar / std::max(c.deltaDup, floorDup);
  };

  struct Entry {
    double score;
    int leafId;
    int version;
  };
  auto entryLess = [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.leafId > b.leafId;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(entryLess)> queue(
      entryLess);

  double sumSq = leaf_squared_load_sum(leaves[0], samples, spec);
  double inputEst = leaf_input_estimate(leaves[0], samples);

  auto rescore = [&](int id) {
    const LeafState& leaf = leaves[id];
    std::pair<std::optional<SplitCandidate>, Score> r;
    if (leaf.small) {
      auto [c, s] = best_split_small(leaf, samples, spec, cfg.w);
      r = {c, s};
    } else {
      r = best_split_regular(leaf, samples, spec, cfg.w, cfg.allowSSplits,
                             cfg.maxCandidatesPerDim);
    }
    hasCand[id] = r.first.has_value() && r.second.positive();
    if (hasCand[id]) {
      cand[id] = *r.first;
      queue.push({queue_score(cand[id]), id, version[id]});
    }
  };

  OptimizeResult result;
  double bestObjective = std::numeric_limits<double>::infinity();
  double minLoadOvh = std::numeric_limits<double>::infinity();
  SplitTree bestTree = tree;

  auto record_iteration = [&](int iter) {
    std::vector<DestLoad> items;
    for (const LeafState& leaf : leaves)
      if (leaf.active) append_load_items(leaf, samples, spec, items);
    PlanEstimate lpt = lpt_estimate(std::move(items), cfg.w);

    IterationRecord rec;
    rec.iter = iter;
    rec.inputEst = inputEst;
    rec.maxLoadEst = lpt.Lm;
    rec.maxInputEst = lpt.Im;
    rec.maxOutputEst = lpt.Om;
    rec.variance = f * sumSq;
    rec.dupOverhead = (inputEst - nTotal) / nTotal;
    rec.loadOverhead = L0 > 0.0 ? (lpt.Lm - L0) / L0 : 0.0;
    rec.objective = cfg.termination == Termination::Theoretical
                        ? std::max(rec.dupOverhead, rec.loadOverhead)
                        : cfg.model.estimate(inputEst, lpt.Im, lpt.Om);
    result.trace.push_back(rec);

    if (rec.objective < bestObjective) {
      bestObjective = rec.objective;
      bestTree = tree;
      result.bestIteration = iter;
    }
    minLoadOvh = std::min(minLoadOvh, rec.loadOverhead);
    return rec;
  };

  record_iteration(0);
  rescore(0);

  int iter = 0;
  while (iter < maxIter) {
    // Pop the best still-valid leaf.
    int leafId = -1;
    while (!queue.empty()) {
      Entry top = queue.top();
      queue.pop();
      if (leaves[top.leafId].active && version[top.leafId] == top.version &&
          hasCand[top.leafId] && top.score > 0.0) {
        leafId = top.leafId;
        break;
      }
    }
    if (leafId < 0) break;
    ++iter;

    LeafState& leaf = leaves[leafId];
    sumSq -= leaf_squared_load_sum(leaf, samples, spec);
    inputEst -= leaf_input_estimate(leaf, samples);

    if (leaf.small) {
      SplitTree::Node& node = tree.nodes[nodeOf[leafId]];
      if (cand[leafId].growRow)
        ++leaf.rows, ++node.rows;
      else
        ++leaf.cols, ++node.cols;
      sumSq += leaf_squared_load_sum(leaf, samples, spec);
      inputEst += leaf_input_estimate(leaf, samples);
      ++version[leafId];
      rescore(leafId);
    } else {
      auto [lc, rc] = apply_regular_split(leaf, cand[leafId], samples, spec);
      leaf.active = false;
      leaf.sIdx.clear();
      leaf.sIdx.shrink_to_fit();
      leaf.tIdx.clear();
      leaf.tIdx.shrink_to_fit();
      leaf.oIdx.clear();
      leaf.oIdx.shrink_to_fit();

      int lId = static_cast<int>(leaves.size());
      int rId = lId + 1;
      lc.id = lId;
      rc.id = rId;
      sumSq += leaf_squared_load_sum(lc, samples, spec) +
               leaf_squared_load_sum(rc, samples, spec);
      inputEst += leaf_input_estimate(lc, samples) +
                  leaf_input_estimate(rc, samples);

      // Grow the structural tree in place.
      int lNode = static_cast<int>(tree.nodes.size());
      int rNode = lNode + 1;
      {
        SplitTree::Node ln, rn;
        ln.isLeaf = rn.isLeaf = true;
        ln.leafId = lId;
        rn.leafId = rId;
        ln.rect = lc.rect;
        rn.rect = rc.rect;
        ln.small = lc.small;
        rn.small = rc.small;
        tree.nodes.push_back(std::move(ln));
        tree.nodes.push_back(std::move(rn));
      }
      SplitTree::Node& parent = tree.nodes[nodeOf[leafId]];
      parent.isLeaf = false;
      parent.dim = cand[leafId].dim;
      parent.value = cand[leafId].value;
      parent.kind = cand[leafId].kind;
      parent.left = lNode;
      parent.right = rNode;
      parent.leafId = -1;
      tree.numLeaves += 1;

      leaves.push_back(std::move(lc));
      leaves.push_back(std::move(rc));
      nodeOf.push_back(lNode);
      nodeOf.push_back(rNode);
      cand.resize(leaves.size());
      hasCand.resize(leaves.size(), false);
      version.resize(leaves.size(), 0);
      rescore(lId);
      rescore(rId);
    }

    IterationRecord rec = record_iteration(iter);

    if (cfg.termination == Termination::Theoretical) {
      // Duplication only grows; once its overhead alone exceeds the best
      // load overhead seen, no later plan can win.
      if (rec.dupOverhead > minLoadOvh) break;
    } else if (iter > window) {
      double bestBefore = std::numeric_limits<double>::infinity();
      double bestRecent = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= iter; ++i) {
        double v = result.trace[static_cast<size_t>(i)].objective;
        if (i <= iter - window)
          bestBefore = std::min(bestBefore, v);
        else
          bestRecent = std::min(bestRecent, v);
      }
      if (bestRecent > (1.0 - cfg.minImprovement) * bestBefore) break;
    }
  }

  result.iterations = iter;
  result.tree = renumber_leaves(std::move(bestTree));
  return result;
}

}  // namespace bandjoin
