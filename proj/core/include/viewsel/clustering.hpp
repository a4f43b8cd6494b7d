#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "viewsel/similarity.hpp"
#include "viewsel/workload.hpp"

namespace viewsel {

/// One accepted step of the local search. Cluster ids are the smallest row
/// index of the cluster at the time of the step.
struct ClusterStep {
  enum class Kind { merge, move, split };

  Kind kind = Kind::merge;
  std::size_t from = 0;  // merge: first cluster; move/split: source cluster
  std::size_t to = 0;    // merge: second cluster; move: target cluster; split: moved row
  std::size_t row = 0;   // moved row (move/split); unused for merge
  std::int64_t delta = 0;
  std::uint64_t quality_after = 0;
};

struct ClusteringResult {
  Partition partition;  // canonical order
  std::uint64_t initial_quality = 0;  // all-singleton partition
  std::uint64_t final_quality = 0;
  std::vector<ClusterStep> trace;
};

/// Local search minimizing quality(): agglomerative merging of the cluster
/// pair with the most negative delta, then single-row relocation passes
/// (visiting rows in a seed-determined order), repeated until neither a merge
/// nor a move lowers the score. Equal deltas resolve to the smallest
/// (cluster id, cluster id) pair.
ClusteringResult cluster_queries_traced(const ClusteringContext& ctx, std::uint64_t seed = 0);

Partition cluster_queries(const ClusteringContext& ctx, std::uint64_t seed = 0);

/// One "kind a b row delta quality_after" line per step.
std::string format_trace(const std::vector<ClusterStep>& trace);

}  // namespace viewsel
