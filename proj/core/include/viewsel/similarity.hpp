#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "viewsel/workload.hpp"

namespace viewsel {

/// Similarity and dissimilarity counts between rows of a clustering context.
/// A column where both rows hold 1 counts as similarity; a column where they
/// differ counts as dissimilarity; a column where both hold 0 counts as
/// neither.
struct Measures {
  std::uint64_t sim = 0;
  std::uint64_t dissim = 0;

  bool operator==(const Measures&) const = default;
};

/// Disjoint, non-empty clusters of context rows that together cover every row.
struct Partition {
  std::vector<std::vector<std::size_t>> clusters;

  std::size_t size() const { return clusters.size(); }

  static Partition singletons(std::size_t rows);
  static Partition single_cluster(std::size_t rows);

  /// Sorts members and orders clusters by their smallest member.
  void canonicalize();

  bool operator==(const Partition&) const = default;
};

/// Throws std::invalid_argument unless `partition` partitions [0, rows).
void check_partition(const Partition& partition, std::size_t rows);

Measures pair_measures(const ClusteringContext& ctx, std::size_t k, std::size_t l);

/// Sums over the cross product; the sets must be disjoint and non-empty.
Measures inter_set_measures(const ClusteringContext& ctx, std::span<const std::size_t> a,
                            std::span<const std::size_t> b);

/// Sums over unordered pairs within the set.
Measures intra_set_measures(const ClusteringContext& ctx, std::span<const std::size_t> cluster);

/// Cross-cluster similarity plus within-cluster dissimilarity. Lower is better.
std::uint64_t quality(const ClusteringContext& ctx, const Partition& partition);

}  // namespace viewsel
