#include "viewsel/similarity.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace viewsel {

Partition Partition::singletons(std::size_t rows) {
  Partition partition;
  for (std::size_t i = 0; i < rows; ++i) partition.clusters.push_back({i});
  return partition;
}

Partition Partition::single_cluster(std::size_t rows) {
  Partition partition;
  if (rows == 0) return partition;
  partition.clusters.emplace_back();
  for (std::size_t i = 0; i < rows; ++i) partition.clusters.front().push_back(i);
  return partition;
}

void Partition::canonicalize() {
  for (auto& cluster : clusters) std::sort(cluster.begin(), cluster.end());
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

void check_partition(const Partition& partition, std::size_t rows) {
  std::vector<bool> seen(rows, false);
  std::size_t covered = 0;
  for (const auto& cluster : partition.clusters) {
    if (cluster.empty()) throw std::invalid_argument("partition contains an empty cluster");
    for (std::size_t row : cluster) {
      if (row >= rows) {
        throw std::invalid_argument("partition references row " + std::to_string(row) +
                                    " outside the context");
      }
      if (seen[row]) {
        throw std::invalid_argument("row " + std::to_string(row) + " appears in two clusters");
      }
      seen[row] = true;
      ++covered;
    }
  }
  if (covered != rows) throw std::invalid_argument("partition does not cover every row");
}

Measures pair_measures(const ClusteringContext& ctx, std::size_t k, std::size_t l) {
  if (k >= ctx.rows() || l >= ctx.rows()) {
    throw std::out_of_range("pair_measures: row id out of range");
  }
  const auto a = ctx.row_words(k);
  const auto b = ctx.row_words(l);
  Measures m;
  for (std::size_t w = 0; w < a.size(); ++w) {
    m.sim += static_cast<std::uint64_t>(std::popcount(a[w] & b[w]));
    m.dissim += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
  }
  return m;
}

Measures inter_set_measures(const ClusteringContext& ctx, std::span<const std::size_t> a,
                            std::span<const std::size_t> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("inter_set_measures: empty set");
  for (std::size_t k : a) {
    if (std::find(b.begin(), b.end(), k) != b.end()) {
      throw std::invalid_argument("inter_set_measures: sets overlap on row " + std::to_string(k));
    }
  }
  Measures total;
  for (std::size_t k : a) {
    for (std::size_t l : b) {
      const Measures m = pair_measures(ctx, k, l);
      total.sim += m.sim;
      total.dissim += m.dissim;
    }
  }
  return total;
}

Measures intra_set_measures(const ClusteringContext& ctx, std::span<const std::size_t> cluster) {
  Measures total;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    for (std::size_t j = i + 1; j < cluster.size(); ++j) {
      const Measures m = pair_measures(ctx, cluster[i], cluster[j]);
      total.sim += m.sim;
      total.dissim += m.dissim;
    }
  }
  return total;
}

std::uint64_t quality(const ClusteringContext& ctx, const Partition& partition) {
  check_partition(partition, ctx.rows());
  std::uint64_t score = 0;
  for (std::size_t a = 0; a < partition.size(); ++a) {
    score += intra_set_measures(ctx, partition.clusters[a]).dissim;
    for (std::size_t b = a + 1; b < partition.size(); ++b) {
      score += inter_set_measures(ctx, partition.clusters[a], partition.clusters[b]).sim;
    }
  }
  return score;
}

}  // namespace viewsel
