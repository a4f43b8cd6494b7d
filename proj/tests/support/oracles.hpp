#pragma once

// Brute-force reference evaluations used by the unit and acceptance suites.
// Nothing here calls into the implementation paths these oracles check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <unordered_set>
#include <vector>

#include "viewsel/harness.hpp"

namespace viewsel::testing {

using Rows = std::vector<std::vector<int>>;

struct PairCounts {
  std::uint64_t sim = 0;
  std::uint64_t dissim = 0;
};

// Per-column definition: both 1 -> similarity; different -> dissimilarity.
inline PairCounts definitional_pair(const Rows& rows, std::size_t k, std::size_t l) {
  PairCounts out;
  for (std::size_t j = 0; j < rows[k].size(); ++j) {
    if (rows[k][j] == 1 && rows[l][j] == 1) ++out.sim;
    if (rows[k][j] != rows[l][j]) ++out.dissim;
  }
  return out;
}

inline std::uint64_t definitional_quality(const Rows& rows,
                                          const std::vector<std::vector<std::size_t>>& clusters) {
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      for (std::size_t k : clusters[a]) {
        for (std::size_t l : clusters[b]) total += definitional_pair(rows, k, l).sim;
      }
    }
    const auto& c = clusters[a];
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) total += definitional_pair(rows, c[i], c[j]).dissim;
    }
  }
  return total;
}

// Every set partition of {0..n-1}, via restricted growth strings.
inline void for_each_partition(std::size_t n,
                               const std::function<void(const std::vector<std::vector<std::size_t>>&)>& visit) {
  std::vector<std::size_t> label(n, 0);
  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      std::vector<std::vector<std::size_t>> clusters(used);
      for (std::size_t r = 0; r < n; ++r) clusters[label[r]].push_back(r);
      visit(clusters);
      return;
    }
    for (std::size_t c = 0; c <= used; ++c) {
      label[i] = c;
      recurse(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) {
    visit({});
    return;
  }
  recurse(0, 0);
}

inline std::uint64_t exhaustive_min_quality(const Rows& rows) {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for_each_partition(rows.size(), [&](const auto& clusters) {
    best = std::min(best, definitional_quality(rows, clusters));
  });
  return best;
}

inline Rows random_rows(std::mt19937_64& rng, std::size_t n, std::size_t p, double density = 0.4) {
  std::bernoulli_distribution bit(density);
  Rows rows(n, std::vector<int>(p, 0));
  for (auto& row : rows) {
    for (int& cell : row) cell = bit(rng) ? 1 : 0;
  }
  return rows;
}

// Rows in 1-3 blocks with disjoint column ranges. Every row sets the first
// column of its block and each other block column with probability `fill`.
inline Rows planted_blocks(std::mt19937_64& rng, std::size_t n, std::size_t p, double fill = 0.8) {
  const std::size_t blocks = std::min<std::size_t>(n, 1 + rng() % 3);
  Rows rows(n, std::vector<int>(p, 0));
  std::vector<std::size_t> block_of(n);
  for (std::size_t i = 0; i < n; ++i) block_of[i] = i < blocks ? i : rng() % blocks;
  std::shuffle(block_of.begin(), block_of.end(), rng);
  const std::size_t width = p / blocks;
  std::bernoulli_distribution keep(fill);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = block_of[i] * width;
    rows[i][begin] = 1;
    for (std::size_t j = begin + 1; j < begin + width; ++j) rows[i][j] = keep(rng) ? 1 : 0;
  }
  return rows;
}

struct MonteCarlo {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Balls into bins: mean number of occupied bins.
inline MonteCarlo occupied_bins(std::uint64_t bins, std::uint64_t balls, std::size_t trials,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, bins - 1);
  std::vector<std::uint32_t> stamp(bins, 0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t t = 1; t <= trials; ++t) {
    std::uint64_t occupied = 0;
    for (std::uint64_t b = 0; b < balls; ++b) {
      auto& s = stamp[pick(rng)];
      if (s != t) {
        s = static_cast<std::uint32_t>(t);
        ++occupied;
      }
    }
    sum += static_cast<double>(occupied);
    sum_sq += static_cast<double>(occupied) * static_cast<double>(occupied);
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double variance = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(variance / n)};
}

// Exact expectation of distinct groups over all size-k subsets of `cells`
// cells, cell c belonging to group c / (cells / groups).
inline double exhaustive_distinct_groups(std::uint64_t groups, std::uint64_t cells, std::uint64_t k) {
  const std::uint64_t per_group = cells / groups;
  std::vector<int> choose(cells, 0);
  std::fill(choose.end() - static_cast<std::ptrdiff_t>(k), choose.end(), 1);
  double total = 0.0;
  double count = 0.0;
  do {
    std::set<std::uint64_t> seen;
    for (std::uint64_t c = 0; c < cells; ++c) {
      if (choose[c]) seen.insert(c / per_group);
    }
    total += static_cast<double>(seen.size());
    count += 1.0;
  } while (std::next_permutation(choose.begin(), choose.end()));
  return total / count;
}

// Distinct grouping tuples by hashing, independent of the harness's
// sort-based count.
inline std::size_t hash_group_count(const harness::MicroWarehouse& warehouse,
                                    const std::vector<Attribute>& grouping,
                                    const std::function<bool(std::size_t)>& keep) {
  struct VectorHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
      std::size_t h = 0;
      for (std::int64_t x : v) h = h * 1000003u ^ std::hash<std::int64_t>{}(x);
      return h;
    }
  };
  auto lookup = [&](const Attribute& attribute, std::size_t row) -> std::int64_t {
    const harness::Table& fact = warehouse.fact;
    if (attribute.table == fact.name) return fact.columns[fact.column_index(attribute.column)][row];
    const DimensionStats* dimension = warehouse.stats.dimension(attribute.table);
    const std::int64_t key = fact.columns[fact.column_index(dimension->key)][row];
    if (attribute.column == dimension->key) return key;
    const harness::Table& table = warehouse.dimensions.at(attribute.table);
    return table.columns[table.column_index(attribute.column)][static_cast<std::size_t>(key)];
  };
  std::unordered_set<std::vector<std::int64_t>, VectorHash> seen;
  for (std::size_t row = 0; row < warehouse.fact.rows; ++row) {
    if (!keep(row)) continue;
    std::vector<std::int64_t> tuple;
    for (const Attribute& attribute : grouping) tuple.push_back(lookup(attribute, row));
    seen.insert(std::move(tuple));
  }
  return seen.size();
}

}  // namespace viewsel::testing
