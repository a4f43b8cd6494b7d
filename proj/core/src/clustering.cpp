#include "viewsel/clustering.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace viewsel {

namespace {

struct Cluster {
  std::vector<std::size_t> members;
  std::vector<std::int64_t> column_counts;
  std::int64_t total_ones = 0;
  bool alive = true;

  std::size_t id() const { return *std::min_element(members.begin(), members.end()); }
};

class LocalSearch {
 public:
  LocalSearch(const ClusteringContext& ctx, std::uint64_t seed)
      : ctx_(ctx), rng_(seed), ones_(ctx.rows()), owner_(ctx.rows()) {
    for (std::size_t row = 0; row < ctx.rows(); ++row) {
      for (std::size_t j = 0; j < ctx.columns(); ++j) {
        if (ctx.cell(row, j)) ones_[row].push_back(j);
      }
      Cluster cluster;
      cluster.members = {row};
      cluster.column_counts.assign(ctx.columns(), 0);
      for (std::size_t j : ones_[row]) cluster.column_counts[j] = 1;
      cluster.total_ones = static_cast<std::int64_t>(ones_[row].size());
      clusters_.push_back(std::move(cluster));
      owner_[row] = row;
    }
    // All-singleton score: every pair of rows sharing a column contributes one.
    std::vector<std::uint64_t> per_column(ctx.columns(), 0);
    for (const auto& row_ones : ones_) {
      for (std::size_t j : row_ones) ++per_column[j];
    }
    for (std::uint64_t c : per_column) quality_ += c * (c - (c > 0 ? 1 : 0)) / 2;
    result_.initial_quality = quality_;
  }

  ClusteringResult run() {
    while (true) {
      merge_phase();
      if (!relocation_phase()) break;
    }
    for (const Cluster& cluster : clusters_) {
      if (cluster.alive) result_.partition.clusters.push_back(cluster.members);
    }
    result_.partition.canonicalize();
    result_.final_quality = quality_;
    return std::move(result_);
  }

 private:
  std::vector<std::size_t> live() const {
    std::vector<std::size_t> slots;
    for (std::size_t s = 0; s < clusters_.size(); ++s) {
      if (clusters_[s].alive) slots.push_back(s);
    }
    return slots;
  }

  // Sum over members l of sim(row, l).
  std::int64_t row_sim(std::size_t row, const Cluster& cluster) const {
    std::int64_t sim = 0;
    for (std::size_t j : ones_[row]) sim += cluster.column_counts[j];
    return sim;
  }

  std::int64_t row_dissim(std::size_t row, const Cluster& cluster, std::int64_t sim) const {
    const auto size = static_cast<std::int64_t>(cluster.members.size());
    return static_cast<std::int64_t>(ones_[row].size()) * size - 2 * sim + cluster.total_ones;
  }

  // Dissim(A,B) - Sim(A,B) computed from column counts.
  std::int64_t merge_delta(const Cluster& a, const Cluster& b) const {
    const auto size_a = static_cast<std::int64_t>(a.members.size());
    const auto size_b = static_cast<std::int64_t>(b.members.size());
    std::int64_t sim = 0;
    std::int64_t dissim = 0;
    for (std::size_t j = 0; j < ctx_.columns(); ++j) {
      const std::int64_t ca = a.column_counts[j];
      const std::int64_t cb = b.column_counts[j];
      sim += ca * cb;
      dissim += ca * (size_b - cb) + (size_a - ca) * cb;
    }
    return dissim - sim;
  }

  void absorb(Cluster& into, Cluster& from) {
    for (std::size_t row : from.members) owner_[row] = static_cast<std::size_t>(&into - clusters_.data());
    into.members.insert(into.members.end(), from.members.begin(), from.members.end());
    for (std::size_t j = 0; j < ctx_.columns(); ++j) into.column_counts[j] += from.column_counts[j];
    into.total_ones += from.total_ones;
    from.alive = false;
    from.members.clear();
  }

  // Repeatedly merges the pair with the most negative delta. The delta matrix
  // is linear in its arguments, so the merged row is the sum of both rows.
  void merge_phase() {
    std::vector<std::size_t> slots = live();
    const std::size_t z = slots.size();
    if (z < 2) return;
    std::vector<std::int64_t> delta(z * z, 0);
    std::vector<std::size_t> ids(z);
    for (std::size_t a = 0; a < z; ++a) ids[a] = clusters_[slots[a]].id();
    const bool all_singletons = z == ctx_.rows();
    for (std::size_t a = 0; a < z; ++a) {
      for (std::size_t b = a + 1; b < z; ++b) {
        std::int64_t d;
        if (all_singletons) {
          const Measures m = pair_measures(ctx_, clusters_[slots[a]].members.front(),
                                           clusters_[slots[b]].members.front());
          d = static_cast<std::int64_t>(m.dissim) - static_cast<std::int64_t>(m.sim);
        } else {
          d = merge_delta(clusters_[slots[a]], clusters_[slots[b]]);
        }
        delta[a * z + b] = delta[b * z + a] = d;
      }
    }
    std::vector<bool> active(z, true);
    while (true) {
      std::int64_t best = 0;
      std::size_t best_a = z;
      std::size_t best_b = z;
      for (std::size_t a = 0; a < z; ++a) {
        if (!active[a]) continue;
        for (std::size_t b = 0; b < z; ++b) {
          if (b == a || !active[b] || ids[a] > ids[b]) continue;
          const std::int64_t d = delta[a * z + b];
          if (d < best || (d == best && d < 0 && best_a < z &&
                           std::pair(ids[a], ids[b]) < std::pair(ids[best_a], ids[best_b]))) {
            best = d;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best_a == z) break;
      Cluster& into = clusters_[slots[best_a]];
      Cluster& from = clusters_[slots[best_b]];
      absorb(into, from);
      quality_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(quality_) + best);
      result_.trace.push_back({ClusterStep::Kind::merge, ids[best_a], ids[best_b], 0, best, quality_});
      active[best_b] = false;
      for (std::size_t c = 0; c < z; ++c) {
        if (!active[c] || c == best_a) continue;
        const std::int64_t d = delta[best_a * z + c] + delta[best_b * z + c];
        delta[best_a * z + c] = delta[c * z + best_a] = d;
      }
      ids[best_a] = std::min(ids[best_a], ids[best_b]);
    }
  }

  // Returns true when at least one row moved.
  bool relocation_phase() {
    std::vector<std::size_t> order(ctx_.rows());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    bool moved_any = false;
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t row : order) {
        if (try_move(row)) {
          moved = true;
          moved_any = true;
        }
      }
    }
    return moved_any;
  }

  bool try_move(std::size_t row) {
    Cluster& source = clusters_[owner_[row]];
    const auto self = static_cast<std::int64_t>(ones_[row].size());
    // Measures against the source cluster without the row itself.
    const std::int64_t sim_rest = row_sim(row, source) - self;
    const std::int64_t dissim_rest = row_dissim(row, source, row_sim(row, source));
    const std::int64_t leave = -dissim_rest + sim_rest;

    std::int64_t best = 0;
    std::size_t best_slot = clusters_.size();  // clusters_.size() == no move
    std::size_t best_id = std::numeric_limits<std::size_t>::max();
    for (std::size_t s = 0; s < clusters_.size(); ++s) {
      const Cluster& target = clusters_[s];
      if (!target.alive || s == owner_[row]) continue;
      const std::int64_t sim = row_sim(row, target);
      const std::int64_t d = leave + row_dissim(row, target, sim) - sim;
      const std::size_t id = target.id();
      if (d < best || (d == best && d < 0 && id < best_id)) {
        best = d;
        best_slot = s;
        best_id = id;
      }
    }
    bool split = false;
    if (source.members.size() > 1 && leave < best) {
      best = leave;
      split = true;
    }
    if (best >= 0) return false;

    const std::size_t source_id = source.id();
    const std::size_t source_slot = owner_[row];
    std::erase(source.members, row);
    for (std::size_t j : ones_[row]) --source.column_counts[j];
    source.total_ones -= self;

    std::size_t target_slot = best_slot;
    if (split) {
      // Reuse a dead slot when possible.
      target_slot = clusters_.size();
      for (std::size_t s = 0; s < clusters_.size(); ++s) {
        if (!clusters_[s].alive) {
          target_slot = s;
          break;
        }
      }
      if (target_slot == clusters_.size()) clusters_.emplace_back();
      Cluster& fresh = clusters_[target_slot];
      fresh = Cluster{};
      fresh.column_counts.assign(ctx_.columns(), 0);
    }
    Cluster& target = clusters_[target_slot];
    const std::size_t target_id = split ? row : target.id();
    target.members.push_back(row);
    for (std::size_t j : ones_[row]) ++target.column_counts[j];
    target.total_ones += self;
    owner_[row] = target_slot;
    if (clusters_[source_slot].members.empty()) clusters_[source_slot].alive = false;

    quality_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(quality_) + best);
    result_.trace.push_back({split ? ClusterStep::Kind::split : ClusterStep::Kind::move, source_id,
                             target_id, row, best, quality_});
    return true;
  }

  const ClusteringContext& ctx_;
  std::mt19937_64 rng_;
  std::vector<std::vector<std::size_t>> ones_;
  std::vector<std::size_t> owner_;
  std::vector<Cluster> clusters_;
  std::uint64_t quality_ = 0;
  ClusteringResult result_;
};

std::string_view kind_name(ClusterStep::Kind kind) {
  switch (kind) {
    case ClusterStep::Kind::merge: return "merge";
    case ClusterStep::Kind::move: return "move";
    case ClusterStep::Kind::split: return "split";
  }
  return "?";
}

}  // namespace

ClusteringResult cluster_queries_traced(const ClusteringContext& ctx, std::uint64_t seed) {
  return LocalSearch(ctx, seed).run();
}

Partition cluster_queries(const ClusteringContext& ctx, std::uint64_t seed) {
  return cluster_queries_traced(ctx, seed).partition;
}

std::string format_trace(const std::vector<ClusterStep>& trace) {
  std::ostringstream out;
  for (const ClusterStep& step : trace) {
    out << kind_name(step.kind) << " from=" << step.from << " to=" << step.to;
    if (step.kind != ClusterStep::Kind::merge) out << " row=" << step.row;
    out << " delta=" << step.delta << " q=" << step.quality_after << '\n';
  }
  return out.str();
}

}  // namespace viewsel
