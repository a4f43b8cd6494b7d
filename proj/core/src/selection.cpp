#include "viewsel/selection.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace viewsel {

namespace {

// Incremental form of profit(): per-query costs under S are cached, and the
// sums run in workload order so results equal the direct evaluation exactly.
class ProfitEvaluator {
 public:
  ProfitEvaluator(std::span<const CandidateView> candidates, std::span<const ParsedQuery> workload,
                  const CatalogStats& stats, const ObjectiveConfig& config)
      : candidates_(candidates),
        current_(workload.size(), static_cast<double>(stats.fact_rows)),
        answers_(candidates.size(), std::vector<bool>(workload.size(), false)),
        beta_(update_weight(workload.size(), config)) {
    for (std::size_t v = 0; v < candidates.size(); ++v) {
      for (std::size_t q = 0; q < workload.size(); ++q) {
        answers_[v][q] = can_answer(candidates[v], workload[q]);
      }
    }
  }

  double workload_cost() const {
    double total = 0.0;
    for (double cost : current_) total += cost;
    return total;
  }

  double profit(std::size_t v) const {
    const double rows = candidates_[v].rows();
    double after = 0.0;
    for (std::size_t q = 0; q < current_.size(); ++q) {
      after += answers_[v][q] ? std::min(current_[q], rows) : current_[q];
    }
    return (workload_cost() - after) - beta_ * rows;
  }

  void add(std::size_t v) {
    const double rows = candidates_[v].rows();
    for (std::size_t q = 0; q < current_.size(); ++q) {
      if (answers_[v][q]) current_[q] = std::min(current_[q], rows);
    }
  }

 private:
  std::span<const CandidateView> candidates_;
  std::vector<double> current_;
  std::vector<std::vector<bool>> answers_;
  double beta_;
};

}  // namespace

Configuration select_views(std::span<const CandidateView> candidates,
                           std::span<const ParsedQuery> workload, const CatalogStats& stats,
                           const ObjectiveConfig& config, const SelectionOptions& options) {
  config.validate();
  for (const CandidateView& view : candidates) {
    if (!view.estimate) throw std::logic_error("select_views: candidate without cost estimate");
  }
  const bool budgeted = config.kind != ObjectiveKind::profit;
  const double budget = budgeted ? *config.storage_budget : 0.0;

  ProfitEvaluator evaluator(candidates, workload, stats, config);
  Configuration result;
  result.initial_workload_cost = evaluator.workload_cost();

  std::vector<std::size_t> pool(candidates.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  double remaining = budget;

  auto score_of = [&](std::size_t v) {
    const double gain = evaluator.profit(v);
    const double bytes = candidates[v].bytes();
    switch (config.kind) {
      case ObjectiveKind::profit:
        return gain;
      case ObjectiveKind::ratio:
        if (!(bytes > 0.0)) throw std::invalid_argument("ratio objective undefined for a view of size 0");
        return gain / bytes;
      case ObjectiveKind::hybrid:
        if (hybrid_uses_profit(remaining - bytes, budget, config.alpha)) return gain;
        if (!(bytes > 0.0)) throw std::invalid_argument("ratio objective undefined for a view of size 0");
        return gain / bytes;
    }
    return 0.0;
  };

  bool done = false;
  while (!done && !pool.empty()) {
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(pool.size());
    for (std::size_t v : pool) scored.emplace_back(score_of(v), v);
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      const double bytes_a = candidates[a.second].bytes();
      const double bytes_b = candidates[b.second].bytes();
      if (bytes_a != bytes_b) return bytes_a < bytes_b;
      if (candidates[a.second].id != candidates[b.second].id) {
        return candidates[a.second].id < candidates[b.second].id;
      }
      return a.second < b.second;
    });

    done = true;
    for (const auto& [score, v] : scored) {
      if (!(score > 0.0)) break;
      const CandidateView& view = candidates[v];
      if (budgeted && view.bytes() > remaining) {
        result.trace.push_back({view.id, score, remaining, SelectionStep::Action::skipped_budget});
        std::erase(pool, v);  // the remaining budget only shrinks
        if (options.overflow == BudgetOverflow::stop) break;
        continue;
      }
      evaluator.add(v);
      std::erase(pool, v);
      if (budgeted) remaining -= view.bytes();
      result.selected.push_back(view);
      result.total_bytes += view.bytes();
      result.trace.push_back({view.id, score, remaining, SelectionStep::Action::selected});
      done = false;
      break;
    }
  }
  result.final_workload_cost = evaluator.workload_cost();
  return result;
}

}  // namespace viewsel
