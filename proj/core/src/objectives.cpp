#include "viewsel/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "viewsel/errors.hpp"

namespace viewsel {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::profit: return "profit";
    case ObjectiveKind::ratio: return "ratio";
    case ObjectiveKind::hybrid: return "hybrid";
  }
  return "?";
}

std::optional<ObjectiveKind> objective_from_string(std::string_view name) {
  if (name == "profit") return ObjectiveKind::profit;
  if (name == "ratio") return ObjectiveKind::ratio;
  if (name == "hybrid") return ObjectiveKind::hybrid;
  return std::nullopt;
}

void ObjectiveConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  if (!(update_query_ratio >= 0.0)) throw ValidationError("update/query ratio must be >= 0");
  if (candidate_count == 0) throw ValidationError("candidate count must be >= 1");
  if (!(merge_x >= 0.0) || !std::isfinite(merge_x)) throw ValidationError("merge x must be finite and >= 0");
  if (kind != ObjectiveKind::profit && (!storage_budget || !(*storage_budget > 0.0))) {
    throw ValidationError(std::string(to_string(kind)) + " objective requires a storage budget > 0");
  }
}

double query_cost(const ParsedQuery& query, ViewSet views, const CatalogStats& stats) {
  double cost = static_cast<double>(stats.fact_rows);
  for (const CandidateView* view : views) {
    if (can_answer(*view, query)) cost = std::min(cost, view->rows());
  }
  return cost;
}

double workload_cost(std::span<const ParsedQuery> workload, ViewSet views,
                     const CatalogStats& stats) {
  double total = 0.0;
  for (const ParsedQuery& query : workload) total += query_cost(query, views, stats);
  return total;
}

double maintenance_cost(const CandidateView& view) { return view.rows(); }

double update_weight(std::size_t workload_size, const ObjectiveConfig& config) {
  const double probability =
      config.update_query_ratio / static_cast<double>(std::max<std::size_t>(config.candidate_count, 1));
  return static_cast<double>(workload_size) * probability;
}

double profit(const CandidateView& view, ViewSet selected, std::span<const ParsedQuery> workload,
              const CatalogStats& stats, const ObjectiveConfig& config) {
  std::vector<const CandidateView*> extended(selected.begin(), selected.end());
  extended.push_back(&view);
  const double before = workload_cost(workload, selected, stats);
  const double after = workload_cost(workload, extended, stats);
  return (before - after) - update_weight(workload.size(), config) * maintenance_cost(view);
}

double ratio(const CandidateView& view, ViewSet selected, std::span<const ParsedQuery> workload,
             const CatalogStats& stats, const ObjectiveConfig& config) {
  const double size = view.bytes();
  if (!(size > 0.0)) {
    throw std::invalid_argument("ratio objective undefined for a view of size 0");
  }
  return profit(view, selected, workload, stats, config) / size;
}

bool hybrid_uses_profit(double remaining_space, double storage_space, double alpha) {
  return remaining_space / storage_space > alpha;
}

double hybrid(const CandidateView& view, ViewSet selected, std::span<const ParsedQuery> workload,
              const CatalogStats& stats, const ObjectiveConfig& config, double remaining_space,
              double storage_space) {
  if (!(storage_space > 0.0)) throw std::invalid_argument("hybrid objective needs storage space > 0");
  if (hybrid_uses_profit(remaining_space, storage_space, config.alpha)) {
    return profit(view, selected, workload, stats, config);
  }
  return ratio(view, selected, workload, stats, config);
}

}  // namespace viewsel
