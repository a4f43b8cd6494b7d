#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "viewsel/candidate_views.hpp"
#include "viewsel/catalog.hpp"
#include "viewsel/workload.hpp"

namespace viewsel {

enum class ObjectiveKind { profit, ratio, hybrid };

std::string_view to_string(ObjectiveKind kind);
std::optional<ObjectiveKind> objective_from_string(std::string_view name);

struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::profit;
  double alpha = 0.1;               // hybrid switches to ratio at or below it
  double update_query_ratio = 0.0;  // %update / %query
  std::size_t candidate_count = 1;  // |V|, the "number of views" in p(v)
  std::optional<double> storage_budget;  // bytes; required unless profit
  double merge_x = 0.33;

  /// Throws ValidationError describing the first violated constraint.
  void validate() const;
};

/// Views are passed by pointer so callers can form S and S + {v} cheaply.
using ViewSet = std::span<const CandidateView* const>;

/// Rows read to answer `query`: the smallest answering view, capped by |F|.
double query_cost(const ParsedQuery& query, ViewSet views, const CatalogStats& stats);

/// Sum of query_cost over the workload, accumulated in workload order.
double workload_cost(std::span<const ParsedQuery> workload, ViewSet views,
                     const CatalogStats& stats);

/// Refresh cost proxy: the view's estimated rows.
double maintenance_cost(const CandidateView& view);

/// beta = |Q| * (1 / candidate_count) * (%update / %query).
double update_weight(std::size_t workload_size, const ObjectiveConfig& config);

double profit(const CandidateView& view, ViewSet selected, std::span<const ParsedQuery> workload,
              const CatalogStats& stats, const ObjectiveConfig& config);

/// profit / bytes; throws std::invalid_argument for a zero-size view.
double ratio(const CandidateView& view, ViewSet selected, std::span<const ParsedQuery> workload,
             const CatalogStats& stats, const ObjectiveConfig& config);

/// profit while remaining_space / storage_space > alpha, ratio otherwise.
/// remaining_space is measured after adding the view.
double hybrid(const CandidateView& view, ViewSet selected, std::span<const ParsedQuery> workload,
              const CatalogStats& stats, const ObjectiveConfig& config, double remaining_space,
              double storage_space);

bool hybrid_uses_profit(double remaining_space, double storage_space, double alpha);

}  // namespace viewsel
