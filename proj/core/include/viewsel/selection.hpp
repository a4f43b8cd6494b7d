#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "viewsel/candidate_views.hpp"
#include "viewsel/catalog.hpp"
#include "viewsel/objectives.hpp"

namespace viewsel {

enum class BudgetOverflow {
  skip,  // drop an unaffordable best view and keep scanning
  stop,  // end selection at the first unaffordable best view
};

struct SelectionOptions {
  BudgetOverflow overflow = BudgetOverflow::skip;
};

struct SelectionStep {
  enum class Action { selected, skipped_budget };

  std::size_t view_id = 0;
  double score = 0.0;             // objective value at decision time
  double remaining_budget = 0.0;  // after the decision; 0 for unbudgeted runs
  Action action = Action::selected;
};

struct Configuration {
  std::vector<CandidateView> selected;  // selection order
  std::vector<SelectionStep> trace;
  double total_bytes = 0.0;
  double initial_workload_cost = 0.0;
  double final_workload_cost = 0.0;
};

/// Greedy construction: repeatedly adds the candidate with the highest
/// objective value given the views already chosen, while that value is
/// positive. Scores are recomputed every iteration. Ratio and hybrid runs
/// respect config.storage_budget. Ties go to the smaller view, then the lower
/// id. Every candidate must carry a cost estimate.
Configuration select_views(std::span<const CandidateView> candidates,
                           std::span<const ParsedQuery> workload, const CatalogStats& stats,
                           const ObjectiveConfig& config, const SelectionOptions& options = {});

}  // namespace viewsel
