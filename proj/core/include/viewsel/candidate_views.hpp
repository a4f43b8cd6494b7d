#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "viewsel/cost_model.hpp"
#include "viewsel/workload.hpp"

namespace viewsel {

/// A materializable GPSJ view and its position in a cluster's merge lattice.
struct CandidateView {
  std::size_t id = 0;  // assigned by the pipeline once candidates are final
  std::set<std::string> tables;
  std::set<JoinCondition> joins;
  std::set<Attribute> grouping;
  std::set<SelectionPredicate> predicates;
  std::set<Aggregation> aggregations;

  // Sorted query ids of the leaf views this view was merged from; identifies
  // the view inside its lattice.
  std::vector<std::size_t> leaves;
  // Leaf lists of the two direct parents; empty for a leaf view.
  std::vector<std::vector<std::size_t>> parents;
  std::set<std::size_t> source_queries;

  std::optional<CostEstimate> estimate;

  /// Equality of the materialized content (tables, joins, grouping,
  /// predicates, aggregations).
  bool same_content(const CandidateView& other) const;

  double rows() const;
  double bytes() const;
};

CandidateView view_from_query(const ParsedQuery& query);

/// Smallest view answering every query either input answers: aggregations
/// are united (avg expanded into sum and count), grouping gains the
/// attributes of every non-shared predicate, and only identical predicates
/// present in both inputs are kept.
CandidateView merge_view_pair(const CandidateView& first, const CandidateView& second);

/// True when the query can be computed from the view alone by filtering on
/// grouping attributes and re-aggregating sum/count/min/max.
bool can_answer(const CandidateView& view, const ParsedQuery& query);

enum class MergeGate {
  paper,     // keep c when cost(c) >= (cost(v) + cost(u)) * x
  inverted,  // keep c when cost(c) <= (cost(v) + cost(u)) * x
};

struct MergeOptions {
  double x = 0.33;
  MergeGate gate = MergeGate::paper;
  // Guard against combinatorial lattices; exceeding it throws.
  std::size_t max_views_per_level = 250000;
};

using ViewCostFn = std::function<double(const CandidateView&)>;

bool merge_gate_passes(double merged_cost, double first_cost, double second_cost,
                       const MergeOptions& options);

/// One lattice level: merges every pair of (k-1)-views sharing their first
/// k-2 leaf ids, the first with the smaller last id, and keeps the result
/// when the cost gate passes.
std::vector<CandidateView> view_gen(std::span<const CandidateView> previous,
                                    const MergeOptions& options, const ViewCostFn& cost);

struct MergeResult {
  std::vector<CandidateView> views;
  std::vector<std::size_t> level_sizes;  // |C_k| for k = 1, 2, ...
};

/// Levelwise merging of one cluster's leaf views. Parents of generated views
/// are removed; the remaining views are returned in lattice order.
MergeResult merged_view_generation(std::span<const CandidateView> leaves,
                                   const MergeOptions& options, const ViewCostFn& cost);

}  // namespace viewsel
