#include "viewsel/candidate_views.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <stdexcept>

namespace viewsel {

namespace {

bool contains_all(const auto& haystack, const auto& needles) {
  return std::includes(haystack.begin(), haystack.end(), needles.begin(), needles.end());
}

// Predicates on grouping attributes are re-applied on top of the view.
void drop_grouped_predicates(CandidateView& view) {
  std::erase_if(view.predicates, [&](const SelectionPredicate& predicate) {
    return view.grouping.contains(predicate.attribute);
  });
}

std::vector<std::size_t> merged_leaves(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

bool CandidateView::same_content(const CandidateView& other) const {
  return tables == other.tables && joins == other.joins && grouping == other.grouping &&
         predicates == other.predicates && aggregations == other.aggregations;
}

double CandidateView::rows() const {
  if (!estimate) throw std::logic_error("view " + std::to_string(id) + " has no cost estimate");
  return estimate->rows;
}

double CandidateView::bytes() const {
  if (!estimate) throw std::logic_error("view " + std::to_string(id) + " has no cost estimate");
  return estimate->bytes;
}

CandidateView view_from_query(const ParsedQuery& query) {
  CandidateView view;
  view.tables = query.tables;
  view.joins = query.joins;
  view.grouping = query.grouping;
  view.predicates = query.predicates;
  view.aggregations = query.aggregations;
  view.leaves = {query.id};
  view.source_queries = {query.id};
  drop_grouped_predicates(view);
  return view;
}

CandidateView merge_view_pair(const CandidateView& first, const CandidateView& second) {
  CandidateView merged;
  std::set_union(first.tables.begin(), first.tables.end(), second.tables.begin(),
                 second.tables.end(), std::inserter(merged.tables, merged.tables.end()));
  std::set_union(first.joins.begin(), first.joins.end(), second.joins.begin(),
                 second.joins.end(), std::inserter(merged.joins, merged.joins.end()));

  for (const auto* source : {&first, &second}) {
    for (const Aggregation& aggregation : source->aggregations) {
      if (aggregation.op == AggregateOp::avg) {
        merged.aggregations.insert({AggregateOp::sum, aggregation.measure});
        merged.aggregations.insert({AggregateOp::count, aggregation.measure});
      } else {
        merged.aggregations.insert(aggregation);
      }
    }
  }

  std::set_union(first.grouping.begin(), first.grouping.end(), second.grouping.begin(),
                 second.grouping.end(), std::inserter(merged.grouping, merged.grouping.end()));
  std::vector<SelectionPredicate> unshared;
  std::set_symmetric_difference(first.predicates.begin(), first.predicates.end(),
                                second.predicates.begin(), second.predicates.end(),
                                std::back_inserter(unshared));
  for (const SelectionPredicate& predicate : unshared) merged.grouping.insert(predicate.attribute);
  std::set_intersection(first.predicates.begin(), first.predicates.end(),
                        second.predicates.begin(), second.predicates.end(),
                        std::inserter(merged.predicates, merged.predicates.end()));
  drop_grouped_predicates(merged);

  merged.leaves = merged_leaves(first.leaves, second.leaves);
  merged.parents = {first.leaves, second.leaves};
  std::set_union(first.source_queries.begin(), first.source_queries.end(),
                 second.source_queries.begin(), second.source_queries.end(),
                 std::inserter(merged.source_queries, merged.source_queries.end()));
  return merged;
}

bool can_answer(const CandidateView& view, const ParsedQuery& query) {
  if (!contains_all(view.tables, query.tables)) return false;
  if (!contains_all(view.grouping, query.grouping)) return false;
  // A view predicate the query lacks has already discarded rows the query needs.
  if (!contains_all(query.predicates, view.predicates)) return false;
  for (const SelectionPredicate& predicate : query.predicates) {
    if (!view.predicates.contains(predicate) && !view.grouping.contains(predicate.attribute)) {
      return false;
    }
  }
  for (const Aggregation& aggregation : query.aggregations) {
    if (aggregation.op != AggregateOp::avg) {
      if (!view.aggregations.contains(aggregation)) return false;
      continue;
    }
    const bool from_parts = view.aggregations.contains({AggregateOp::sum, aggregation.measure}) &&
                            view.aggregations.contains({AggregateOp::count, aggregation.measure});
    // A stored average is only usable without re-aggregation.
    const bool stored = view.aggregations.contains(aggregation) && view.grouping == query.grouping;
    if (!from_parts && !stored) return false;
  }
  return true;
}

bool merge_gate_passes(double merged_cost, double first_cost, double second_cost,
                       const MergeOptions& options) {
  const double bound = (first_cost + second_cost) * options.x;
  return options.gate == MergeGate::paper ? merged_cost >= bound : merged_cost <= bound;
}

std::vector<CandidateView> view_gen(std::span<const CandidateView> previous,
                                    const MergeOptions& options, const ViewCostFn& cost) {
  std::vector<const CandidateView*> ordered;
  for (const CandidateView& view : previous) ordered.push_back(&view);
  std::sort(ordered.begin(), ordered.end(),
            [](const CandidateView* a, const CandidateView* b) { return a->leaves < b->leaves; });

  std::map<std::vector<std::size_t>, double> costs;
  auto cost_of = [&](const CandidateView& view) {
    auto [it, inserted] = costs.try_emplace(view.leaves, 0.0);
    if (inserted) it->second = cost(view);
    return it->second;
  };

  std::vector<CandidateView> generated;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const CandidateView& v = *ordered[i];
    if (v.leaves.empty()) throw std::invalid_argument("view_gen: view without leaf list");
    const std::size_t prefix = v.leaves.size() - 1;
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      const CandidateView& u = *ordered[j];
      if (u.leaves.size() != v.leaves.size()) {
        throw std::invalid_argument("view_gen: views of one level must have equal leaf counts");
      }
      if (!std::equal(v.leaves.begin(), v.leaves.begin() + static_cast<std::ptrdiff_t>(prefix),
                      u.leaves.begin())) {
        break;  // sorted order: no later view shares the prefix
      }
      if (!(v.leaves.back() < u.leaves.back())) continue;
      CandidateView merged = merge_view_pair(v, u);
      if (merge_gate_passes(cost(merged), cost_of(v), cost_of(u), options)) {
        generated.push_back(std::move(merged));
        if (generated.size() > options.max_views_per_level) {
          throw std::length_error("view_gen: more than " +
                                  std::to_string(options.max_views_per_level) +
                                  " views on one lattice level");
        }
      }
    }
  }
  return generated;
}

MergeResult merged_view_generation(std::span<const CandidateView> leaves,
                                   const MergeOptions& options, const ViewCostFn& cost) {
  MergeResult result;
  std::vector<CandidateView> kept(leaves.begin(), leaves.end());
  for (const CandidateView& leaf : kept) {
    if (leaf.leaves.size() != 1) {
      throw std::invalid_argument("merged_view_generation: inputs must be leaf views");
    }
  }
  result.level_sizes.push_back(kept.size());

  std::vector<CandidateView> level = kept;
  while (!level.empty()) {
    std::vector<CandidateView> next = view_gen(level, options, cost);
    if (next.empty()) break;
    result.level_sizes.push_back(next.size());
    std::set<std::vector<std::size_t>> removed;
    for (const CandidateView& view : next) {
      removed.insert(view.parents.begin(), view.parents.end());
    }
    std::erase_if(kept, [&](const CandidateView& view) { return removed.contains(view.leaves); });
    kept.insert(kept.end(), next.begin(), next.end());
    level = std::move(next);
  }
  result.views = std::move(kept);
  return result;
}

}  // namespace viewsel
