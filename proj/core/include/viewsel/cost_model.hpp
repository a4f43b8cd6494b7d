#pragma once

#include <cstdint>
#include <string_view>

#include "viewsel/catalog.hpp"

namespace viewsel {

struct CandidateView;

enum class EstimationMethod { yao, cardenas };

std::string_view to_string(EstimationMethod method);

struct CostEstimate {
  double rows = 0.0;
  double bytes = 0.0;
  EstimationMethod method = EstimationMethod::cardenas;

  bool operator==(const CostEstimate&) const = default;
};

struct CostModelOptions {
  // Cardenas is used when ms(F) / ms(v) reaches this ratio.
  double cardenas_threshold = 100.0;
};

/// Product of all dimension key cardinalities, in double precision.
double max_fact_size(const CatalogStats& stats);

/// Product of the grouping attribute cardinalities; 1 for an empty grouping.
/// Throws ValidationError naming the first attribute without a cardinality.
double max_view_size(const CandidateView& view, const CatalogStats& stats);

/// Expected number of distinct groups when `fact_rows` tuples fall uniformly,
/// with replacement, into `max_view_rows` groups.
double view_rows_cardenas(double max_view_rows, double fact_rows);

/// Same expectation without replacement: `fact_rows` distinct cells drawn from
/// `max_fact_rows` cells spread evenly over `max_view_rows` groups. Requires
/// fact_rows <= max_fact_rows (std::invalid_argument otherwise).
double view_rows_yao(double max_view_rows, double max_fact_rows, double fact_rows);

/// Row and byte estimate of a view. Bytes count one column per grouping
/// attribute and per aggregation (8 bytes for count).
CostEstimate estimate(const CandidateView& view, const CatalogStats& stats,
                      const CostModelOptions& options = {});

}  // namespace viewsel
