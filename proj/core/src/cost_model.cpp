#include "viewsel/cost_model.hpp"

#include <cmath>
#include <stdexcept>

#include "viewsel/candidate_views.hpp"
#include "viewsel/errors.hpp"

namespace viewsel {

namespace {

constexpr double kCountBytes = 8.0;

// Sum of log1p(-c / y) for y = top, top - 1, ..., top - terms + 1.
double log_ratio_sum_direct(double c, double top, double terms) {
  double sum = 0.0;
  double compensation = 0.0;
  const auto count = static_cast<std::uint64_t>(terms);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double term = std::log1p(-c / (top - static_cast<double>(i))) - compensation;
    const double next = sum + term;
    compensation = (next - sum) - term;
    sum = next;
  }
  return sum;
}

// Antiderivative of log1p(-c / y) in a form without cancellation for y >> c.
double log_ratio_antiderivative(double c, double y) {
  return y * std::log1p(-c / y) - c * std::log(y - c) + c;
}

// Euler-Maclaurin evaluation of the same sum over integer y in [low, high].
double log_ratio_sum_smooth(double c, double low, double high) {
  auto g = [c](double y) { return std::log1p(-c / y); };
  auto g1 = [c](double y) { return c / (y * (y - c)); };
  const double integral = log_ratio_antiderivative(c, high) - log_ratio_antiderivative(c, low);
  return integral + 0.5 * (g(low) + g(high)) + (g1(high) - g1(low)) / 12.0;
}

}  // namespace

std::string_view to_string(EstimationMethod method) {
  return method == EstimationMethod::yao ? "yao" : "cardenas";
}

double max_fact_size(const CatalogStats& stats) {
  double size = 1.0;
  for (const DimensionStats& dimension : stats.dimensions) {
    size *= static_cast<double>(dimension.key_cardinality);
  }
  return size;
}

double max_view_size(const CandidateView& view, const CatalogStats& stats) {
  double size = 1.0;
  for (const Attribute& attribute : view.grouping) {
    auto cardinality = stats.cardinality(attribute);
    if (!cardinality) {
      throw ValidationError("no cardinality for grouping attribute " + attribute.str());
    }
    size *= static_cast<double>(*cardinality);
  }
  return size;
}

double view_rows_cardenas(double max_view_rows, double fact_rows) {
  if (max_view_rows < 1.0) throw std::invalid_argument("view_rows_cardenas: ms(v) must be >= 1");
  if (fact_rows < 0.0) throw std::invalid_argument("view_rows_cardenas: |F| must be >= 0");
  if (fact_rows == 0.0) return 0.0;
  if (max_view_rows == 1.0) return 1.0;
  // ms(v) * (1 - (1 - 1/ms(v))^|F|)
  return -max_view_rows * std::expm1(fact_rows * std::log1p(-1.0 / max_view_rows));
}

double view_rows_yao(double max_view_rows, double max_fact_rows, double fact_rows) {
  if (max_view_rows < 1.0) throw std::invalid_argument("view_rows_yao: ms(v) must be >= 1");
  if (fact_rows < 0.0) throw std::invalid_argument("view_rows_yao: |F| must be >= 0");
  if (fact_rows > max_fact_rows) {
    throw std::invalid_argument("view_rows_yao: |F| exceeds ms(F)");
  }
  if (fact_rows == 0.0) return 0.0;
  // Each factor (ms(F) d - i + 1) / (ms(F) - i + 1) equals 1 - c / (ms(F) - i + 1)
  // with c = ms(F) / ms(v). A factor reaches zero once i >= ms(F) d + 1, after
  // which every group is hit.
  const double c = max_fact_rows / max_view_rows;
  if (fact_rows >= max_fact_rows - c + 1.0) return max_view_rows;

  constexpr double kDirectTerms = 1 << 20;
  double log_product;
  if (fact_rows <= kDirectTerms) {
    log_product = log_ratio_sum_direct(c, max_fact_rows, fact_rows);
  } else {
    // Terms closest to the singularity at y = c are summed exactly.
    const double low = max_fact_rows - fact_rows + 1.0;
    const double exact_top = low + kDirectTerms - 1.0;
    log_product = log_ratio_sum_direct(c, exact_top, kDirectTerms) +
                  log_ratio_sum_smooth(c, exact_top + 1.0, max_fact_rows);
  }
  return -max_view_rows * std::expm1(log_product);
}

CostEstimate estimate(const CandidateView& view, const CatalogStats& stats,
                      const CostModelOptions& options) {
  const double max_view = max_view_size(view, stats);
  const double max_fact = max_fact_size(stats);
  const auto fact_rows = static_cast<double>(stats.fact_rows);

  CostEstimate result;
  if (max_fact / max_view >= options.cardenas_threshold || fact_rows > max_fact) {
    result.method = EstimationMethod::cardenas;
    result.rows = view_rows_cardenas(max_view, fact_rows);
  } else {
    result.method = EstimationMethod::yao;
    result.rows = view_rows_yao(max_view, max_fact, fact_rows);
  }

  double width = 0.0;
  for (const Attribute& attribute : view.grouping) {
    auto bytes = stats.column_bytes(attribute);
    if (!bytes) throw ValidationError("no column width for attribute " + attribute.str());
    width += static_cast<double>(*bytes);
  }
  for (const Aggregation& aggregation : view.aggregations) {
    if (aggregation.op == AggregateOp::count) {
      width += kCountBytes;
      continue;
    }
    auto bytes = stats.column_bytes(aggregation.measure);
    if (!bytes) throw ValidationError("no column width for measure " + aggregation.measure.str());
    width += static_cast<double>(*bytes);
  }
  result.bytes = result.rows * width;
  return result;
}

}  // namespace viewsel
