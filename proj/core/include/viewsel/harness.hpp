#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "viewsel/candidate_views.hpp"
#include "viewsel/catalog.hpp"
#include "viewsel/workload.hpp"

namespace viewsel::harness {

using Value = std::int64_t;

/// Column-major table of integer values.
struct Table {
  std::string name;
  std::vector<std::string> column_names;
  std::vector<std::vector<Value>> columns;
  std::size_t rows = 0;

  std::size_t column_index(const std::string& column) const;  // npos when absent
};

/// Small star schema generated from catalog statistics. Dimension row i holds
/// key value i; every attribute is drawn uniformly from [0, cardinality);
/// measures are drawn uniformly from [1, 100].
struct MicroWarehouse {
  std::uint64_t seed = 0;
  CatalogStats stats;
  Table fact;
  std::map<std::string, Table> dimensions;
};

inline constexpr std::uint64_t kMaxFactRows = 100000;
inline constexpr std::uint64_t kMaxDimensionRows = 1000000;

/// Deterministic in (stats, fact_rows, seed). Throws std::invalid_argument
/// beyond the desk-scale limits above.
MicroWarehouse generate(const CatalogStats& stats, std::uint64_t fact_rows, std::uint64_t seed);

using AggregateValue = std::variant<std::int64_t, double>;

struct ResultRow {
  std::vector<Value> keys;
  std::vector<AggregateValue> aggregates;

  bool operator==(const ResultRow&) const = default;
};

/// Grouped result, rows sorted by key. An empty grouping over an empty input
/// yields no rows, on both evaluation paths.
struct ResultTable {
  std::vector<Attribute> key_columns;
  std::vector<Aggregation> aggregate_columns;
  std::vector<ResultRow> rows;
};

/// Exact number of distinct grouping tuples among fact rows passing the
/// view's predicates.
std::size_t true_view_rows(const MicroWarehouse& warehouse, const CandidateView& view);

/// Evaluates the view over the base tables.
ResultTable materialize(const MicroWarehouse& warehouse, const CandidateView& view);

/// Evaluates the query over the base tables.
ResultTable true_query_answer(const MicroWarehouse& warehouse, const ParsedQuery& query);

/// Answers the query from the materialized view only: filters on view
/// grouping columns, then re-aggregates. Throws std::invalid_argument when
/// can_answer(view, query) is false.
ResultTable rewrite_against(const MicroWarehouse& warehouse, const ParsedQuery& query,
                            const CandidateView& view);

/// Same keys, exact integer aggregates, and averages within `avg_rel_tol`.
/// Writes the first difference to `why` when given.
bool results_match(const ResultTable& a, const ResultTable& b, double avg_rel_tol = 1e-9,
                   std::string* why = nullptr);

/// Line-oriented dump: "table <name> rows=<n>", "columns <c...>", then one
/// "row <v...>" line per row.
std::string dump_warehouse(const MicroWarehouse& warehouse);

/// Integer a literal compares as against values of `attribute`. Strings map
/// to a stable hash modulo the attribute cardinality.
double literal_code(const Literal& literal, const Attribute& attribute, const CatalogStats& stats);

// ---------------------------------------------------------------------------
// Synthetic schemas and workloads

/// Sales star schema with five dimensions (times, products, customers,
/// promotions, channels) and small attribute domains.
CatalogStats sales_stats(std::uint64_t fact_rows);

/// Three-dimension schema with tiny domains, sized for micro-warehouses.
CatalogStats micro_stats();

/// A random GPSJ query over `stats`: a star join of the fact table with one
/// to three dimensions, grouping on up to three attributes, up to three
/// predicates with constants in [0, min(cardinality, constant_range)), and
/// one to three aggregations over the fact measures.
ParsedQuery random_query(const CatalogStats& stats, std::uint64_t seed, std::size_t id,
                         std::int64_t constant_range = 3);

struct WorkloadShape {
  std::size_t queries = 60;
  std::size_t families = 10;  // queries of one family share joins and columns
  std::uint64_t seed = 0;
};

/// SQL text (one statement per line) for a clustered workload: each family
/// fixes a set of dimensions, grouping attributes and predicate attributes,
/// and its queries differ in constants and aggregations.
std::string generate_workload_sql(const CatalogStats& stats, const WorkloadShape& shape);

}  // namespace viewsel::harness
