#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace viewsel {

/// A column of the star schema, canonically "table.column" in lowercase.
struct Attribute {
  std::string table;
  std::string column;

  /// Parses "table.column" (case-insensitive). Throws InputError when the
  /// text is not a qualified name.
  static Attribute parse(std::string_view qualified);

  std::string str() const { return table + "." + column; }

  auto operator<=>(const Attribute&) const = default;
};

using Literal = std::variant<std::int64_t, double, std::string>;

std::string render_literal(const Literal& value);

enum class CompareOp { eq, lt, gt, le, ge, between };

std::string_view to_string(CompareOp op);

struct SelectionPredicate {
  Attribute attribute;
  CompareOp op = CompareOp::eq;
  Literal value;
  std::optional<Literal> upper;  // set only for between

  auto operator<=>(const SelectionPredicate&) const = default;
};

std::string render_predicate(const SelectionPredicate& predicate);

enum class AggregateOp { sum, count, min, max, avg };

std::string_view to_string(AggregateOp op);

struct Aggregation {
  AggregateOp op = AggregateOp::sum;
  Attribute measure;

  auto operator<=>(const Aggregation&) const = default;
};

std::string render_aggregation(const Aggregation& aggregation);

/// Equi-join between two columns; stored with left < right.
struct JoinCondition {
  Attribute left;
  Attribute right;

  auto operator<=>(const JoinCondition&) const = default;
};

/// A GPSJ query: aggregation over a star join restricted by a conjunction of
/// simple range predicates, grouped by a set of attributes.
struct ParsedQuery {
  std::size_t id = 0;
  std::set<std::string> tables;
  std::set<JoinCondition> joins;
  std::set<Attribute> join_attributes;
  std::set<SelectionPredicate> predicates;
  std::set<Attribute> grouping;
  std::set<Aggregation> aggregations;
  // Representative attributes in order of first textual appearance; drives
  // the column order of the clustering context.
  std::vector<Attribute> mention_order;

  /// Structural equality: ignores id and mention order.
  bool same_shape(const ParsedQuery& other) const;
};

/// Parses one statement of the supported GPSJ grammar:
///
///   SELECT item {, item} FROM table {, table}
///   [WHERE term {AND term}] [GROUP BY column {, column}] [;]
///
/// where an item is a column or sum|count|min|max|avg(column), and a term is
/// either a column-to-column equi-join or a column compared to a literal with
/// =, <, >, <=, >= or BETWEEN lit AND lit. Unqualified columns resolve to the
/// fact table. Throws ParseError with the offending offset.
ParsedQuery parse_query(std::string_view sql, std::string_view fact_table,
                        std::size_t id = 0);

/// Splits a workload file into statements on top-level semicolons, dropping
/// '--' line comments and blank statements.
std::vector<std::string> split_statements(std::string_view text);

/// Parses every statement of a workload file; ids are 0-based ordinals.
std::vector<ParsedQuery> parse_workload(std::string_view text,
                                        std::string_view fact_table);

/// Renders a query back to the supported grammar. parse_query(render_query(q))
/// has the same shape as q.
std::string render_query(const ParsedQuery& query);

/// Join attributes, selection-predicate attributes and grouping attributes.
std::set<Attribute> extract_attributes(const ParsedQuery& query);

/// Binary query x attribute matrix plus the join-attribute appendix.
class ClusteringContext {
 public:
  ClusteringContext() = default;

  /// Builds a context directly from 0/1 rows; attribute names are synthetic
  /// ("ctx.a<j>") and no column is a join column.
  static ClusteringContext from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t rows() const { return query_ids_.size(); }
  std::size_t columns() const { return attributes_.size(); }

  bool cell(std::size_t row, std::size_t column) const;
  std::span<const std::uint64_t> row_words(std::size_t row) const;
  std::size_t words_per_row() const { return words_per_row_; }
  std::size_t row_count_ones(std::size_t row) const;

  const std::vector<std::size_t>& query_ids() const { return query_ids_; }
  const std::vector<Attribute>& attributes() const { return attributes_; }

  /// Column indices (into attributes()) that form the join appendix.
  const std::vector<std::size_t>& join_columns() const { return join_columns_; }
  bool join_cell(std::size_t row, std::size_t join_column) const;

 private:
  friend ClusteringContext build_context(std::span<const ParsedQuery> workload);

  void allocate(std::size_t rows, std::size_t columns);
  void set(std::size_t row, std::size_t column);

  std::vector<std::size_t> query_ids_;
  std::vector<Attribute> attributes_;
  std::vector<std::size_t> join_columns_;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Throws ValidationError for an empty workload or a query without any
/// representative attribute.
ClusteringContext build_context(std::span<const ParsedQuery> workload);

}  // namespace viewsel
