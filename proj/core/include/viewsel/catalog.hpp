#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "viewsel/workload.hpp"

namespace viewsel {

struct DimensionStats {
  std::string table;
  std::string key;  // key column, shared by the dimension and the fact table
  std::uint64_t key_cardinality = 1;

  bool operator==(const DimensionStats&) const = default;
};

struct ColumnStats {
  std::uint64_t cardinality = 1;
  std::uint64_t bytes = 1;

  bool operator==(const ColumnStats&) const = default;
};

/// Star-schema statistics consumed by the cost model. Immutable once loaded.
struct CatalogStats {
  std::string fact_table;
  std::uint64_t fact_rows = 0;
  std::vector<DimensionStats> dimensions;
  std::map<Attribute, ColumnStats> attributes;
  std::map<Attribute, std::uint64_t> measures;  // bytes per value

  std::optional<std::uint64_t> cardinality(const Attribute& attribute) const;
  /// Width of a grouping attribute or a measure.
  std::optional<std::uint64_t> column_bytes(const Attribute& attribute) const;
  const DimensionStats* dimension(std::string_view table) const;

  bool operator==(const CatalogStats&) const = default;
};

/// Parses and validates a statistics document (JSON). Throws ParseError for
/// malformed JSON, ValidationError naming the field for schema violations.
CatalogStats load_stats(std::string_view document);

/// Serializes to the same JSON format load_stats reads.
std::string dump_stats(const CatalogStats& stats);

/// One diagnostic per workload attribute lacking a cardinality or width, and
/// per measure lacking a width. Empty means the workload is fully covered.
std::vector<std::string> validate_against_workload(const CatalogStats& stats,
                                                   std::span<const ParsedQuery> workload);

}  // namespace viewsel
