#include "viewsel/catalog.hpp"

#include "json.hpp"

#include <set>

#include "viewsel/errors.hpp"

namespace viewsel {

namespace {

using nlohmann::json;

const json& require(const json& object, std::string_view field, std::string_view where) {
  auto it = object.find(field);
  if (it == object.end()) {
    throw ValidationError("statistics: missing field '" + std::string(where) + std::string(field) + "'");
  }
  return *it;
}

std::string require_string(const json& object, std::string_view field, std::string_view where) {
  const json& value = require(object, field, where);
  if (!value.is_string() || value.get<std::string>().empty()) {
    throw ValidationError("statistics: field '" + std::string(where) + std::string(field) +
                          "' must be a non-empty string");
  }
  return value.get<std::string>();
}

std::int64_t require_integer(const json& object, std::string_view field, std::string_view where) {
  const json& value = require(object, field, where);
  if (!value.is_number_integer()) {
    throw ValidationError("statistics: field '" + std::string(where) + std::string(field) +
                          "' must be an integer");
  }
  return value.get<std::int64_t>();
}

std::uint64_t require_positive(const json& object, std::string_view field, std::string_view where) {
  const std::int64_t value = require_integer(object, field, where);
  if (value < 1) {
    throw ValidationError("statistics: field '" + std::string(where) + std::string(field) +
                          "' must be >= 1, got " + std::to_string(value));
  }
  return static_cast<std::uint64_t>(value);
}

std::string lowercase(std::string text) {
  for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return text;
}

Attribute parse_field_name(const std::string& name, std::string_view section) {
  try {
    return Attribute::parse(name);
  } catch (const InputError&) {
    throw ValidationError("statistics: key '" + std::string(section) + "." + name +
                          "' is not of the form table.column");
  }
}

}  // namespace

std::optional<std::uint64_t> CatalogStats::cardinality(const Attribute& attribute) const {
  if (auto it = attributes.find(attribute); it != attributes.end()) return it->second.cardinality;
  return std::nullopt;
}

std::optional<std::uint64_t> CatalogStats::column_bytes(const Attribute& attribute) const {
  if (auto it = attributes.find(attribute); it != attributes.end()) return it->second.bytes;
  if (auto it = measures.find(attribute); it != measures.end()) return it->second;
  return std::nullopt;
}

const DimensionStats* CatalogStats::dimension(std::string_view table) const {
  for (const DimensionStats& dimension : dimensions) {
    if (dimension.table == table) return &dimension;
  }
  return nullptr;
}

CatalogStats load_stats(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& error) {
    throw ParseError(std::string("statistics: malformed JSON: ") + error.what(), error.byte);
  }
  if (!root.is_object()) throw ValidationError("statistics: top-level value must be an object");

  CatalogStats stats;
  stats.fact_table = lowercase(require_string(root, "fact_table", ""));
  const std::int64_t fact_rows = require_integer(root, "fact_rows", "");
  if (fact_rows < 0) {
    throw ValidationError("statistics: field 'fact_rows' must be >= 0, got " +
                          std::to_string(fact_rows));
  }
  stats.fact_rows = static_cast<std::uint64_t>(fact_rows);

  const json& dimensions = require(root, "dimensions", "");
  if (!dimensions.is_array()) throw ValidationError("statistics: field 'dimensions' must be an array");
  std::set<std::string> seen_tables;
  for (std::size_t i = 0; i < dimensions.size(); ++i) {
    const std::string where = "dimensions[" + std::to_string(i) + "].";
    const json& entry = dimensions[i];
    if (!entry.is_object()) throw ValidationError("statistics: '" + where + "' must be an object");
    DimensionStats dimension{lowercase(require_string(entry, "table", where)),
                             lowercase(require_string(entry, "key", where)),
                             require_positive(entry, "key_cardinality", where)};
    if (!seen_tables.insert(dimension.table).second) {
      throw ValidationError("statistics: duplicate dimension '" + dimension.table + "'");
    }
    stats.dimensions.push_back(std::move(dimension));
  }

  const json& attributes = require(root, "attributes", "");
  if (!attributes.is_object()) throw ValidationError("statistics: field 'attributes' must be an object");
  for (const auto& [name, entry] : attributes.items()) {
    const std::string where = "attributes." + name + ".";
    if (!entry.is_object()) throw ValidationError("statistics: '" + where + "' must be an object");
    stats.attributes[parse_field_name(name, "attributes")] = {
        require_positive(entry, "cardinality", where), require_positive(entry, "bytes", where)};
  }

  if (auto it = root.find("measures"); it != root.end()) {
    if (!it->is_object()) throw ValidationError("statistics: field 'measures' must be an object");
    for (const auto& [name, entry] : it->items()) {
      const std::string where = "measures." + name + ".";
      if (!entry.is_object()) throw ValidationError("statistics: '" + where + "' must be an object");
      stats.measures[parse_field_name(name, "measures")] = require_positive(entry, "bytes", where);
    }
  }
  return stats;
}

std::string dump_stats(const CatalogStats& stats) {
  json root;
  root["fact_table"] = stats.fact_table;
  root["fact_rows"] = stats.fact_rows;
  root["dimensions"] = json::array();
  for (const DimensionStats& dimension : stats.dimensions) {
    root["dimensions"].push_back({{"table", dimension.table},
                                  {"key", dimension.key},
                                  {"key_cardinality", dimension.key_cardinality}});
  }
  root["attributes"] = json::object();
  for (const auto& [attribute, column] : stats.attributes) {
    root["attributes"][attribute.str()] = {{"cardinality", column.cardinality},
                                           {"bytes", column.bytes}};
  }
  root["measures"] = json::object();
  for (const auto& [attribute, bytes] : stats.measures) {
    root["measures"][attribute.str()] = {{"bytes", bytes}};
  }
  return root.dump(2);
}

std::vector<std::string> validate_against_workload(const CatalogStats& stats,
                                                   std::span<const ParsedQuery> workload) {
  std::set<Attribute> attributes;
  std::set<Attribute> measures;
  for (const ParsedQuery& query : workload) {
    const auto extracted = extract_attributes(query);
    attributes.insert(extracted.begin(), extracted.end());
    for (const Aggregation& aggregation : query.aggregations) measures.insert(aggregation.measure);
  }
  std::vector<std::string> diagnostics;
  for (const Attribute& attribute : attributes) {
    if (!stats.attributes.contains(attribute)) {
      diagnostics.push_back("attribute " + attribute.str() + " has no cardinality/bytes entry");
    }
  }
  for (const Attribute& measure : measures) {
    if (!stats.measures.contains(measure) && !stats.attributes.contains(measure)) {
      diagnostics.push_back("measure " + measure.str() + " has no bytes entry");
    }
  }
  return diagnostics;
}

}  // namespace viewsel
