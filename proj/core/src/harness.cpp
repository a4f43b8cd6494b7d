#include "viewsel/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace viewsel::harness {

namespace {

constexpr Value kMeasureMin = 1;
constexpr Value kMeasureMax = 100;

// Reads one attribute for a fact row through the star join.
struct Accessor {
  const std::vector<Value>* fact_column = nullptr;
  const std::vector<Value>* foreign_key = nullptr;
  const std::vector<Value>* dimension_column = nullptr;  // null: the key itself

  Value operator()(std::size_t row) const {
    if (fact_column) return (*fact_column)[row];
    const Value key = (*foreign_key)[row];
    if (!dimension_column) return key;
    return (*dimension_column)[static_cast<std::size_t>(key)];
  }
};

Accessor resolve(const MicroWarehouse& warehouse, const Attribute& attribute) {
  if (attribute.table == warehouse.fact.name) {
    const std::size_t index = warehouse.fact.column_index(attribute.column);
    if (index == std::string::npos) {
      throw std::invalid_argument("warehouse has no column " + attribute.str());
    }
    return {&warehouse.fact.columns[index], nullptr, nullptr};
  }
  auto it = warehouse.dimensions.find(attribute.table);
  if (it == warehouse.dimensions.end()) {
    throw std::invalid_argument("warehouse has no table " + attribute.table);
  }
  const DimensionStats* dimension = warehouse.stats.dimension(attribute.table);
  const std::size_t fk = warehouse.fact.column_index(dimension->key);
  Accessor accessor{nullptr, &warehouse.fact.columns[fk], nullptr};
  if (attribute.column != dimension->key) {
    const std::size_t index = it->second.column_index(attribute.column);
    if (index == std::string::npos) {
      throw std::invalid_argument("warehouse has no column " + attribute.str());
    }
    accessor.dimension_column = &it->second.columns[index];
  }
  return accessor;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

bool compare(double value, CompareOp op, double low, double high) {
  switch (op) {
    case CompareOp::eq: return value == low;
    case CompareOp::lt: return value < low;
    case CompareOp::gt: return value > low;
    case CompareOp::le: return value <= low;
    case CompareOp::ge: return value >= low;
    case CompareOp::between: return value >= low && value <= high;
  }
  return false;
}

struct CompiledPredicate {
  Accessor accessor;
  CompareOp op;
  double low;
  double high;
};

CompiledPredicate compile(const MicroWarehouse& warehouse, const SelectionPredicate& predicate) {
  const double low = literal_code(predicate.value, predicate.attribute, warehouse.stats);
  const double high = predicate.upper
                          ? literal_code(*predicate.upper, predicate.attribute, warehouse.stats)
                          : low;
  return {resolve(warehouse, predicate.attribute), predicate.op, low, high};
}

struct Accumulator {
  std::int64_t sum = 0;
  std::int64_t count = 0;
  std::int64_t min = std::numeric_limits<std::int64_t>::max();
  std::int64_t max = std::numeric_limits<std::int64_t>::min();
  double real_sum = 0.0;  // stored averages combined as doubles
};

AggregateValue finish(AggregateOp op, const Accumulator& acc) {
  switch (op) {
    case AggregateOp::sum: return acc.sum;
    case AggregateOp::count: return acc.count;
    case AggregateOp::min: return acc.min;
    case AggregateOp::max: return acc.max;
    case AggregateOp::avg: return static_cast<double>(acc.sum) / static_cast<double>(acc.count);
  }
  return std::int64_t{0};
}

ResultTable evaluate(const MicroWarehouse& warehouse, const std::set<std::string>& tables,
                     const std::set<Attribute>& grouping,
                     const std::set<SelectionPredicate>& predicates,
                     const std::set<Aggregation>& aggregations) {
  for (const std::string& table : tables) {
    if (table != warehouse.fact.name && !warehouse.dimensions.contains(table)) {
      throw std::invalid_argument("warehouse has no table " + table);
    }
  }
  std::vector<Accessor> keys;
  for (const Attribute& attribute : grouping) keys.push_back(resolve(warehouse, attribute));
  std::vector<CompiledPredicate> filters;
  for (const SelectionPredicate& predicate : predicates) filters.push_back(compile(warehouse, predicate));
  std::vector<Accessor> measures;
  for (const Aggregation& aggregation : aggregations) {
    measures.push_back(resolve(warehouse, aggregation.measure));
  }

  std::map<std::vector<Value>, std::vector<Accumulator>> groups;
  std::vector<Value> key(keys.size());
  for (std::size_t row = 0; row < warehouse.fact.rows; ++row) {
    bool pass = true;
    for (const CompiledPredicate& filter : filters) {
      if (!compare(static_cast<double>(filter.accessor(row)), filter.op, filter.low, filter.high)) {
        pass = false;
        break;
      }
    }
    if (!pass) continue;
    for (std::size_t k = 0; k < keys.size(); ++k) key[k] = keys[k](row);
    auto& accumulators = groups.try_emplace(key, measures.size()).first->second;
    for (std::size_t m = 0; m < measures.size(); ++m) {
      const Value value = measures[m](row);
      Accumulator& acc = accumulators[m];
      acc.sum += value;
      acc.count += 1;
      acc.min = std::min(acc.min, value);
      acc.max = std::max(acc.max, value);
    }
  }

  ResultTable result;
  result.key_columns.assign(grouping.begin(), grouping.end());
  result.aggregate_columns.assign(aggregations.begin(), aggregations.end());
  for (const auto& [group_key, accumulators] : groups) {
    ResultRow row{group_key, {}};
    for (std::size_t m = 0; m < accumulators.size(); ++m) {
      row.aggregates.push_back(finish(result.aggregate_columns[m].op, accumulators[m]));
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::size_t index_of(const std::vector<Attribute>& columns, const Attribute& attribute) {
  auto it = std::find(columns.begin(), columns.end(), attribute);
  return it == columns.end() ? std::string::npos : static_cast<std::size_t>(it - columns.begin());
}

std::size_t index_of(const std::vector<Aggregation>& columns, const Aggregation& aggregation) {
  auto it = std::find(columns.begin(), columns.end(), aggregation);
  return it == columns.end() ? std::string::npos : static_cast<std::size_t>(it - columns.begin());
}

std::int64_t as_integer(const AggregateValue& value) { return std::get<std::int64_t>(value); }

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

}  // namespace

std::size_t Table::column_index(const std::string& column) const {
  auto it = std::find(column_names.begin(), column_names.end(), column);
  return it == column_names.end() ? std::string::npos
                                   : static_cast<std::size_t>(it - column_names.begin());
}

double literal_code(const Literal& literal, const Attribute& attribute, const CatalogStats& stats) {
  if (const auto* integer = std::get_if<std::int64_t>(&literal)) return static_cast<double>(*integer);
  if (const auto* real = std::get_if<double>(&literal)) return *real;
  const std::uint64_t cardinality = stats.cardinality(attribute).value_or(1ULL << 31);
  return static_cast<double>(fnv1a(std::get<std::string>(literal)) % cardinality);
}

MicroWarehouse generate(const CatalogStats& stats, std::uint64_t fact_rows, std::uint64_t seed) {
  if (fact_rows > kMaxFactRows) {
    throw std::invalid_argument("micro-warehouse limited to " + std::to_string(kMaxFactRows) +
                                " fact rows");
  }
  MicroWarehouse warehouse;
  warehouse.seed = seed;
  warehouse.stats = stats;
  std::mt19937_64 rng(seed);

  for (const DimensionStats& dimension : stats.dimensions) {
    if (dimension.key_cardinality > kMaxDimensionRows) {
      throw std::invalid_argument("dimension " + dimension.table + " too large for a micro-warehouse");
    }
    Table table;
    table.name = dimension.table;
    table.rows = dimension.key_cardinality;
    table.column_names.push_back(dimension.key);
    std::vector<Value> keys(table.rows);
    for (std::size_t i = 0; i < table.rows; ++i) keys[i] = static_cast<Value>(i);
    table.columns.push_back(std::move(keys));
    for (const auto& [attribute, column] : stats.attributes) {
      if (attribute.table != dimension.table || attribute.column == dimension.key) continue;
      table.column_names.push_back(attribute.column);
      std::vector<Value> values(table.rows);
      for (Value& value : values) value = static_cast<Value>(draw(rng, column.cardinality));
      table.columns.push_back(std::move(values));
    }
    warehouse.dimensions.emplace(dimension.table, std::move(table));
  }

  Table& fact = warehouse.fact;
  fact.name = stats.fact_table;
  fact.rows = fact_rows;
  auto add_column = [&](const std::string& name, auto&& generator) {
    fact.column_names.push_back(name);
    std::vector<Value> values(fact_rows);
    for (Value& value : values) value = generator();
    fact.columns.push_back(std::move(values));
  };
  for (const DimensionStats& dimension : stats.dimensions) {
    add_column(dimension.key,
               [&] { return static_cast<Value>(draw(rng, dimension.key_cardinality)); });
  }
  for (const auto& [attribute, column] : stats.attributes) {
    if (attribute.table != stats.fact_table || fact.column_index(attribute.column) != std::string::npos) {
      continue;
    }
    const std::uint64_t cardinality = column.cardinality;
    add_column(attribute.column, [&] { return static_cast<Value>(draw(rng, cardinality)); });
  }
  for (const auto& [attribute, bytes] : stats.measures) {
    if (attribute.table != stats.fact_table || fact.column_index(attribute.column) != std::string::npos) {
      continue;
    }
    add_column(attribute.column, [&] {
      return kMeasureMin + static_cast<Value>(draw(rng, kMeasureMax - kMeasureMin + 1));
    });
  }
  return warehouse;
}

std::size_t true_view_rows(const MicroWarehouse& warehouse, const CandidateView& view) {
  std::vector<Accessor> keys;
  for (const Attribute& attribute : view.grouping) keys.push_back(resolve(warehouse, attribute));
  std::vector<CompiledPredicate> filters;
  for (const SelectionPredicate& predicate : view.predicates) filters.push_back(compile(warehouse, predicate));
  std::vector<std::vector<Value>> tuples;
  for (std::size_t row = 0; row < warehouse.fact.rows; ++row) {
    const bool pass = std::all_of(filters.begin(), filters.end(), [&](const CompiledPredicate& f) {
      return compare(static_cast<double>(f.accessor(row)), f.op, f.low, f.high);
    });
    if (!pass) continue;
    std::vector<Value> tuple(keys.size());
    for (std::size_t k = 0; k < keys.size(); ++k) tuple[k] = keys[k](row);
    tuples.push_back(std::move(tuple));
  }
  std::sort(tuples.begin(), tuples.end());
  return static_cast<std::size_t>(std::unique(tuples.begin(), tuples.end()) - tuples.begin());
}

ResultTable materialize(const MicroWarehouse& warehouse, const CandidateView& view) {
  return evaluate(warehouse, view.tables, view.grouping, view.predicates, view.aggregations);
}

ResultTable true_query_answer(const MicroWarehouse& warehouse, const ParsedQuery& query) {
  return evaluate(warehouse, query.tables, query.grouping, query.predicates, query.aggregations);
}

ResultTable rewrite_against(const MicroWarehouse& warehouse, const ParsedQuery& query,
                            const CandidateView& view) {
  if (!can_answer(view, query)) {
    throw std::invalid_argument("rewrite_against: view cannot answer query " +
                                std::to_string(query.id));
  }
  const ResultTable stored = materialize(warehouse, view);

  struct Residual {
    std::size_t key;
    CompareOp op;
    double low;
    double high;
  };
  std::vector<Residual> residuals;
  for (const SelectionPredicate& predicate : query.predicates) {
    if (view.predicates.contains(predicate)) continue;
    const double low = literal_code(predicate.value, predicate.attribute, warehouse.stats);
    const double high =
        predicate.upper ? literal_code(*predicate.upper, predicate.attribute, warehouse.stats) : low;
    residuals.push_back({index_of(stored.key_columns, predicate.attribute), predicate.op, low, high});
  }
  std::vector<std::size_t> regroup;
  for (const Attribute& attribute : query.grouping) {
    regroup.push_back(index_of(stored.key_columns, attribute));
  }

  struct Source {
    std::size_t primary;    // column of the same aggregate, or the sum part
    std::size_t secondary;  // count part of a split average
  };
  std::vector<Source> sources;
  for (const Aggregation& aggregation : query.aggregations) {
    const std::size_t direct = index_of(stored.aggregate_columns, aggregation);
    if (aggregation.op == AggregateOp::avg) {
      const std::size_t sum = index_of(stored.aggregate_columns, {AggregateOp::sum, aggregation.measure});
      const std::size_t count =
          index_of(stored.aggregate_columns, {AggregateOp::count, aggregation.measure});
      if (sum != std::string::npos && count != std::string::npos) {
        sources.push_back({sum, count});
      } else {
        sources.push_back({direct, std::string::npos});
      }
    } else {
      sources.push_back({direct, std::string::npos});
    }
  }

  std::map<std::vector<Value>, std::vector<Accumulator>> groups;
  for (const ResultRow& row : stored.rows) {
    const bool pass = std::all_of(residuals.begin(), residuals.end(), [&](const Residual& r) {
      return compare(static_cast<double>(row.keys[r.key]), r.op, r.low, r.high);
    });
    if (!pass) continue;
    std::vector<Value> key;
    for (std::size_t index : regroup) key.push_back(row.keys[index]);
    auto& accumulators = groups.try_emplace(key, sources.size()).first->second;
    std::size_t m = 0;
    for (const Aggregation& aggregation : query.aggregations) {
      Accumulator& acc = accumulators[m];
      const Source& source = sources[m];
      switch (aggregation.op) {
        case AggregateOp::sum:
          acc.sum += as_integer(row.aggregates[source.primary]);
          break;
        case AggregateOp::count:
          acc.count += as_integer(row.aggregates[source.primary]);
          break;
        case AggregateOp::min:
          acc.min = std::min(acc.min, as_integer(row.aggregates[source.primary]));
          break;
        case AggregateOp::max:
          acc.max = std::max(acc.max, as_integer(row.aggregates[source.primary]));
          break;
        case AggregateOp::avg:
          if (source.secondary != std::string::npos) {
            acc.sum += as_integer(row.aggregates[source.primary]);
            acc.count += as_integer(row.aggregates[source.secondary]);
          } else {
            // Equal grouping: exactly one stored row per output group.
            acc.real_sum += std::get<double>(row.aggregates[source.primary]);
            acc.count += 1;
          }
          break;
      }
      ++m;
    }
  }

  ResultTable result;
  result.key_columns.assign(query.grouping.begin(), query.grouping.end());
  result.aggregate_columns.assign(query.aggregations.begin(), query.aggregations.end());
  for (const auto& [key, accumulators] : groups) {
    ResultRow row{key, {}};
    for (std::size_t m = 0; m < accumulators.size(); ++m) {
      const Aggregation& aggregation = result.aggregate_columns[m];
      if (aggregation.op == AggregateOp::avg && sources[m].secondary == std::string::npos) {
        row.aggregates.push_back(accumulators[m].real_sum / static_cast<double>(accumulators[m].count));
      } else {
        row.aggregates.push_back(finish(aggregation.op, accumulators[m]));
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

bool results_match(const ResultTable& a, const ResultTable& b, double avg_rel_tol, std::string* why) {
  auto fail = [&](std::string message) {
    if (why) *why = std::move(message);
    return false;
  };
  if (a.key_columns != b.key_columns) return fail("key columns differ");
  if (a.aggregate_columns != b.aggregate_columns) return fail("aggregate columns differ");
  auto label = [&](std::size_t m) {
    return m < a.aggregate_columns.size() ? render_aggregation(a.aggregate_columns[m])
                                          : "#" + std::to_string(m);
  };
  if (a.rows.size() != b.rows.size()) {
    return fail("row counts differ: " + std::to_string(a.rows.size()) + " vs " +
                std::to_string(b.rows.size()));
  }
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    if (a.rows[r].keys != b.rows[r].keys) return fail("keys differ at row " + std::to_string(r));
    if (a.rows[r].aggregates.size() != b.rows[r].aggregates.size()) {
      return fail("aggregate counts differ at row " + std::to_string(r));
    }
    for (std::size_t m = 0; m < a.rows[r].aggregates.size(); ++m) {
      const AggregateValue& x = a.rows[r].aggregates[m];
      const AggregateValue& y = b.rows[r].aggregates[m];
      if (x.index() != y.index()) return fail("aggregate types differ at row " + std::to_string(r));
      if (const auto* xi = std::get_if<std::int64_t>(&x)) {
        if (*xi != std::get<std::int64_t>(y)) {
          return fail("aggregate " + label(m) + " differs at row " +
                      std::to_string(r));
        }
        continue;
      }
      const double xd = std::get<double>(x);
      const double yd = std::get<double>(y);
      if (std::abs(xd - yd) > avg_rel_tol * std::max(std::abs(xd), std::abs(yd))) {
        return fail("average " + label(m) + " differs at row " +
                    std::to_string(r));
      }
    }
  }
  return true;
}

std::string dump_warehouse(const MicroWarehouse& warehouse) {
  std::ostringstream out;
  auto dump_table = [&](const Table& table) {
    out << "table " << table.name << " rows=" << table.rows << '\n';
    out << "columns";
    for (const std::string& name : table.column_names) out << ' ' << name;
    out << '\n';
    for (std::size_t row = 0; row < table.rows; ++row) {
      out << "row";
      for (const auto& column : table.columns) out << ' ' << column[row];
      out << '\n';
    }
  };
  for (const auto& [name, table] : warehouse.dimensions) dump_table(table);
  dump_table(warehouse.fact);
  return out.str();
}

// ---------------------------------------------------------------------------

CatalogStats sales_stats(std::uint64_t fact_rows) {
  CatalogStats stats;
  stats.fact_table = "sales";
  stats.fact_rows = fact_rows;
  stats.dimensions = {{"times", "time_id", 1461},
                      {"products", "prod_id", 1000},
                      {"customers", "cust_id", 5000},
                      {"promotions", "promo_id", 500},
                      {"channels", "channel_id", 5}};
  auto attribute = [&](const char* table, const char* column, std::uint64_t cardinality,
                       std::uint64_t bytes) {
    stats.attributes[{table, column}] = {cardinality, bytes};
  };
  for (const DimensionStats& dimension : stats.dimensions) {
    attribute(dimension.table.c_str(), dimension.key.c_str(), dimension.key_cardinality, 4);
    attribute("sales", dimension.key.c_str(), dimension.key_cardinality, 4);
  }
  attribute("times", "fiscal_day", 7, 2);
  attribute("times", "calendar_month", 12, 2);
  attribute("times", "calendar_year", 4, 2);
  attribute("times", "fiscal_quarter", 4, 2);
  attribute("products", "prod_category", 10, 20);
  attribute("products", "prod_subcategory", 40, 20);
  attribute("products", "supplier_id", 20, 4);
  attribute("customers", "cust_marital_status", 3, 10);
  attribute("customers", "cust_gender", 2, 1);
  attribute("customers", "cust_city", 50, 30);
  attribute("customers", "cust_income_level", 12, 30);
  attribute("promotions", "promo_category", 8, 30);
  attribute("promotions", "promo_subcategory", 20, 30);
  attribute("channels", "channel_class", 3, 20);
  attribute("channels", "channel_desc", 5, 20);
  stats.measures[{"sales", "quantity_sold"}] = 4;
  stats.measures[{"sales", "amount_sold"}] = 8;
  return stats;
}

CatalogStats micro_stats() {
  CatalogStats stats;
  stats.fact_table = "f";
  stats.fact_rows = 5000;
  stats.dimensions = {{"da", "a_id", 20}, {"db", "b_id", 30}, {"dc", "c_id", 12}};
  for (const DimensionStats& dimension : stats.dimensions) {
    stats.attributes[{dimension.table, dimension.key}] = {dimension.key_cardinality, 4};
    stats.attributes[{"f", dimension.key}] = {dimension.key_cardinality, 4};
  }
  stats.attributes[{"da", "a1"}] = {3, 2};
  stats.attributes[{"da", "a2"}] = {5, 2};
  stats.attributes[{"db", "b1"}] = {4, 2};
  stats.attributes[{"db", "b2"}] = {2, 2};
  stats.attributes[{"dc", "c1"}] = {6, 2};
  stats.attributes[{"f", "flag"}] = {3, 1};
  stats.measures[{"f", "m1"}] = 4;
  stats.measures[{"f", "m2"}] = 8;
  return stats;
}

namespace {

// Non-key attributes of a table, in catalog order.
std::vector<Attribute> descriptive_attributes(const CatalogStats& stats, const std::string& table) {
  std::vector<Attribute> out;
  const DimensionStats* dimension = stats.dimension(table);
  for (const auto& [attribute, column] : stats.attributes) {
    if (attribute.table != table) continue;
    if (dimension && attribute.column == dimension->key) continue;
    if (!dimension && std::any_of(stats.dimensions.begin(), stats.dimensions.end(),
                                  [&](const DimensionStats& d) { return d.key == attribute.column; })) {
      continue;
    }
    out.push_back(attribute);
  }
  return out;
}

template <typename T>
std::vector<T> sample(std::vector<T> pool, std::size_t count, std::mt19937_64& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() > count) pool.resize(count);
  return pool;
}

void add_star_join(ParsedQuery& query, const CatalogStats& stats, const DimensionStats& dimension) {
  query.tables.insert(dimension.table);
  JoinCondition join{{stats.fact_table, dimension.key}, {dimension.table, dimension.key}};
  if (join.right < join.left) std::swap(join.left, join.right);
  query.join_attributes.insert(join.left);
  query.join_attributes.insert(join.right);
  query.mention_order.push_back(join.left);
  query.mention_order.push_back(join.right);
  query.joins.insert(join);
}

std::vector<Attribute> fact_measures(const CatalogStats& stats) {
  std::vector<Attribute> measures;
  for (const auto& [attribute, bytes] : stats.measures) {
    if (attribute.table == stats.fact_table) measures.push_back(attribute);
  }
  return measures;
}

}  // namespace

ParsedQuery random_query(const CatalogStats& stats, std::uint64_t seed, std::size_t id,
                         std::int64_t constant_range) {
  std::mt19937_64 rng(seed);
  ParsedQuery query;
  query.id = id;
  query.tables.insert(stats.fact_table);

  const std::size_t dimension_count =
      1 + draw(rng, std::min<std::uint64_t>(3, std::max<std::size_t>(stats.dimensions.size(), 1)));
  std::vector<std::size_t> indices(stats.dimensions.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  for (std::size_t index : sample(indices, dimension_count, rng)) {
    add_star_join(query, stats, stats.dimensions[index]);
  }

  std::vector<Attribute> pool;
  for (const std::string& table : query.tables) {
    for (const Attribute& attribute : descriptive_attributes(stats, table)) pool.push_back(attribute);
  }
  for (const auto& join : query.joins) {
    if (join.left.table == stats.fact_table) pool.push_back(join.left);
    if (join.right.table == stats.fact_table) pool.push_back(join.right);
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  const std::vector<Attribute> grouping = sample(pool, draw(rng, 4), rng);
  std::vector<Attribute> filterable;
  for (const Attribute& attribute : pool) {
    if (std::find(grouping.begin(), grouping.end(), attribute) == grouping.end()) {
      filterable.push_back(attribute);
    }
  }
  for (const Attribute& attribute : sample(filterable, draw(rng, 4), rng)) {
    const auto cardinality = static_cast<std::int64_t>(stats.cardinality(attribute).value_or(2));
    const std::int64_t range = std::max<std::int64_t>(1, std::min(cardinality, constant_range));
    const std::int64_t constant = static_cast<std::int64_t>(draw(rng, static_cast<std::uint64_t>(range)));
    static constexpr CompareOp kOps[] = {CompareOp::eq, CompareOp::eq, CompareOp::le,
                                         CompareOp::ge, CompareOp::between};
    const CompareOp op = kOps[draw(rng, std::size(kOps))];
    SelectionPredicate predicate{attribute, op, constant, std::nullopt};
    if (op == CompareOp::between) predicate.upper = Literal(constant + static_cast<std::int64_t>(draw(rng, 3)));
    query.mention_order.push_back(attribute);
    query.predicates.insert(std::move(predicate));
  }
  for (const Attribute& attribute : grouping) {
    query.mention_order.push_back(attribute);
    query.grouping.insert(attribute);
  }

  static constexpr AggregateOp kAggregates[] = {AggregateOp::sum, AggregateOp::count,
                                                AggregateOp::min, AggregateOp::max,
                                                AggregateOp::avg};
  const std::vector<Attribute> measures = fact_measures(stats);
  const std::size_t aggregate_count = 1 + draw(rng, 3);
  for (std::size_t i = 0; i < aggregate_count && !measures.empty(); ++i) {
    query.aggregations.insert({kAggregates[draw(rng, std::size(kAggregates))],
                               measures[draw(rng, measures.size())]});
  }
  std::vector<Attribute> order;
  for (const Attribute& attribute : query.mention_order) {
    if (std::find(order.begin(), order.end(), attribute) == order.end()) order.push_back(attribute);
  }
  query.mention_order = std::move(order);
  return query;
}

std::string generate_workload_sql(const CatalogStats& stats, const WorkloadShape& shape) {
  std::mt19937_64 rng(shape.seed);
  const std::vector<Attribute> measures = fact_measures(stats);
  if (measures.empty()) throw std::invalid_argument("generate_workload_sql: schema has no measures");

  struct Family {
    std::vector<const DimensionStats*> dimensions;
    std::vector<Attribute> grouping;
    std::vector<Attribute> filtered;
  };
  std::vector<Family> families;
  const std::size_t family_count = std::max<std::size_t>(1, shape.families);
  for (std::size_t f = 0; f < family_count; ++f) {
    Family family;
    std::vector<const DimensionStats*> all;
    for (const DimensionStats& dimension : stats.dimensions) all.push_back(&dimension);
    family.dimensions = sample(all, 1 + draw(rng, std::min<std::size_t>(3, all.size())), rng);
    std::sort(family.dimensions.begin(), family.dimensions.end(),
              [](const auto* a, const auto* b) { return a->table < b->table; });
    std::vector<Attribute> pool;
    for (const DimensionStats* dimension : family.dimensions) {
      for (const Attribute& attribute : descriptive_attributes(stats, dimension->table)) {
        pool.push_back(attribute);
      }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t group_count = std::min<std::size_t>(pool.size(), 1 + draw(rng, 2));
    family.grouping.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(group_count));
    const std::size_t filter_count = std::min<std::size_t>(pool.size() - group_count, 1 + draw(rng, 2));
    family.filtered.assign(pool.begin() + static_cast<std::ptrdiff_t>(group_count),
                           pool.begin() + static_cast<std::ptrdiff_t>(group_count + filter_count));
    families.push_back(std::move(family));
  }

  static constexpr AggregateOp kAggregates[] = {AggregateOp::sum, AggregateOp::sum,
                                                AggregateOp::count, AggregateOp::avg,
                                                AggregateOp::max};
  std::ostringstream out;
  for (std::size_t q = 0; q < shape.queries; ++q) {
    const Family& family = families[q % families.size()];
    std::vector<std::string> select;
    for (const Attribute& attribute : family.grouping) select.push_back(attribute.str());
    const Attribute& measure = measures[draw(rng, measures.size())];
    select.push_back(std::string(to_string(kAggregates[draw(rng, std::size(kAggregates))])) + "(" +
                     measure.str() + ")");
    std::vector<std::string> where;
    for (const DimensionStats* dimension : family.dimensions) {
      where.push_back(stats.fact_table + "." + dimension->key + " = " + dimension->table + "." +
                      dimension->key);
    }
    for (const Attribute& attribute : family.filtered) {
      const std::uint64_t cardinality = stats.cardinality(attribute).value_or(2);
      where.push_back(attribute.str() + " = " + std::to_string(draw(rng, cardinality)));
    }
    out << "select ";
    for (std::size_t i = 0; i < select.size(); ++i) out << (i ? ", " : "") << select[i];
    out << " from " << stats.fact_table;
    for (const DimensionStats* dimension : family.dimensions) out << ", " << dimension->table;
    out << " where ";
    for (std::size_t i = 0; i < where.size(); ++i) out << (i ? " and " : "") << where[i];
    if (!family.grouping.empty()) {
      out << " group by ";
      for (std::size_t i = 0; i < family.grouping.size(); ++i) {
        out << (i ? ", " : "") << family.grouping[i].str();
      }
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace viewsel::harness
