#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "viewsel/harness.hpp"

namespace viewsel {
namespace {

using harness::MicroWarehouse;

TEST(GenerateTest, EmptyFactTable) {
  MicroWarehouse w = harness::generate(harness::micro_stats(), 0, 1);
  EXPECT_EQ(w.fact.rows, 0u);
  EXPECT_EQ(w.dimensions.at("da").rows, 20u);
  EXPECT_EQ(w.dimensions.at("db").rows, 30u);
}

TEST(GenerateTest, Deterministic) {
  CatalogStats stats = harness::micro_stats();
  EXPECT_EQ(harness::dump_warehouse(harness::generate(stats, 300, 9)),
            harness::dump_warehouse(harness::generate(stats, 300, 9)));
  EXPECT_NE(harness::dump_warehouse(harness::generate(stats, 300, 9)),
            harness::dump_warehouse(harness::generate(stats, 300, 10)));
}

TEST(GenerateTest, DomainsAndIntegrity) {
  CatalogStats stats = harness::micro_stats();
  stats.attributes[Attribute::parse("db.b2")].cardinality = 1;
  MicroWarehouse w = harness::generate(stats, 2000, 3);
  const auto& b2 = w.dimensions.at("db").columns[w.dimensions.at("db").column_index("b2")];
  for (auto v : b2) EXPECT_EQ(v, 0);
  for (const DimensionStats& d : stats.dimensions) {
    const auto& keys = w.fact.columns[w.fact.column_index(d.key)];
    for (auto k : keys) {
      EXPECT_GE(k, 0);
      EXPECT_LT(k, static_cast<std::int64_t>(d.key_cardinality));
    }
  }
  for (const auto& [attribute, column] : stats.attributes) {
    const harness::Table& t = attribute.table == "f" ? w.fact : w.dimensions.at(attribute.table);
    const std::size_t index = t.column_index(attribute.column);
    ASSERT_NE(index, std::string::npos) << attribute.str();
    for (auto v : t.columns[index]) EXPECT_LT(v, static_cast<std::int64_t>(column.cardinality));
  }
  for (const char* m : {"m1", "m2"}) {
    for (auto v : w.fact.columns[w.fact.column_index(m)]) {
      EXPECT_GE(v, 1);
      EXPECT_LE(v, 100);
    }
  }
}

TEST(GenerateTest, RejectsOversizedInputs) {
  EXPECT_THROW(harness::generate(harness::micro_stats(), harness::kMaxFactRows + 1, 0),
               std::invalid_argument);
  CatalogStats wide = harness::micro_stats();
  wide.dimensions[0].key_cardinality = harness::kMaxDimensionRows + 1;
  EXPECT_THROW(harness::generate(wide, 10, 0), std::invalid_argument);
}

TEST(DumpWarehouseTest, Format) {
  std::string dump = harness::dump_warehouse(harness::generate(harness::micro_stats(), 2, 0));
  EXPECT_NE(dump.find("table f rows=2\n"), std::string::npos);
  EXPECT_NE(dump.find("table da rows=20\ncolumns a_id"), std::string::npos);
  EXPECT_NE(dump.find("\nrow "), std::string::npos);
}

CandidateView view_of(const char* sql) { return view_from_query(parse_query(sql, "f")); }

TEST(TrueViewRowsTest, Examples) {
  MicroWarehouse w = harness::generate(harness::micro_stats(), 1000, 4);
  EXPECT_EQ(harness::true_view_rows(w, view_of("select sum(m1) from f")), 1u);

  // A grouping that includes every key and a unique-per-row attribute.
  CatalogStats stats = harness::micro_stats();
  stats.attributes[Attribute::parse("f.flag")].cardinality = 1000000;
  MicroWarehouse unique = harness::generate(stats, 50, 4);
  EXPECT_EQ(harness::true_view_rows(unique, view_of("select f.flag, sum(m1) from f group by f.flag")), 50u);
}

TEST(TrueViewRowsTest, MatchesHashGroupCount) {
  CatalogStats stats = harness::micro_stats();
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    MicroWarehouse w = harness::generate(stats, 1500, seed);
    ParsedQuery q = harness::random_query(stats, seed, 0);
    CandidateView v = view_from_query(q);
    v.predicates.clear();
    std::vector<Attribute> grouping(v.grouping.begin(), v.grouping.end());
    EXPECT_EQ(harness::true_view_rows(w, v),
              testing::hash_group_count(w, grouping, [](std::size_t) { return true; }));
  }
}

TEST(TrueViewRowsTest, MatchesHashGroupCountUnderPredicate) {
  CatalogStats stats = harness::micro_stats();
  MicroWarehouse w = harness::generate(stats, 3000, 8);
  CandidateView v = view_of("select da.a1, db.b1, sum(m1) from f, da, db where f.a_id = da.a_id and "
                            "f.b_id = db.b_id and f.flag = 1 group by da.a1, db.b1");
  const auto& flag = w.fact.columns[w.fact.column_index("flag")];
  EXPECT_EQ(harness::true_view_rows(w, v),
            testing::hash_group_count(w, {Attribute::parse("da.a1"), Attribute::parse("db.b1")},
                                      [&](std::size_t row) { return flag[row] == 1; }));
}

TEST(RewriteTest, QueryAgainstOwnView) {
  CatalogStats stats = harness::micro_stats();
  MicroWarehouse w = harness::generate(stats, 2000, 5);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ParsedQuery q = harness::random_query(stats, seed, 0);
    std::string why;
    EXPECT_TRUE(harness::results_match(harness::true_query_answer(w, q),
                                       harness::rewrite_against(w, q, view_from_query(q)), 1e-9, &why))
        << why;
  }
}

TEST(RewriteTest, SalesQueryAgainstMergedView) {
  CatalogStats stats = testing::sales_fixture_stats();
  stats.dimensions[0].key_cardinality = 60;
  stats.dimensions[1].key_cardinality = 40;
  stats.dimensions[2].key_cardinality = 10;
  stats.dimensions[3].key_cardinality = 80;
  for (auto& [attribute, column] : stats.attributes) {
    if (const DimensionStats* d = stats.dimension(attribute.table); d && attribute.column == d->key) {
      column.cardinality = d->key_cardinality;
    }
  }
  for (const DimensionStats& d : stats.dimensions) stats.attributes[{"sales", d.key}].cardinality = d.key_cardinality;
  auto queries = testing::sales_queries();
  CandidateView merged = merge_view_pair(view_from_query(queries[0]), view_from_query(queries[2]));
  MicroWarehouse w = harness::generate(stats, 5000, 12);
  for (std::size_t q : {0, 2}) {
    std::string why;
    EXPECT_TRUE(harness::results_match(harness::true_query_answer(w, queries[q]),
                                       harness::rewrite_against(w, queries[q], merged), 1e-9, &why))
        << why;
  }
  EXPECT_THROW(harness::rewrite_against(w, queries[1], merged), std::invalid_argument);
}

TEST(RewriteTest, AverageThroughExpandedView) {
  CatalogStats stats = harness::micro_stats();
  MicroWarehouse w = harness::generate(stats, 4000, 6);
  auto queries = parse_workload(
      "select da.a1, avg(m2), min(m1) from f, da where f.a_id = da.a_id and f.flag = 2 group by da.a1;"
      "select da.a2, avg(m2), max(m1) from f, da where f.a_id = da.a_id and f.flag = 2 group by da.a2;",
      "f");
  CandidateView merged = merge_view_pair(view_from_query(queries[0]), view_from_query(queries[1]));
  for (const ParsedQuery& q : queries) {
    harness::ResultTable direct = harness::true_query_answer(w, q);
    harness::ResultTable rewritten = harness::rewrite_against(w, q, merged);
    std::string why;
    EXPECT_TRUE(harness::results_match(direct, rewritten, 1e-9, &why)) << why;
    EXPECT_FALSE(direct.rows.empty());
  }
}

TEST(RewriteTest, EmptyInputGivesNoRows) {
  MicroWarehouse w = harness::generate(harness::micro_stats(), 0, 1);
  ParsedQuery q = parse_query("select count(m1) from f", "f");
  EXPECT_TRUE(harness::true_query_answer(w, q).rows.empty());
  EXPECT_TRUE(harness::rewrite_against(w, q, view_from_query(q)).rows.empty());
}

TEST(ResultsMatchTest, ToleranceAndDifferences) {
  harness::ResultTable a;
  a.rows = {{{1}, {std::int64_t{3}, 2.0}}};
  harness::ResultTable b = a;
  std::get<double>(b.rows[0].aggregates[1]) = 2.0 * (1 + 1e-12);
  EXPECT_TRUE(harness::results_match(a, b));
  std::get<double>(b.rows[0].aggregates[1]) = 2.1;
  std::string why;
  EXPECT_FALSE(harness::results_match(a, b, 1e-9, &why));
  EXPECT_FALSE(why.empty());
  b = a;
  b.rows[0].aggregates[0] = std::int64_t{4};
  EXPECT_FALSE(harness::results_match(a, b));
  b = a;
  b.rows.push_back(a.rows[0]);
  EXPECT_FALSE(harness::results_match(a, b));
}

TEST(LiteralCodeTest, StableAndInDomain) {
  CatalogStats stats = harness::micro_stats();
  Attribute a1 = Attribute::parse("da.a1");
  EXPECT_EQ(harness::literal_code(Literal{std::int64_t{2}}, a1, stats), 2.0);
  EXPECT_EQ(harness::literal_code(Literal{2.5}, a1, stats), 2.5);
  const double code = harness::literal_code(Literal{std::string("single")}, a1, stats);
  EXPECT_EQ(code, harness::literal_code(Literal{std::string("single")}, a1, stats));
  EXPECT_GE(code, 0.0);
  EXPECT_LT(code, 3.0);
  EXPECT_EQ(code, std::floor(code));
}

// Cardenas against exact counts on uniform data, averaged over seeds.
TEST(HarnessPropertyTest, CardenasTracksTrueRowsOnAverage) {
  CatalogStats stats = harness::micro_stats();
  const std::vector<const char*> views = {
      "select da.a2, db.b1, sum(m1) from f, da, db where f.a_id = da.a_id and f.b_id = db.b_id group by da.a2, db.b1",
      "select f.a_id, f.b_id, sum(m1) from f group by f.a_id, f.b_id",
  };
  for (const char* sql : views) {
    CandidateView v = view_of(sql);
    double total_error = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      MicroWarehouse w = harness::generate(stats, 400, seed);
      const double truth = static_cast<double>(harness::true_view_rows(w, v));
      const double estimated = view_rows_cardenas(max_view_size(v, stats), 400);
      total_error += std::abs(estimated - truth) / truth;
    }
    EXPECT_LE(total_error / 30, 0.15) << sql;
  }
}

// A 12-row dimension rarely realizes all 6 values of its attribute, so the
// uniform estimate is biased upward for that grouping.
TEST(HarnessPropertyTest, CardenasOverestimatesWhenDomainIsPartlyRealized) {
  CatalogStats stats = harness::micro_stats();
  CandidateView v = view_of("select f.a_id, dc.c1, sum(m1) from f, dc where f.c_id = dc.c_id group by f.a_id, dc.c1");
  double signed_error = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    MicroWarehouse w = harness::generate(stats, 400, seed);
    const double truth = static_cast<double>(harness::true_view_rows(w, v));
    signed_error += (view_rows_cardenas(max_view_size(v, stats), 400) - truth) / truth;
  }
  EXPECT_GT(signed_error / 30, 0.0);
  EXPECT_LE(signed_error / 30, 0.5);
}

}  // namespace
}  // namespace viewsel
