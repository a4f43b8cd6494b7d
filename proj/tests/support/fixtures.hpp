#pragma once

#include <string>
#include <vector>

#include "viewsel/advisor.hpp"
#include "viewsel/catalog.hpp"
#include "viewsel/workload.hpp"

#ifndef VIEWSEL_FIXTURE_DIR
#error "VIEWSEL_FIXTURE_DIR must be defined"
#endif

namespace viewsel::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(VIEWSEL_FIXTURE_DIR) + "/" + name;
}

inline std::string sales_workload_text() { return read_file(fixture_path("sales_workload.sql")); }

inline std::string sales_stats_text() { return read_file(fixture_path("sales_stats.json")); }

inline CatalogStats sales_fixture_stats() { return load_stats(sales_stats_text()); }

/// q1, q2, q3 of the sales example workload, ids 0..2.
inline std::vector<ParsedQuery> sales_queries() {
  return parse_workload(sales_workload_text(), "sales");
}

}  // namespace viewsel::testing
