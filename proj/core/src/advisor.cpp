#include "viewsel/advisor.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "viewsel/catalog.hpp"
#include "viewsel/errors.hpp"

namespace viewsel {

namespace {

ParsedQuery as_query(const CandidateView& view) {
  ParsedQuery query;
  query.tables = view.tables;
  query.joins = view.joins;
  for (const JoinCondition& join : view.joins) {
    query.join_attributes.insert(join.left);
    query.join_attributes.insert(join.right);
  }
  query.predicates = view.predicates;
  query.grouping = view.grouping;
  query.aggregations = view.aggregations;
  return query;
}

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const InputError& error) {
    throw StageError(name, error.what(), true);
  } catch (const std::length_error& error) {
    throw StageError(name, error.what(), true);
  } catch (const std::exception& error) {
    throw StageError(name, error.what(), false);
  }
}

nlohmann::json view_json(const CandidateView& view) {
  nlohmann::json out;
  out["id"] = view.id;
  out["tables"] = view.tables;
  std::vector<std::string> grouping;
  for (const Attribute& attribute : view.grouping) grouping.push_back(attribute.str());
  out["grouping"] = grouping;
  std::vector<std::string> predicates;
  for (const SelectionPredicate& predicate : view.predicates) predicates.push_back(render_predicate(predicate));
  out["predicates"] = predicates;
  std::vector<std::string> aggregations;
  for (const Aggregation& aggregation : view.aggregations) aggregations.push_back(render_aggregation(aggregation));
  out["aggregations"] = aggregations;
  out["source_queries"] = view.source_queries;
  if (view.estimate) {
    out["rows"] = view.estimate->rows;
    out["bytes"] = view.estimate->bytes;
    out["method"] = std::string(to_string(view.estimate->method));
  }
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double covering_rate(std::span<const CandidateView> views, std::span<const ParsedQuery> workload) {
  if (workload.empty()) return 0.0;
  std::size_t covered = 0;
  for (const ParsedQuery& query : workload) {
    if (std::any_of(views.begin(), views.end(),
                    [&](const CandidateView& view) { return can_answer(view, query); })) {
      ++covered;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(workload.size());
}

AdvisorResult run_advisor(std::string_view workload_text, std::string_view stats_document,
                          const AdvisorOptions& options) {
  AdvisorResult result;
  RunReport& report = result.report;

  const CatalogStats stats = stage("stats", [&] { return load_stats(stats_document); });
  const std::vector<ParsedQuery> workload = stage("parse", [&] {
    auto parsed = parse_workload(workload_text, stats.fact_table);
    if (parsed.empty()) throw InputError("workload contains no statements");
    return parsed;
  });
  stage("validate", [&] {
    options.objective.validate();
    const auto diagnostics = validate_against_workload(stats, workload);
    if (!diagnostics.empty()) {
      std::string message = "statistics do not cover the workload:";
      for (const std::string& line : diagnostics) message += "\n  " + line;
      throw ValidationError(message);
    }
    return 0;
  });

  const ClusteringContext ctx = stage("context", [&] { return build_context(workload); });
  report.queries = ctx.rows();
  report.attributes = ctx.columns();

  const ClusteringResult clustering =
      stage("clustering", [&] { return cluster_queries_traced(ctx, options.seed); });
  report.quality_singletons = clustering.initial_quality;
  report.quality_final = clustering.final_quality;
  report.clustering_trace = clustering.trace;

  const ViewCostFn cost = [&](const CandidateView& view) {
    return estimate(view, stats, options.cost).rows;
  };
  stage("merging", [&] {
    for (const auto& members : clustering.partition.clusters) {
      ClusterSummary summary;
      std::vector<CandidateView> leaves;
      for (std::size_t row : members) {
        const ParsedQuery& query = workload[row];
        summary.queries.push_back(query.id);
        leaves.push_back(view_from_query(query));
      }
      MergeResult merged = merged_view_generation(leaves, options.merge, cost);
      summary.level_sizes = merged.level_sizes;
      for (CandidateView& view : merged.views) {
        view.id = report.candidates.size();
        summary.candidate_ids.push_back(view.id);
        report.candidates.push_back(std::move(view));
      }
      report.clusters.push_back(std::move(summary));
    }
    return 0;
  });

  stage("costing", [&] {
    for (CandidateView& view : report.candidates) view.estimate = estimate(view, stats, options.cost);
    return 0;
  });

  report.objective = options.objective;
  report.objective.candidate_count = std::max<std::size_t>(report.candidates.size(), 1);
  report.configuration = stage("selection", [&] {
    return select_views(report.candidates, workload, stats, report.objective, options.selection);
  });

  stage("render", [&] {
    report.covering_rate = covering_rate(report.configuration.selected, workload);
    for (const CandidateView& view : report.configuration.selected) {
      for (std::size_t query : view.source_queries) {
        if (!can_answer(view, workload[query])) {
          throw std::logic_error("selected view " + std::to_string(view.id) +
                                 " cannot answer its source query " + std::to_string(query));
        }
      }
    }
    result.ddl = render_ddl(report.configuration);
    return 0;
  });
  return result;
}

AdvisorResult run_advisor_files(const std::filesystem::path& workload_path,
                                const std::filesystem::path& stats_path,
                                const AdvisorOptions& options) {
  const std::string workload = stage("read", [&] { return read_file(workload_path); });
  const std::string stats = stage("read", [&] { return read_file(stats_path); });
  return run_advisor(workload, stats, options);
}

std::string render_ddl(const Configuration& configuration) {
  std::string out;
  for (std::size_t k = 0; k < configuration.selected.size(); ++k) {
    out += "create materialized view mv_" + std::to_string(k + 1) + " as " +
           render_query(as_query(configuration.selected[k])) + ";\n";
  }
  return out;
}

std::vector<CandidateView> parse_ddl(std::string_view ddl, std::string_view fact_table) {
  std::vector<CandidateView> views;
  for (const std::string& statement : split_statements(ddl)) {
    std::istringstream words(statement);
    std::string create, materialized, view_keyword, name, as;
    words >> create >> materialized >> view_keyword >> name >> as;
    auto lower = [](std::string text) {
      for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return text;
    };
    if (lower(create) != "create" || lower(materialized) != "materialized" ||
        lower(view_keyword) != "view" || name.empty() || lower(as) != "as") {
      throw ParseError("expected 'create materialized view <name> as'", 0);
    }
    const auto offset = static_cast<std::size_t>(words.tellg());
    const ParsedQuery query = parse_query(std::string_view(statement).substr(offset), fact_table,
                                          views.size());
    CandidateView view = view_from_query(query);
    view.id = views.size();
    views.push_back(std::move(view));
  }
  return views;
}

std::string report_json(const RunReport& report) {
  nlohmann::json out;
  out["workload"] = {{"queries", report.queries}, {"attributes", report.attributes}};

  nlohmann::json clusters = nlohmann::json::array();
  for (const ClusterSummary& cluster : report.clusters) {
    clusters.push_back({{"queries", cluster.queries},
                        {"level_sizes", cluster.level_sizes},
                        {"candidates", cluster.candidate_ids}});
  }
  out["clustering"] = {{"clusters", report.clusters.size()},
                       {"quality_singletons", report.quality_singletons},
                       {"quality_final", report.quality_final},
                       {"steps", report.clustering_trace.size()},
                       {"members", clusters}};

  nlohmann::json candidates = nlohmann::json::array();
  for (const CandidateView& view : report.candidates) candidates.push_back(view_json(view));
  out["candidates"] = candidates;

  nlohmann::json objective = {{"kind", std::string(to_string(report.objective.kind))},
                              {"alpha", report.objective.alpha},
                              {"update_query_ratio", report.objective.update_query_ratio},
                              {"candidate_count", report.objective.candidate_count},
                              {"merge_x", report.objective.merge_x}};
  objective["storage_budget"] = report.objective.storage_budget
                                    ? nlohmann::json(*report.objective.storage_budget)
                                    : nlohmann::json(nullptr);

  const Configuration& configuration = report.configuration;
  nlohmann::json selected = nlohmann::json::array();
  for (std::size_t k = 0; k < configuration.selected.size(); ++k) {
    nlohmann::json view = view_json(configuration.selected[k]);
    view["name"] = "mv_" + std::to_string(k + 1);
    selected.push_back(std::move(view));
  }
  nlohmann::json trace = nlohmann::json::array();
  for (const SelectionStep& step : configuration.trace) {
    trace.push_back({{"view", step.view_id},
                     {"score", step.score},
                     {"remaining_budget", step.remaining_budget},
                     {"action", step.action == SelectionStep::Action::selected ? "selected"
                                                                               : "skipped_budget"}});
  }
  const double before = configuration.initial_workload_cost;
  const double after = configuration.final_workload_cost;
  out["selection"] = {{"objective", objective},
                      {"views", selected},
                      {"trace", trace},
                      {"total_bytes", configuration.total_bytes}};
  out["cost"] = {{"before", before},
                 {"after", after},
                 {"reduction", before > 0.0 ? (before - after) / before : 0.0}};
  out["covering_rate"] = report.covering_rate;
  return out.dump(2) + "\n";
}

}  // namespace viewsel
