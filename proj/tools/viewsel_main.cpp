// Command-line front end: workload + statistics in, DDL + JSON report out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "viewsel/advisor.hpp"

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw viewsel::InputError("cannot write " + path);
  out << text;
}

void print_summary(const viewsel::RunReport& report) {
  const auto& configuration = report.configuration;
  std::cerr << "queries: " << report.queries << "  attributes: " << report.attributes << '\n'
            << "clusters: " << report.clusters.size() << "  Q: " << report.quality_singletons
            << " -> " << report.quality_final << '\n'
            << "candidates: " << report.candidates.size()
            << "  selected: " << configuration.selected.size() << " (" << configuration.total_bytes
            << " bytes)\n"
            << "workload cost: " << configuration.initial_workload_cost << " -> "
            << configuration.final_workload_cost << " rows\n"
            << "covering rate: " << report.covering_rate << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Materialized view selection advisor for star-schema workloads"};

  std::string workload_path;
  std::string stats_path;
  std::string objective = "profit";
  double budget = 0.0;
  viewsel::AdvisorOptions options;
  std::string gate = "paper";
  std::string overflow = "skip";
  std::string ddl_path;
  std::string report_path;
  std::string trace_path;

  app.add_option("--workload", workload_path, "Workload file (semicolon-terminated SQL)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--stats", stats_path, "Statistics JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--objective", objective, "Selection objective")
      ->check(CLI::IsMember({"profit", "ratio", "hybrid"}));
  auto* budget_option =
      app.add_option("--budget", budget, "Storage budget in bytes (ratio/hybrid)")->check(CLI::PositiveNumber);
  app.add_option("--alpha", options.objective.alpha, "Hybrid threshold in (0, 1]")
      ->default_val(0.1);
  app.add_option("--merge-x", options.merge.x, "Merge gate factor x")->default_val(0.33);
  app.add_option("--merge-gate", gate, "Merge gate direction")
      ->check(CLI::IsMember({"paper", "inverted"}));
  app.add_option("--update-query-ratio", options.objective.update_query_ratio,
                 "Proportion of updates versus queries")
      ->default_val(0.0);
  app.add_option("--cardenas-threshold", options.cost.cardenas_threshold,
                 "Use Cardenas when ms(F)/ms(v) reaches this value")
      ->default_val(100.0);
  app.add_option("--budget-overflow", overflow, "Unaffordable best view: skip it or stop")
      ->check(CLI::IsMember({"skip", "stop"}));
  app.add_option("--seed", options.seed, "Seed for the clustering visit order")->default_val(0);
  app.add_option("--output-ddl", ddl_path, "Write CREATE MATERIALIZED VIEW statements here");
  app.add_option("--report", report_path, "Write the JSON report here instead of stdout");
  app.add_option("--trace", trace_path, "Write the clustering step trace here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : kExitInput;
  }

  options.objective.kind = *viewsel::objective_from_string(objective);
  if (budget_option->count() > 0) options.objective.storage_budget = budget;
  options.objective.merge_x = options.merge.x;
  options.merge.gate = gate == "paper" ? viewsel::MergeGate::paper : viewsel::MergeGate::inverted;
  options.selection.overflow =
      overflow == "skip" ? viewsel::BudgetOverflow::skip : viewsel::BudgetOverflow::stop;

  try {
    const viewsel::AdvisorResult result =
        viewsel::run_advisor_files(workload_path, stats_path, options);
    const std::string report = viewsel::report_json(result.report);
    if (report_path.empty()) {
      std::cout << report;
    } else {
      write_text(report_path, report);
    }
    if (!ddl_path.empty()) write_text(ddl_path, result.ddl);
    if (!trace_path.empty()) write_text(trace_path, viewsel::format_trace(result.report.clustering_trace));
    print_summary(result.report);
  } catch (const viewsel::StageError& error) {
    std::cerr << "error: " << error.what() << '\n';
    return error.input() ? kExitInput : kExitInternal;
  } catch (const viewsel::InputError& error) {
    std::cerr << "error: " << error.what() << '\n';
    return kExitInput;
  } catch (const std::exception& error) {
    std::cerr << "internal error: " << error.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
