#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viewsel/candidate_views.hpp"
#include "viewsel/clustering.hpp"
#include "viewsel/cost_model.hpp"
#include "viewsel/errors.hpp"
#include "viewsel/objectives.hpp"
#include "viewsel/selection.hpp"

namespace viewsel {

struct AdvisorOptions {
  ObjectiveConfig objective;  // candidate_count is filled in by the pipeline
  MergeOptions merge;
  CostModelOptions cost;
  SelectionOptions selection;
  std::uint64_t seed = 0;
};

struct ClusterSummary {
  std::vector<std::size_t> queries;
  std::vector<std::size_t> level_sizes;
  std::vector<std::size_t> candidate_ids;
};

struct RunReport {
  std::size_t queries = 0;
  std::size_t attributes = 0;
  std::uint64_t quality_singletons = 0;
  std::uint64_t quality_final = 0;
  std::vector<ClusterSummary> clusters;
  std::vector<CandidateView> candidates;
  std::vector<ClusterStep> clustering_trace;
  ObjectiveConfig objective;
  Configuration configuration;
  double covering_rate = 0.0;
};

struct AdvisorResult {
  RunReport report;
  std::string ddl;
};

/// Failure of one pipeline stage. `input()` distinguishes bad input (exit
/// code 1) from a broken internal invariant (exit code 2).
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message, bool input)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), input_(input) {}

  const std::string& stage() const noexcept { return stage_; }
  bool input() const noexcept { return input_; }

 private:
  std::string stage_;
  bool input_;
};

/// stats -> parse -> validate -> context -> clustering -> merging -> costing
/// -> selection -> render. Deterministic given inputs and options.seed.
AdvisorResult run_advisor(std::string_view workload_text, std::string_view stats_document,
                          const AdvisorOptions& options);

AdvisorResult run_advisor_files(const std::filesystem::path& workload_path,
                                const std::filesystem::path& stats_path,
                                const AdvisorOptions& options);

/// Fraction of queries answered by at least one view; 0 for an empty workload.
double covering_rate(std::span<const CandidateView> views, std::span<const ParsedQuery> workload);

/// One "create materialized view mv_<k> as select ..." statement per
/// selected view, in selection order, each terminated by ";\n".
std::string render_ddl(const Configuration& configuration);

/// Parses render_ddl output back into views (content fields only).
std::vector<CandidateView> parse_ddl(std::string_view ddl, std::string_view fact_table);

std::string report_json(const RunReport& report);

/// Reads a whole file; throws InputError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace viewsel
