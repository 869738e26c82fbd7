#ifndef LATPROF_INGEST_HPP
#define LATPROF_INGEST_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "latprof/types.hpp"

namespace latprof {

enum class GapRule {
  kTruncate,      // keep the prefix before the first oversized gap
  kDropSegments,  // drop observations beginning after any oversized gap
};

struct IngestConfig {
  double gap_threshold_days = 7.0;  // gaps strictly greater are oversized
  int min_obs = 25;
  int max_state = 5;
  GapRule gap_rule = GapRule::kTruncate;
};

struct RejectedRow {
  int line_no = 0;
  std::string line;
  std::string reason;
};

struct FilterReport {
  long long input_rows = 0;
  int input_individuals = 0;
  int kept = 0;
  int dropped_min_obs = 0;
  int truncated = 0;          // individuals that lost observations to the gap rule
  long long observations_removed_by_gap = 0;
  std::vector<RejectedRow> rejects;
};

struct IngestResult {
  Cohort cohort;  // observations re-indexed t = 1..T_i per individual
  FilterReport report;
};

// Parse a timestamp from an EMA CSV: either numeric days or an ISO-8601
// date/datetime (YYYY-MM-DD, optionally THH:MM[:SS[.fff]]). Returns days.
bool parse_timestamp_days(const std::string& field, double& days_out);

// Read `id,timestamp,state` rows, sort each individual by time, apply the gap
// rule and the minimum-observation floor, and re-index surviving
// observations. Unparseable rows and out-of-range states are collected into
// the report's rejects, never thrown.
IngestResult ingest_ema_csv(std::istream& in, const IngestConfig& cfg);

std::string filter_report_summary(const FilterReport& report);

}  // namespace latprof

#endif  // LATPROF_INGEST_HPP
