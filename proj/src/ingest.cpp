#include "latprof/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>

#include "latprof/csv.hpp"

namespace latprof {

namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
long long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

bool parse_iso8601_days(const std::string& s, double& out) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double sec = 0.0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d%n", &y, &mo, &d, &consumed) != 3) {
    return false;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return false;
  std::string rest = s.substr(consumed);
  if (!rest.empty()) {
    if (rest[0] != 'T' && rest[0] != ' ') return false;
    rest.erase(0, 1);
    int time_consumed = 0;
    if (std::sscanf(rest.c_str(), "%d:%d%n", &h, &mi, &time_consumed) != 2) {
      return false;
    }
    rest.erase(0, time_consumed);
    if (!rest.empty()) {
      if (rest[0] != ':') return false;
      const auto parsed = parse_double(rest.substr(1));
      if (!parsed) return false;
      sec = *parsed;
    }
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0.0 || sec >= 61.0) {
      return false;
    }
  }
  out = static_cast<double>(days_from_civil(y, mo, d)) +
        (h * 3600.0 + mi * 60.0 + sec) / 86400.0;
  return true;
}

}  // namespace

bool parse_timestamp_days(const std::string& field, double& days_out) {
  if (const auto v = parse_double(field)) {
    days_out = *v;
    return true;
  }
  return parse_iso8601_days(field, days_out);
}

IngestResult ingest_ema_csv(std::istream& in, const IngestConfig& cfg) {
  if (!(cfg.gap_threshold_days > 0.0) || cfg.min_obs < 1) {
    throw ValidationError("ingest: thresholds must be positive");
  }

  IngestResult result;
  auto& report = result.report;

  struct Obs {
    double time;
    int state;
    long long order;  // input order, keeps the sort stable on time ties
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Obs>> per_id;

  std::string line;
  int line_no = 0;
  long long input_order = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = normalize_line(std::move(line), line_no == 1);
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("id,", 0) == 0) continue;  // header
    ++report.input_rows;

    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      report.rejects.push_back({line_no, line, "expected 3 fields"});
      continue;
    }
    double days = 0.0;
    if (fields[0].empty()) {
      report.rejects.push_back({line_no, line, "empty id"});
      continue;
    }
    if (!parse_timestamp_days(fields[1], days)) {
      report.rejects.push_back({line_no, line, "bad timestamp"});
      continue;
    }
    const auto state = parse_int(fields[2]);
    if (!state || *state < 1 || *state > cfg.max_state) {
      report.rejects.push_back(
          {line_no, line, "state outside 1.." + std::to_string(cfg.max_state)});
      continue;
    }
    auto [it, inserted] = per_id.try_emplace(fields[0]);
    if (inserted) order.push_back(fields[0]);
    it->second.push_back({days, static_cast<int>(*state), input_order++});
  }

  report.input_individuals = static_cast<int>(order.size());
  for (const auto& id : order) {
    auto& obs = per_id[id];
    std::sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) {
      return a.time != b.time ? a.time < b.time : a.order < b.order;
    });

    // Gap rule: an observation "begins after" an oversized gap when the time
    // since the previous kept observation exceeds the threshold.
    std::vector<int> kept_states;
    kept_states.reserve(obs.size());
    bool truncated = false;
    if (cfg.gap_rule == GapRule::kTruncate) {
      kept_states.push_back(obs.front().state);
      for (std::size_t i = 1; i < obs.size(); ++i) {
        if (obs[i].time - obs[i - 1].time > cfg.gap_threshold_days) {
          truncated = true;
          break;
        }
        kept_states.push_back(obs[i].state);
      }
    } else {
      // Drop observations that begin after any oversized gap, keeping later
      // segments once the cadence recovers relative to the last kept point.
      double last_kept_time = obs.front().time;
      kept_states.push_back(obs.front().state);
      for (std::size_t i = 1; i < obs.size(); ++i) {
        if (obs[i].time - last_kept_time > cfg.gap_threshold_days) {
          truncated = true;
          continue;
        }
        last_kept_time = obs[i].time;
        kept_states.push_back(obs[i].state);
      }
    }
    if (truncated) {
      ++report.truncated;
      report.observations_removed_by_gap +=
          static_cast<long long>(obs.size() - kept_states.size());
    }

    if (static_cast<int>(kept_states.size()) < cfg.min_obs) {
      ++report.dropped_min_obs;
      continue;
    }

    DiscreteSequence seq;
    seq.id = id;
    seq.t_start = 1;  // ingested data are re-indexed t = 1..T_i
    seq.states = std::move(kept_states);
    result.cohort.push_back(std::move(seq));
    ++report.kept;
  }
  return result;
}

std::string filter_report_summary(const FilterReport& report) {
  std::string out;
  out += "input rows: " + std::to_string(report.input_rows) + "\n";
  out += "rejected rows: " + std::to_string(report.rejects.size()) + "\n";
  out += "individuals: " + std::to_string(report.input_individuals) + "\n";
  out += "kept: " + std::to_string(report.kept) + "\n";
  out += "dropped (min obs): " + std::to_string(report.dropped_min_obs) + "\n";
  out += "truncated by gap rule: " + std::to_string(report.truncated) + "\n";
  out += "observations removed by gap rule: " +
         std::to_string(report.observations_removed_by_gap) + "\n";
  return out;
}

}  // namespace latprof
