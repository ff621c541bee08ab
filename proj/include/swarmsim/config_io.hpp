#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swarmsim/harness.hpp"

namespace swarmsim {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scenario configs

/// Every field, defaults included, so the output re-creates the config.
Json to_json(const ScenarioConfig& config);

/// Missing fields keep their defaults; unknown fields are rejected with
/// ConfigError. The result is not validated.
ScenarioConfig scenario_from_json(const Json& doc);

/// `path.to.field=value`. The value is parsed as JSON when it parses,
/// otherwise taken as a string. Intermediate objects are created as needed.
void apply_override(Json& doc, std::string_view assignment);

Json load_json_file(const std::string& path);

// ---------------------------------------------------------------------------
// Outcomes

Json to_json(const RunOutcome& outcome);

// ---------------------------------------------------------------------------
// CSV. Reals carry 17 significant digits and use '.' whatever the locale.

std::string format_real(double v);
double parse_real(std::string_view s);
std::uint64_t parse_u64(std::string_view s);

using CsvRow = std::vector<std::string>;

std::string join_csv(const CsvRow& row);
CsvRow split_csv(std::string_view line);

CsvRow aggregate_csv_header();
CsvRow to_csv(const AggregateStats& stats);
/// Inverse of to_csv(AggregateStats).
AggregateStats aggregate_from_csv(const CsvRow& row);

CsvRow run_csv_header();
CsvRow to_csv(const RunOutcome& outcome);
/// Inverse of to_csv(RunOutcome) for the columns it carries (per-robot
/// distances and the schedule are not part of the row).
RunOutcome run_from_csv(const CsvRow& row);

CsvRow scatter_csv_header(std::size_t robots);
/// Leaders are written as robot names (1-based) or "none".
CsvRow to_csv(const ElectionPoint& point);
ElectionPoint scatter_from_csv(const CsvRow& row);

CsvRow curve_csv_header();
CsvRow to_csv(const CurvePoint& point);
CurvePoint curve_from_csv(const CsvRow& row);

CsvRow pathology_csv_header();
CsvRow to_csv(const PathologyResult& result);

CsvRow trace_csv_header(std::size_t robots);
CsvRow to_csv(const TraceRecord& record);

// ---------------------------------------------------------------------------
// Witness schedule files: newline-delimited JSON. The first line is a
// header with the config, run seed and witness; each following line is one
// step {"step": k, "robots": [...]}.

void write_witness(std::ostream& out, const WitnessFile& file);
WitnessFile read_witness(std::istream& in);

}  // namespace swarmsim
