#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace liouville {

// Header echoed into every output file; re-running the recorded argv with the
// recorded timestamp reproduces the output byte for byte (seeds included).
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::string tool_version;
  std::string timestamp;  // UTC ISO-8601; LIOUVILLE_LAB_TIMESTAMP overrides the clock
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

RunManifest make_manifest(std::string command, std::vector<std::string> argv,
                          nlohmann::ordered_json parameters);

// %.17g — round-trips doubles exactly, keeps golden files diffable.
std::string format_double(double x);

// CSV dialect: comma, '.' decimal, header row, LF endings; the manifest rides
// in a leading "# manifest: {...}" comment line.
void write_csv(std::ostream& out, const RunManifest& m,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// JSON report: manifest first, then the body's keys in order.
void write_json_report(std::ostream& out, const RunManifest& m,
                       const nlohmann::ordered_json& body);

// ---- golden files ------------------------------------------------------
//
// A golden file is {"tolerances": {...}, "expected": {...}}. Tolerances are
// keyed by dotted field path; lookup tries the exact path, the path with
// array indices removed, the bare field name, then "default" (0 = exact).
// Numbers match when |actual - expected| <= tol * max(1, |expected|).

struct GoldenComparison {
  bool pass = true;
  std::vector<std::string> mismatches;
};

GoldenComparison compare_golden(const nlohmann::json& golden_doc,
                                const nlohmann::json& actual);

nlohmann::ordered_json make_golden(const nlohmann::ordered_json& tolerances,
                                   const nlohmann::ordered_json& expected);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace liouville
