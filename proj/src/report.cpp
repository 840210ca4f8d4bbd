#include "liouville/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

std::string utc_now_iso8601() {
  if (const char* env = std::getenv("LIOUVILLE_LAB_TIMESTAMP")) return env;
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["argv"] = argv;
  j["tool_version"] = tool_version;
  j["timestamp"] = timestamp;
  j["parameters"] = parameters;
  return j;
}

RunManifest make_manifest(std::string command, std::vector<std::string> argv,
                          nlohmann::ordered_json parameters) {
  RunManifest m;
  m.command = std::move(command);
  m.argv = std::move(argv);
#ifdef LIOUVILLE_LAB_VERSION
  m.tool_version = LIOUVILLE_LAB_VERSION;
#else
  m.tool_version = "dev";
#endif
  m.timestamp = utc_now_iso8601();
  m.parameters = std::move(parameters);
  return m;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const RunManifest& m,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  out << "# manifest: " << m.to_json().dump() << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_json_report(std::ostream& out, const RunManifest& m,
                       const nlohmann::ordered_json& body) {
  nlohmann::ordered_json doc;
  doc["manifest"] = m.to_json();
  for (const auto& [key, value] : body.items()) doc[key] = value;
  out << doc.dump(2) << "\n";
}

namespace {

double tolerance_for(const nlohmann::json& tols, const std::string& path,
                     const std::string& stripped, const std::string& leaf) {
  for (const std::string& key : {path, stripped, leaf, std::string("default")}) {
    auto it = tols.find(key);
    if (it != tols.end()) return it->get<double>();
  }
  return 0.0;
}

void compare_rec(const nlohmann::json& tols, const nlohmann::json& expected,
                 const nlohmann::json& actual, const std::string& path,
                 const std::string& stripped, GoldenComparison& out) {
  auto fail = [&](const std::string& why) {
    out.pass = false;
    if (out.mismatches.size() < 64)
      out.mismatches.push_back(path.empty() ? why : path + ": " + why);
  };
  if (expected.is_object()) {
    if (!actual.is_object()) return fail("expected an object");
    for (const auto& [key, value] : expected.items()) {
      if (!actual.contains(key)) {
        out.pass = false;
        if (out.mismatches.size() < 64)
          out.mismatches.push_back((path.empty() ? key : path + "." + key) + ": missing");
        continue;
      }
      compare_rec(tols, value, actual.at(key),
                  path.empty() ? key : path + "." + key,
                  stripped.empty() ? key : stripped + "." + key, out);
    }
    return;
  }
  if (expected.is_array()) {
    if (!actual.is_array()) return fail("expected an array");
    if (expected.size() != actual.size())
      return fail("length " + std::to_string(actual.size()) + " != " +
                  std::to_string(expected.size()));
    for (std::size_t i = 0; i < expected.size(); ++i)
      compare_rec(tols, expected[i], actual[i], path + "." + std::to_string(i),
                  stripped, out);
    return;
  }
  if (expected.is_number()) {
    if (!actual.is_number()) return fail("expected a number");
    const double e = expected.get<double>(), a = actual.get<double>();
    if (std::isnan(e) && std::isnan(a)) return;
    std::string leaf = path;
    if (auto pos = leaf.find_last_of('.'); pos != std::string::npos) leaf = leaf.substr(pos + 1);
    const double tol = tolerance_for(tols, path, stripped, leaf);
    if (!(std::fabs(a - e) <= tol * std::fmax(1.0, std::fabs(e))) && a != e)
      fail(format_double(a) + " != " + format_double(e) + " (tol " + format_double(tol) + ")");
    return;
  }
  if (expected != actual) fail(actual.dump() + " != " + expected.dump());
}

}  // namespace

GoldenComparison compare_golden(const nlohmann::json& golden_doc,
                                const nlohmann::json& actual) {
  if (!golden_doc.is_object() || !golden_doc.contains("expected"))
    throw SpecError("golden file must be an object with an \"expected\" key");
  const nlohmann::json tols = golden_doc.value("tolerances", nlohmann::json::object());
  GoldenComparison out;
  compare_rec(tols, golden_doc.at("expected"), actual, "", "", out);
  return out;
}

nlohmann::ordered_json make_golden(const nlohmann::ordered_json& tolerances,
                                   const nlohmann::ordered_json& expected) {
  nlohmann::ordered_json doc;
  doc["tolerances"] = tolerances;
  doc["expected"] = expected;
  return doc;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write '" + path + "'");
  out << text;
}

}  // namespace liouville
