#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "probsched/rational.hpp"

namespace probsched {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "probsched.report/1";

// {"rational": "p/q", "decimal": "0.0625"}; the rational is authoritative.
json rational_json(const Rational& r);
// Inverse of rational_json. Throws std::invalid_argument.
Rational rational_from_json(const json& j);

// One CLI result: a JSON document (docs/report-schema.md) and the matching
// human-readable lines.
class Report {
 public:
  explicit Report(std::string command);

  json& operator[](const std::string& key) { return doc_[key]; }
  const json& doc() const { return doc_; }

  void line(std::string text) { lines_.push_back(std::move(text)); }
  // "label: p/q (decimal)"
  void value_line(const std::string& label, const Rational& r);

  std::string text() const;
  std::string json_text() const { return doc_.dump(2); }

 private:
  json doc_;
  std::vector<std::string> lines_;
};

// Exit code determined by the report alone: 1 when a stated bound is
// violated or a comparison disagrees, 0 otherwise.
int exit_code(const json& report);

}  // namespace probsched
