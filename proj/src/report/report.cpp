#include "probsched/report/report.hpp"

#include <stdexcept>

namespace probsched {

json rational_json(const Rational& r) { return json{{"rational", to_string(r)}, {"decimal", to_decimal(r)}}; }

Rational rational_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rational") || !j["rational"].is_string()) {
    throw std::invalid_argument("expected {\"rational\": \"p/q\", ...}");
  }
  return parse_rational(j["rational"].get<std::string>());
}

Report::Report(std::string command) {
  doc_["schema"] = kReportSchema;
  doc_["command"] = std::move(command);
}

void Report::value_line(const std::string& label, const Rational& r) {
  lines_.push_back(label + ": " + to_string(r) + " (" + to_decimal(r) + ")");
}

std::string Report::text() const {
  std::string out;
  for (const auto& l : lines_) out += l + "\n";
  return out;
}

int exit_code(const json& report) {
  if (report.contains("bound") && report["bound"].contains("holds") && !report["bound"]["holds"].get<bool>()) return 1;
  if (report.contains("agree") && !report["agree"].get<bool>()) return 1;
  return 0;
}

}  // namespace probsched
