#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace voacoh::tools {

struct AuditLine {
  std::string item;
  std::string status;  // PASS, DISCREPANCY, SKIP, INCONSISTENT
  std::string engine;
  std::string printed;
  std::string citation;
  std::string note;
};

struct AuditResult {
  std::string id;
  std::vector<AuditLine> lines;
  std::string error;  // set when the case threw
  bool consistent() const;
};

struct AuditOptions {
  std::string filter;        // empty runs every case
  bool include_slow = false;  // E8 and friends
};

std::vector<std::string> audit_case_ids();
std::vector<AuditResult> run_audit(const AuditOptions& opts);
std::string format_line(const std::string& id, const AuditLine& l);
nlohmann::json audit_json(const std::vector<AuditResult>& results);

}  // namespace voacoh::tools
