#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "stabletilt/stats.hpp"

namespace stabletilt::runner {

using Json = nlohmann::ordered_json;

Json estimate_json(const McEstimate& e);

/// Itemized assertion inside an experiment report.
struct CheckItem {
  std::string name;
  bool pass = false;
  Json detail;
};

Json checks_json(const std::vector<CheckItem>& items, bool* all_pass = nullptr);

/// Writes text to output_dir/name, creating the directory when needed.
void write_file(const std::string& output_dir, const std::string& name, const std::string& text);

/// Serializes a report deterministically (2-space indent, ordered keys).
std::string dump_report(const Json& report);

/// Removes timing fields ("runtime_seconds" anywhere) for byte comparisons.
Json strip_timing(Json report);

/// CSV table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string to_string() const;
};

}  // namespace stabletilt::runner
