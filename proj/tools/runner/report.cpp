#include "runner/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

namespace stabletilt::runner {

Json estimate_json(const McEstimate& e) {
  return Json{{"mean", e.mean}, {"std_err", e.std_err}, {"n", e.n}, {"ci95", e.ci95()}};
}

Json checks_json(const std::vector<CheckItem>& items, bool* all_pass) {
  Json arr = Json::array();
  bool ok = true;
  for (const auto& item : items) {
    ok = ok && item.pass;
    Json j;
    j["name"] = item.name;
    j["pass"] = item.pass;
    j["detail"] = item.detail;
    arr.push_back(std::move(j));
  }
  if (all_pass) *all_pass = ok;
  return arr;
}

void write_file(const std::string& output_dir, const std::string& name,
                const std::string& text) {
  std::filesystem::create_directories(output_dir);
  std::ofstream out(std::filesystem::path(output_dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + name + " in " + output_dir);
  out << text;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

Json strip_timing(Json report) {
  if (report.is_object()) {
    report.erase("runtime_seconds");
    for (auto& [key, value] : report.items()) value = strip_timing(value);
  } else if (report.is_array()) {
    for (auto& value : report) value = strip_timing(value);
  }
  return report;
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      auto res = std::to_chars(buf, buf + sizeof(buf), row[i]);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

}  // namespace stabletilt::runner
