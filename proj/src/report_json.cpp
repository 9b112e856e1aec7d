#include "kqch/report_json.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kqch {

Json to_json(const CheckReport& report) {
  Json j;
  j["name"] = report.name;
  j["paper_ref"] = report.statement;
  Json pts = Json::array();
  for (const Vec& p : report.points) {
    Json coords = Json::array();
    for (int i = 0; i < p.size(); ++i) coords.push_back(p[i]);
    pts.push_back(coords);
  }
  j["points"] = pts;
  j["residuals"] = report.residuals;
  j["tolerance"] = report.tolerance;
  j["verdict"] = report.pass ? "pass" : "fail";
  if (!report.scalars.empty()) {
    Json s;
    for (const auto& [key, vals] : report.scalars) s[key] = vals;
    j["scalars"] = s;
  }
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

Json make_report(const Json& config, const std::vector<CheckReport>& checks) {
  Json doc;
  doc["config"] = config;
  Json arr = Json::array();
  int passed = 0;
  for (const CheckReport& c : checks) {
    arr.push_back(to_json(c));
    if (c.pass) ++passed;
  }
  doc["checks"] = arr;
  Json summary;
  summary["total"] = checks.size();
  summary["passed"] = passed;
  summary["failed"] = static_cast<int>(checks.size()) - passed;
  summary["verdict"] = (passed == static_cast<int>(checks.size())) ? "pass" : "fail";
  doc["summary"] = summary;
  return doc;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += header[i];
    out += (i + 1 < header.size()) ? "," : "\n";
  }
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.15g", row[i]);
      out += buf;
      out += (i + 1 < row.size()) ? "," : "\n";
    }
  }
  return out;
}

}  // namespace kqch
