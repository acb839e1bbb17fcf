#include "disloc/report.hpp"

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "disloc/serialize.hpp"

namespace disloc {

using json = nlohmann::ordered_json;

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Caveat: return "CAVEAT";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "FAIL";
}

void RunReport::add(const std::string& name, Verdict v, double tolerance,
                    const std::string& detail,
                    std::map<std::string, double> numbers) {
  checks.push_back({name, v, tolerance, detail, std::move(numbers)});
}

void RunReport::add_pass_fail(const std::string& name, bool pass,
                              double tolerance, const std::string& detail,
                              std::map<std::string, double> numbers) {
  add(name, pass ? Verdict::Pass : Verdict::Fail, tolerance, detail,
      std::move(numbers));
}

bool RunReport::any_fail() const {
  for (const auto& c : checks)
    if (c.verdict == Verdict::Fail) return true;
  return false;
}

std::string RunReport::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config_echo;
  json arr = json::array();
  for (const auto& c : checks) {
    json jc;
    jc["name"] = c.name;
    jc["verdict"] = verdict_name(c.verdict);
    jc["tolerance"] = c.tolerance;
    jc["detail"] = c.detail;
    if (!c.numbers.empty()) jc["numbers"] = c.numbers;
    arr.push_back(jc);
  }
  j["checks"] = arr;
  j["artifacts"] = artifacts;
  return j.dump(2) + "\n";
}

std::string write_report(const RunReport& report, const std::string& out_dir,
                         double elapsed_seconds) {
  std::filesystem::create_directories(out_dir);
  const std::string path =
      (std::filesystem::path(out_dir) / "report.json").string();
  write_text_file(path, report.to_json());
  std::ostringstream timing;
  timing << "elapsed_seconds=" << elapsed_seconds << "\n";
  write_text_file((std::filesystem::path(out_dir) / "timing.txt").string(),
                  timing.str());
  return path;
}

} // namespace disloc
