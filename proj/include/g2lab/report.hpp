// JSON / console rendering of check reports.  The serialized report is
// byte-stable for a fixed seed and configuration: keys are emitted in a fixed
// order and wall-clock timings stay on the console.

#ifndef G2LAB_REPORT_HPP
#define G2LAB_REPORT_HPP

#include <json.hpp>

#include <iomanip>
#include <iostream>

#include "checks.hpp"

namespace g2lab {

inline nlohmann::ordered_json report_json(const std::string& command, const RunConfig& cfg,
                                          const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["command"] = command;
  nlohmann::ordered_json conf;
  conf["seed"] = cfg.seed;
  conf["mode"] = mode_name(cfg.mode);
  if (cfg.trials_override) conf["trials"] = *cfg.trials_override;
  conf["suites"] = cfg.suites;
  nlohmann::ordered_json tols = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.tolerance_overrides) tols[k] = v;
  conf["tolerance_overrides"] = tols;
  j["config"] = conf;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  int pass = 0, fail = 0, skip = 0;
  for (const auto& r : reports) {
    nlohmann::ordered_json c;
    c["check_id"] = r.check_id;
    c["statement"] = r.statement;
    c["status"] = r.status;
    c["max_residual"] = r.max_residual;
    c["tolerance"] = r.tolerance;
    c["trials"] = r.trials;
    c["mode"] = r.mode;
    arr.push_back(c);
    if (r.status == "pass") ++pass;
    if (r.status == "fail") ++fail;
    if (r.status == "skip") ++skip;
  }
  j["checks"] = arr;
  j["summary"] = {{"pass", pass}, {"fail", fail}, {"skip", skip}};
  return j;
}

inline void print_check_table(std::ostream& os, const std::vector<CheckReport>& reports) {
  os << std::left << std::setw(28) << "check" << std::setw(6) << "mode" << std::setw(7) << "status"
     << std::setw(9) << "trials" << std::setw(14) << "max_residual" << std::setw(12) << "tolerance"
     << "ms\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(28) << r.check_id << std::setw(6) << r.mode << std::setw(7)
       << r.status << std::setw(9) << r.trials << std::setw(14) << std::scientific
       << std::setprecision(3) << r.max_residual << std::setw(12) << r.tolerance << std::fixed
       << r.elapsed_ms << "\n";
  }
  os.unsetf(std::ios::floatfield);
}

}  // namespace g2lab

#endif
