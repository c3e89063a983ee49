#include "anisofrac/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace anisofrac {

void CheckReport::add_le(Json input, double lhs, double rhs, double tol) {
  probes.push_back({std::move(input), lhs, rhs, rhs - lhs, tol});
}

void CheckReport::add_eq(Json input, double lhs, double rhs, double tol) {
  probes.push_back({std::move(input), lhs, rhs, -std::abs(lhs - rhs), tol});
}

bool CheckReport::pass() const {
  return std::all_of(probes.begin(), probes.end(), [](const Probe& p) {
    return std::isfinite(p.slack) && p.ok();
  });
}

const Probe* CheckReport::worst() const {
  const Probe* w = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const Probe& p : probes) {
    const double m = std::isfinite(p.slack) ? p.slack + p.tol : -std::numeric_limits<double>::infinity();
    if (w == nullptr || m < best) {
      best = m;
      w = &p;
    }
  }
  return w;
}

double CheckReport::worst_margin() const {
  const Probe* w = worst();
  if (!w) return std::numeric_limits<double>::infinity();
  return std::isfinite(w->slack) ? w->slack + w->tol : -std::numeric_limits<double>::infinity();
}

Json CheckReport::to_json(bool with_probes) const {
  Json j;
  j["check"] = check;
  j["params"] = params;
  if (with_probes) {
    Json arr = Json::array();
    for (const Probe& p : probes)
      arr.push_back({{"input", p.input}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"slack", p.slack},
                     {"tol", p.tol}});
    j["probes"] = std::move(arr);
  } else {
    j["probe_count"] = probes.size();
  }
  j["pass"] = pass();
  if (const Probe* w = worst())
    j["worst"] = {{"input", w->input}, {"slack", w->slack}, {"tol", w->tol},
                  {"margin", worst_margin()}};
  else
    j["worst"] = nullptr;
  return j;
}

bool CheckSuite::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.pass(); });
}

Json CheckSuite::to_json(bool with_probes) const {
  Json j;
  j["suite"] = name;
  j["params"] = params;
  Json arr = Json::array();
  for (const auto& c : checks) arr.push_back(c.to_json(with_probes));
  j["checks"] = std::move(arr);
  j["pass"] = pass();
  return j;
}

const CheckReport& CheckSuite::find(const std::string& check) const {
  for (const auto& c : checks)
    if (c.check == check) return c;
  throw std::out_of_range("no check named '" + check + "' in suite '" + name + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace anisofrac
