#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace anisofrac {

using Json = nlohmann::ordered_json;

/// One measured inequality lhs <= rhs (or identity lhs = rhs) at a probe.
struct Probe {
  Json input;
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs - lhs for inequalities, -|lhs - rhs| for identities.
  double slack = 0.0;
  double tol = 0.0;
  bool ok() const { return slack >= -tol; }
};

/// pass iff every probe has slack >= -tol.
struct CheckReport {
  CheckReport() = default;
  explicit CheckReport(std::string name) : check(std::move(name)) {}

  std::string check;
  Json params = Json::object();
  std::vector<Probe> probes;

  void add_le(Json input, double lhs, double rhs, double tol);
  void add_eq(Json input, double lhs, double rhs, double tol);

  bool pass() const;
  /// Smallest slack + tol margin over probes; +inf when empty.
  double worst_margin() const;
  const Probe* worst() const;
  Json to_json(bool with_probes = true) const;
};

struct CheckSuite {
  std::string name;
  Json params = Json::object();
  std::vector<CheckReport> checks;

  bool pass() const;
  Json to_json(bool with_probes = true) const;
  const CheckReport& find(const std::string& check) const;
};

/// Deterministic serialization: ordered keys, round-trip doubles, two-space indent.
std::string dump(const Json& j);

Json to_json(const std::vector<double>& v);

}  // namespace anisofrac
