#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisofrac/decomposition.hpp"
#include "anisofrac/field.hpp"
#include "anisofrac/quadrature.hpp"
#include "anisofrac/report.hpp"

namespace anisofrac {

/// Malformed input; `key` is the JSON path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// {"groups": [{"dim": 1, "s": 0.5, "a": 1}, ..., {"dim": 1}], "radii": [...],
///  "dilation": 1, "quadrature": {...}, "spacing": [...] | "h": 0.1,
///  "rhs": field, "exterior": field, "manufactured": field}
struct ProblemConfig {
  CoordinateDecomposition decomp;
  BoxDomain domain;
  QuadratureSpec quad;
  Json raw;
};

Json read_json_file(const std::filesystem::path& path);

ProblemConfig parse_problem(const Json& j);
ProblemConfig load_problem(const std::filesystem::path& path);
/// m = 2, N = (1, 1), s_1 = 1/2, a_1 = 1, d = (1, 1).
ProblemConfig default_problem();

QuadratureSpec parse_quadrature(const Json& j, QuadratureSpec base, const std::string& key);
Json to_json(const QuadratureSpec& q);

struct FieldConfig {
  std::string label;
  FieldPtr field;
  std::optional<double> sup_u;
  std::optional<double> sup_dnu;
};

/// A field from {"preset": name, ...}, {"expr": tree, "support": {...}, "sup_u": .., "sup_dnu": ..},
/// or {"grid": {"lo", "spacing", "counts", "values"}, "exterior": field}.
FieldConfig parse_field(const Json& j, const ProblemConfig& problem, const std::string& key = "");
FieldConfig load_field(const std::filesystem::path& path, const ProblemConfig& problem);

/// Expression trees: {"const": c}, {"coord": k}, {"op": "add"|"mul"|"sub", "args": [...]},
/// {"op": "neg"|"exp"|"sin"|"cos", "arg": e}, {"op": "pow_pos", "base": e, "p": p},
/// {"op": "ipow", "base": e, "k": k}, {"op": "taper", "q": e, "lo": a, "hi": b},
/// {"op": "sqnorm", "first": k, "count": c}.
Expr parse_expr(const Json& j, const std::string& key);

/// Rows of n comma-separated coordinates; blank lines, '#' comments and a
/// non-numeric header line are skipped.
std::vector<std::vector<double>> load_points_csv(const std::filesystem::path& path, int n);

/// {"ys": [...]} or a bare array.
std::vector<double> parse_probe_ys(const Json& j);

}  // namespace anisofrac
