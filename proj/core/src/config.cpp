#include "anisofrac/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "anisofrac/presets.hpp"

namespace anisofrac {
namespace {

const Json& require(const Json& j, const std::string& name, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ConfigError(key.empty() ? name : key + "." + name, "missing key");
  return *it;
}

double number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(key, "expected a finite number");
  return v;
}

int integer(const Json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError(key, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t k = 0; k < j.size(); ++k)
    v.push_back(number(j[k], key + "[" + std::to_string(k) + "]"));
  return v;
}

std::string join(const std::string& key, const std::string& name) {
  return key.empty() ? name : key + "." + name;
}

void reject_unknown(const Json& j, const std::vector<std::string>& allowed, const std::string& key) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(join(key, it.key()), "unknown key");
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", path.string() + ": invalid JSON: " + e.what());
  }
}

QuadratureSpec parse_quadrature(const Json& j, QuadratureSpec q, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key, "expected an object");
  reject_unknown(j,
                 {"inner_radius", "near_radius", "far_cutoff", "radial_nodes", "angular_nodes",
                  "tail_mode", "rel_tol", "max_intervals", "fd_step"},
                 key);
  if (j.contains("inner_radius")) q.inner_radius = number(j["inner_radius"], join(key, "inner_radius"));
  if (j.contains("near_radius")) q.near_radius = number(j["near_radius"], join(key, "near_radius"));
  if (j.contains("far_cutoff")) q.far_cutoff = number(j["far_cutoff"], join(key, "far_cutoff"));
  if (j.contains("radial_nodes")) q.radial_nodes = integer(j["radial_nodes"], join(key, "radial_nodes"));
  if (j.contains("angular_nodes"))
    q.angular_nodes = integer(j["angular_nodes"], join(key, "angular_nodes"));
  if (j.contains("rel_tol")) q.rel_tol = number(j["rel_tol"], join(key, "rel_tol"));
  if (j.contains("max_intervals"))
    q.max_intervals = integer(j["max_intervals"], join(key, "max_intervals"));
  if (j.contains("fd_step")) q.fd_step = number(j["fd_step"], join(key, "fd_step"));
  if (j.contains("tail_mode")) {
    const auto& t = j["tail_mode"];
    if (t == "analytic")
      q.tail_mode = TailMode::analytic;
    else if (t == "numeric")
      q.tail_mode = TailMode::numeric;
    else
      throw ConfigError(join(key, "tail_mode"), "expected \"analytic\" or \"numeric\"");
  }
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
  return q;
}

Json to_json(const QuadratureSpec& q) {
  return {{"inner_radius", q.inner_radius},   {"near_radius", q.near_radius},
          {"far_cutoff", q.far_cutoff},       {"radial_nodes", q.radial_nodes},
          {"angular_nodes", q.angular_nodes},
          {"tail_mode", q.tail_mode == TailMode::analytic ? "analytic" : "numeric"},
          {"rel_tol", q.rel_tol},             {"max_intervals", q.max_intervals},
          {"fd_step", q.fd_step}};
}

ProblemConfig parse_problem(const Json& j) {
  if (!j.is_object()) throw ConfigError("", "problem config must be a JSON object");
  reject_unknown(j,
                 {"groups", "radii", "dilation", "quadrature", "spacing", "h", "rhs", "exterior",
                  "manufactured", "node_cap"},
                 "");
  const Json& groups = require(j, "groups", "");
  if (!groups.is_array() || groups.empty())
    throw ConfigError("groups", "expected a nonempty array");
  std::vector<int> dims;
  std::vector<double> orders, weights;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::string key = "groups[" + std::to_string(i) + "]";
    const Json& g = groups[i];
    if (!g.is_object()) throw ConfigError(key, "expected an object");
    const bool last = i + 1 == groups.size();
    reject_unknown(g, last ? std::vector<std::string>{"dim"}
                           : std::vector<std::string>{"dim", "s", "a"},
                   key);
    dims.push_back(integer(require(g, "dim", key), key + ".dim"));
    if (last) {
      if (dims.back() != 1) throw ConfigError(key + ".dim", "the local group must have dim 1");
      continue;
    }
    orders.push_back(number(require(g, "s", key), key + ".s"));
    weights.push_back(g.contains("a") ? number(g["a"], key + ".a") : 1.0);
  }
  std::optional<CoordinateDecomposition> dec;
  try {
    dec.emplace(dims, orders, weights);
  } catch (const std::exception& e) {
    throw ConfigError("groups", e.what());
  }
  BoxDomain dom;
  dom.radii = numbers(require(j, "radii", ""), "radii");
  if (j.contains("dilation")) dom.dilation = number(j["dilation"], "dilation");
  try {
    dom.validate(*dec);
  } catch (const std::exception& e) {
    throw ConfigError("radii", e.what());
  }
  QuadratureSpec q = QuadratureSpec::for_length_scale(dom.min_radius());
  if (j.contains("quadrature")) q = parse_quadrature(j["quadrature"], q, "quadrature");
  return ProblemConfig{*dec, dom, q, j};
}

ProblemConfig load_problem(const std::filesystem::path& path) {
  return parse_problem(read_json_file(path));
}

ProblemConfig default_problem() {
  return parse_problem(Json{{"groups", {{{"dim", 1}, {"s", 0.5}, {"a", 1.0}}, {{"dim", 1}}}},
                            {"radii", {1.0, 1.0}}});
}

Expr parse_expr(const Json& j, const std::string& key) {
  if (j.is_number()) return Expr(number(j, key));
  if (!j.is_object()) throw ConfigError(key, "expected an expression object");
  if (j.contains("const")) return Expr(number(j["const"], join(key, "const")));
  if (j.contains("coord")) {
    const int k = integer(j["coord"], join(key, "coord"));
    if (k < 0) throw ConfigError(join(key, "coord"), "axis must be >= 0");
    return Expr::coord(k);
  }
  const Json& opj = require(j, "op", key);
  if (!opj.is_string()) throw ConfigError(join(key, "op"), "expected a string");
  const std::string op = opj.get<std::string>();
  auto arg = [&](const char* name) { return parse_expr(require(j, name, key), join(key, name)); };
  if (op == "add" || op == "mul" || op == "sub") {
    const Json& args = require(j, "args", key);
    if (!args.is_array() || args.empty())
      throw ConfigError(join(key, "args"), "expected a nonempty array");
    Expr acc = parse_expr(args[0], join(key, "args[0]"));
    for (std::size_t k = 1; k < args.size(); ++k) {
      const Expr e = parse_expr(args[k], join(key, "args[" + std::to_string(k) + "]"));
      acc = op == "add" ? acc + e : op == "mul" ? acc * e : acc - e;
    }
    return acc;
  }
  if (op == "neg") return -arg("arg");
  if (op == "exp") return exp(arg("arg"));
  if (op == "sin") return sin(arg("arg"));
  if (op == "cos") return cos(arg("arg"));
  if (op == "pow_pos")
    return pow_pos(arg("base"), number(require(j, "p", key), join(key, "p")));
  if (op == "ipow") {
    const int k = integer(require(j, "k", key), join(key, "k"));
    if (k < 0) throw ConfigError(join(key, "k"), "exponent must be >= 0");
    return ipow(arg("base"), k);
  }
  if (op == "taper") {
    const double lo = number(require(j, "lo", key), join(key, "lo"));
    const double hi = number(require(j, "hi", key), join(key, "hi"));
    if (!(lo >= 0.0 && hi > lo)) throw ConfigError(join(key, "hi"), "need 0 <= lo < hi");
    return radial_taper(arg("q"), lo, hi);
  }
  if (op == "sqnorm")
    return squared_norm(integer(require(j, "first", key), join(key, "first")),
                        integer(require(j, "count", key), join(key, "count")));
  throw ConfigError(join(key, "op"), "unknown operation '" + op + "'");
}

FieldConfig parse_field(const Json& j, const ProblemConfig& problem, const std::string& key) {
  if (!j.is_object()) throw ConfigError(key, "field spec must be an object");
  const int n = problem.decomp.dimension();
  FieldConfig fc;
  if (j.contains("preset")) {
    reject_unknown(j, {"preset", "power", "radii", "c", "b"}, key);
    if (!j["preset"].is_string()) throw ConfigError(join(key, "preset"), "expected a string");
    const std::string name = j["preset"].get<std::string>();
    Preset p;
    try {
      if (name == "separable-bump") {
        const int power = j.contains("power") ? integer(j["power"], join(key, "power")) : 4;
        std::vector<double> radii;
        if (j.contains("radii")) radii = numbers(j["radii"], join(key, "radii"));
        p = separable_bump_preset(problem.decomp, problem.domain, power, radii);
      } else if (name == "affine") {
        p = affine_preset(problem.decomp, problem.domain,
                          j.contains("c") ? number(j["c"], join(key, "c")) : 0.5,
                          j.contains("b") ? number(j["b"], join(key, "b")) : 1.0);
      } else {
        p = make_preset(name, problem.decomp, problem.domain);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(join(key, "preset"), e.what());
    }
    fc.label = p.name;
    fc.field = p.field;
    fc.sup_u = p.sup_u;
    fc.sup_dnu = p.sup_dnu;
    return fc;
  }
  if (j.contains("expr")) {
    reject_unknown(j, {"expr", "support", "sup_u", "sup_dnu", "label"}, key);
    const Expr e = parse_expr(j["expr"], join(key, "expr"));
    if (e.max_axis() >= n)
      throw ConfigError(join(key, "expr"), "references an axis beyond dimension " + std::to_string(n));
    std::optional<Support> box;
    if (j.contains("support")) {
      const std::string sk = join(key, "support");
      const Json& s = j["support"];
      Support b;
      b.lo = numbers(require(s, "lo", sk), join(sk, "lo"));
      b.hi = numbers(require(s, "hi", sk), join(sk, "hi"));
      if (static_cast<int>(b.lo.size()) != n || static_cast<int>(b.hi.size()) != n)
        throw ConfigError(sk, "lo and hi need one entry per axis");
      b.exterior = s.contains("exterior") ? number(s["exterior"], join(sk, "exterior")) : 0.0;
      box = b;
    }
    FieldBounds fb;
    if (j.contains("sup_u")) fc.sup_u = fb.sup = number(j["sup_u"], join(key, "sup_u"));
    if (j.contains("sup_dnu")) {
      fc.sup_dnu = number(j["sup_dnu"], join(key, "sup_dnu"));
      fb.sup_partial.assign(n, std::nullopt);
      fb.sup_partial[n - 1] = fc.sup_dnu;
    }
    fc.label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "expr";
    fc.field = make_closed_form(e, n, box, fb);
    return fc;
  }
  if (j.contains("grid")) {
    reject_unknown(j, {"grid", "exterior", "sup_u", "sup_dnu", "label"}, key);
    const std::string gk = join(key, "grid");
    const Json& g = j["grid"];
    auto lo = numbers(require(g, "lo", gk), join(gk, "lo"));
    auto h = numbers(require(g, "spacing", gk), join(gk, "spacing"));
    const Json& cj = require(g, "counts", gk);
    if (!cj.is_array()) throw ConfigError(join(gk, "counts"), "expected an array");
    std::vector<int> counts;
    for (std::size_t k = 0; k < cj.size(); ++k)
      counts.push_back(integer(cj[k], join(gk, "counts[" + std::to_string(k) + "]")));
    auto values = numbers(require(g, "values", gk), join(gk, "values"));
    if (static_cast<int>(lo.size()) != n) throw ConfigError(join(gk, "lo"), "wrong dimension");
    FieldPtr ext;
    if (j.contains("exterior")) ext = parse_field(j["exterior"], problem, join(key, "exterior")).field;
    try {
      fc.field = std::make_shared<GridField>(lo, h, counts, values, ext);
    } catch (const std::exception& e) {
      throw ConfigError(gk, e.what());
    }
    if (j.contains("sup_u"))
      fc.sup_u = number(j["sup_u"], join(key, "sup_u"));
    else
      fc.sup_u = fc.field->sup_bound();
    if (j.contains("sup_dnu")) fc.sup_dnu = number(j["sup_dnu"], join(key, "sup_dnu"));
    fc.label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "grid";
    return fc;
  }
  throw ConfigError(key, "field spec needs one of \"preset\", \"expr\" or \"grid\"");
}

FieldConfig load_field(const std::filesystem::path& path, const ProblemConfig& problem) {
  return parse_field(read_json_file(path), problem);
}

std::vector<std::vector<double>> load_points_csv(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (pts.empty() && lineno == 1) continue;
      throw ConfigError("line " + std::to_string(lineno), "non-numeric entry");
    }
    if (static_cast<int>(row.size()) != n)
      throw ConfigError("line " + std::to_string(lineno),
                        "expected " + std::to_string(n) + " coordinates");
    pts.push_back(std::move(row));
  }
  return pts;
}

std::vector<double> parse_probe_ys(const Json& j) {
  if (j.is_array()) return numbers(j, "ys");
  return numbers(require(j, "ys", ""), "ys");
}

}  // namespace anisofrac
