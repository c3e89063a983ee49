#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "anisofrac/barriers.hpp"
#include "anisofrac/config.hpp"
#include "anisofrac/constants.hpp"
#include "anisofrac/operator.hpp"
#include "anisofrac/parallel.hpp"
#include "anisofrac/presets.hpp"
#include "anisofrac/solver.hpp"
#include "anisofrac/verification.hpp"

namespace fs = std::filesystem;
using namespace anisofrac;

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kBadInput = 2, kInternal = 3 };

struct Common {
  fs::path config;
  fs::path field;
  fs::path quadrature;
  std::string preset;
  std::string checks;
  fs::path out;
  std::uint64_t seed = 1;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_field, const std::string& default_out) {
  cmd->add_option("--config", c.config, "problem JSON (groups, radii, ...)");
  cmd->add_option("--quadrature", c.quadrature, "JSON object overriding quadrature settings");
  cmd->add_option("--seed", c.seed, "sampling seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads")->capture_default_str()->check(
      CLI::PositiveNumber);
  if (with_field) {
    cmd->add_option("--preset", c.preset, "closed-form field")
        ->check(CLI::IsMember(preset_names()));
    cmd->add_option("--field", c.field, "field JSON (preset, expr or grid)");
    cmd->add_option("--checks", c.checks, "comma-separated subset of checks to run");
  }
  c.out = default_out;
  cmd->add_option("--out", c.out, "report path")->capture_default_str();
}

ProblemConfig load(const Common& c) {
  ProblemConfig p = c.config.empty() ? default_problem() : load_problem(c.config);
  if (!c.quadrature.empty())
    p.quad = parse_quadrature(read_json_file(c.quadrature), p.quad, "quadrature");
  return p;
}

FieldConfig resolve_field(const Common& c, const ProblemConfig& p, const std::string& fallback,
                          const char* config_key = "manufactured") {
  if (!c.field.empty()) return load_field(c.field, p);
  if (!c.preset.empty()) return parse_field(Json{{"preset", c.preset}}, p, "--preset");
  if (p.raw.contains(config_key)) return parse_field(p.raw[config_key], p, config_key);
  return parse_field(Json{{"preset", fallback}}, p, "--preset");
}

Instance make_instance(const FieldConfig& f, const ProblemConfig& p) {
  if (!f.sup_u) throw ConfigError("sup_u", "field needs an upper bound on sup |u|");
  if (!f.sup_dnu) throw ConfigError("sup_dnu", "field needs an upper bound on sup |d_n u|");
  return Instance{f.label, p.decomp, p.domain, f.field, *f.sup_u, *f.sup_dnu};
}

std::set<std::string> parse_selection(const std::string& list) {
  std::set<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

// Keeps the selected checks (all when the selection is empty); unknown names are errors.
void select_checks(std::vector<CheckSuite*> suites, const std::set<std::string>& wanted) {
  if (wanted.empty()) return;
  std::set<std::string> seen;
  for (CheckSuite* s : suites) {
    std::vector<CheckReport> kept;
    for (auto& c : s->checks) {
      seen.insert(c.check);
      if (wanted.count(c.check)) kept.push_back(std::move(c));
    }
    s->checks = std::move(kept);
  }
  for (const auto& w : wanted)
    if (!seen.count(w)) throw ConfigError("--checks", "unknown check '" + w + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
  spdlog::info("wrote {}", path.string());
}

void summarize(const CheckReport& r) {
  std::printf("%s  %-28s probes=%zu worst_margin=%.6g\n", r.pass() ? "PASS" : "FAIL",
              r.check.c_str(), r.probes.size(), r.worst_margin());
}

int finish(const std::vector<const CheckSuite*>& suites) {
  bool ok = true;
  for (const CheckSuite* s : suites)
    for (const auto& c : s->checks) {
      summarize(c);
      ok = ok && c.pass();
    }
  return ok ? kPass : kCheckFailed;
}

Json problem_json(const ProblemConfig& p) {
  const auto& d = p.decomp;
  Json groups = Json::array();
  for (int i = 0; i < d.groups(); ++i) {
    Json g = {{"dim", d.group_dim(i)}};
    if (i + 1 < d.groups()) {
      g["s"] = d.order(i);
      g["a"] = d.weight(i);
    }
    groups.push_back(g);
  }
  return {{"groups", groups},
          {"radii", to_json(p.domain.radii)},
          {"dilation", p.domain.dilation},
          {"quadrature", to_json(p.quad)}};
}

// ---- constants ---------------------------------------------------------------

int cmd_constants(int N, double s, bool validate, double d) {
  if (N < 1) throw ConfigError("--N", "must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("--s", "must lie in (0, 1)");
  const KernelConstants k = kernel_constants(N, s);
  Json j = {{"N", N},
            {"s", s},
            {"c", k.c},
            {"c_tilde", {{"pow2s", k.c_tilde_pow2s}, {"pow4s", k.c_tilde_pow4s}}},
            {"gamma", {{"s", anisofrac::gamma(s)},
                       {"N/2+s", anisofrac::gamma(0.5 * N + s)},
                       {"-s", anisofrac::gamma(-s)}}}};
  int code = kPass;
  if (validate) {
    if (!(d > 0.0)) throw ConfigError("--d", "must be positive");
    const std::vector<double> radii = {0.0, 0.2 * d, 0.4 * d, 0.6 * d, 0.8 * d};
    const auto v = validate_c_tilde(N, s, d, radii, QuadratureSpec::for_length_scale(d));
    Json values = Json::array();
    for (const auto& e : v.values) values.push_back({{"value", e.value}, {"error", e.error}});
    Json matching = Json::array();
    for (auto m : v.matching) matching.push_back(std::string(to_string(m)));
    j["identity"] = {{"d", d},
                     {"probe_radii", to_json(radii)},
                     {"values", values},
                     {"mean", v.mean},
                     {"relative_spread", v.relative_spread},
                     {"rel_error_pow2s", v.rel_error_pow2s},
                     {"rel_error_pow4s", v.rel_error_pow4s},
                     {"matching", matching},
                     {"variant", v.matching.size() == 1 ? Json(to_string(v.matching[0])) : Json()}};
    if (v.matching.size() != 1 || v.relative_spread >= 1e-3) code = kCheckFailed;
  }
  std::cout << dump(j);
  return code;
}

// ---- apply -------------------------------------------------------------------

int cmd_apply(const Common& c, const fs::path& points, bool extended) {
  const ProblemConfig p = load(c);
  const FieldConfig f = resolve_field(c, p, "separable-bump");
  const int n = p.decomp.dimension();
  FieldPtr u = f.field;
  if (extended) u = std::make_shared<BarrierPhi>(f.field);
  const auto pts = load_points_csv(points, u->dimension());
  std::vector<Estimate> vals(pts.size());
  parallel_for(pts.size(), c.threads, [&](std::size_t k) {
    vals[k] = extended ? apply_extended(*u, p.decomp, pts[k], p.quad)
                       : apply_L(*u, p.decomp, pts[k], p.quad);
  });
  std::ostringstream os;
  os.precision(17);
  for (int k = 0; k < n; ++k) os << (extended && k == n - 1 ? "y" : "x" + std::to_string(k)) << ',';
  if (extended) os << "z,";
  os << "value,error\n";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (double x : pts[k]) os << x << ',';
    os << vals[k].value << ',' << vals[k].error << '\n';
  }
  if (c.out.empty() || c.out == "-")
    std::cout << os.str();
  else
    write_text(c.out, os.str());
  return kPass;
}

// ---- solve -------------------------------------------------------------------

std::vector<double> spacing_of(const ProblemConfig& p) {
  const int n = p.decomp.dimension();
  if (p.raw.contains("spacing")) {
    const Json& s = p.raw["spacing"];
    if (!s.is_array() || static_cast<int>(s.size()) != n)
      throw ConfigError("spacing", "expected one spacing per axis");
    std::vector<double> h;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (!s[k].is_number())
        throw ConfigError("spacing[" + std::to_string(k) + "]", "expected a number");
      h.push_back(s[k].get<double>());
    }
    return h;
  }
  if (p.raw.contains("h")) {
    if (!p.raw["h"].is_number()) throw ConfigError("h", "expected a number");
    return std::vector<double>(n, p.raw["h"].get<double>());
  }
  throw ConfigError("spacing", "solve needs \"spacing\" or \"h\"");
}

int cmd_solve(const Common& c) {
  const ProblemConfig p = load(c);
  const std::vector<double> h = spacing_of(p);
  FieldPtr exact;
  const bool manufactured = !c.field.empty() || !c.preset.empty() || p.raw.contains("manufactured");
  if (manufactured) exact = resolve_field(c, p, "separable-bump").field;
  if (!manufactured && !p.raw.contains("rhs"))
    throw ConfigError("rhs", "missing key (or give \"manufactured\")");
  CollocationProblem prob =
      manufactured
          ? manufactured_problem(p.decomp, p.domain, exact, h, p.quad)
          : CollocationProblem{p.decomp,
                               p.domain,
                               parse_field(p.raw["rhs"], p, "rhs").field,
                               p.raw.contains("exterior")
                                   ? parse_field(p.raw["exterior"], p, "exterior").field
                                   : make_closed_form(Expr(0.0), p.decomp.dimension()),
                               h,
                               5000,
                               p.quad,
                               1};
  if (p.raw.contains("node_cap")) {
    if (!p.raw["node_cap"].is_number_unsigned())
      throw ConfigError("node_cap", "expected a positive integer");
    prob.node_cap = p.raw["node_cap"].get<std::size_t>();
  }
  prob.threads = c.threads;
  const DiscreteSolution sol = solve(prob);
  for (const auto& w : sol.warnings) spdlog::warn("{}", w);

  Json nodes = Json::array();
  for (const auto& x : sol.nodes) nodes.push_back(to_json(x));
  Json j = {{"problem", problem_json(p)},
            {"spacing", to_json(h)},
            {"unknowns", sol.values.size()},
            {"nodes", nodes},
            {"values", to_json(sol.values)},
            {"residual", sol.residual},
            {"inverse_rcond", sol.inverse_rcond},
            {"warnings", sol.warnings}};
  if (exact) {
    double err = 0.0;
    for (std::size_t k = 0; k < sol.nodes.size(); ++k)
      err = std::max(err, std::abs(sol.values[k] - exact->value(sol.nodes[k])));
    j["max_node_error"] = err;
    std::printf("unknowns=%zu residual=%.3e max_node_error=%.6g\n", sol.values.size(),
                sol.residual, err);
  } else {
    std::printf("unknowns=%zu residual=%.3e\n", sol.values.size(), sol.residual);
  }
  write_text(c.out, dump(j));
  return kPass;
}

// ---- barriers ----------------------------------------------------------------

int cmd_barriers(const Common& c, int sup_samples) {
  const ProblemConfig p = load(c);
  const Instance inst = make_instance(resolve_field(c, p, "separable-bump"), p);
  const BoxDomain Qd{p.domain.radii, 1.0};
  const SupEstimate sLu = estimate_sup_Lu(*inst.u, p.decomp, Qd, sup_samples, p.quad, c.threads);
  const EstimateParameters kappa = compute_kappa(sLu.value, inst.sup_u, inst.sup_dnu, p.decomp,
                                                 Qd, select_c_tilde_variant(p.decomp));
  BarrierOptions bo;
  bo.seed = c.seed;
  bo.threads = c.threads;
  bo.quad = p.quad;
  const BarrierInput in{inst.u, inst.sup_u, inst.sup_dnu, sLu.value};
  const auto wanted = parse_selection(c.checks);
  CheckSuite phi = check_phi_lemma(in, p.decomp, p.domain, bo);
  CheckSuite psi = check_psi_supersolution(in, p.decomp, p.domain, kappa, bo);
  select_checks({&phi, &psi}, wanted);
  Json j = {{"command", "barriers"},
            {"problem", problem_json(p)},
            {"field", inst.label},
            {"seed", c.seed},
            {"kappa", kappa.kappa},
            {"c_tilde_variant", std::string(to_string(kappa.variant))},
            {"sup_Lu", sLu.value},
            {"suites", {phi.to_json(), psi.to_json()}}};
  j["pass"] = phi.pass() && psi.pass();
  write_text(c.out, dump(j));
  return finish({&phi, &psi});
}

// ---- verify-main -------------------------------------------------------------

int cmd_verify_main(const Common& c, const fs::path& ys_file, int sup_samples,
                    const fs::path& plot) {
  const ProblemConfig p = load(c);
  const Instance inst = make_instance(resolve_field(c, p, "separable-bump"), p);
  TheoremOptions to;
  to.quad = p.quad;
  to.threads = c.threads;
  to.sup_samples_per_axis = sup_samples;
  if (!ys_file.empty()) to.ys = parse_probe_ys(read_json_file(ys_file));
  for (double y : to.ys)
    if (!(y != 0.0 && std::abs(y) < 0.25 * p.domain.radii.back()))
      throw ConfigError("ys", "probe " + std::to_string(y) + " outside 0 < |y| < d_m/4");
  const auto wanted = parse_selection(c.checks);
  if (!wanted.empty() && !(wanted.size() == 1 && wanted.count("theorem_main")))
    throw ConfigError("--checks", "verify-main has the single check 'theorem_main'");
  const TheoremResult r = verify_theorem_main(inst, to);
  CheckSuite suite{"theorem", {{"problem", problem_json(p)}}, {r.report}};
  Json j = {{"command", "verify-main"}, {"field", inst.label}, {"pass", r.report.pass()}};
  j["suite"] = suite.to_json();
  write_text(c.out, dump(j));
  if (!plot.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "y,lhs,rhs\n";
    for (const auto& pr : r.report.probes)
      os << pr.input["y"].get<double>() << ',' << pr.lhs << ',' << pr.rhs << '\n';
    write_text(plot, os.str());
  }
  return finish({&suite});
}

// ---- verify-holder -----------------------------------------------------------

std::vector<Instance> holder_family(const Common& c, const ProblemConfig& p) {
  if (!c.field.empty() || !c.preset.empty() || p.raw.contains("manufactured"))
    return {make_instance(resolve_field(c, p, "separable-bump"), p)};
  std::vector<Instance> fam;
  const auto& d = p.decomp;
  for (double s : {0.25, 0.5, 0.75}) {
    std::vector<int> dims;
    std::vector<double> orders, weights;
    for (int i = 0; i < d.groups(); ++i) {
      dims.push_back(d.group_dim(i));
      if (i + 1 < d.groups()) {
        orders.push_back(d.is_fractional(i) ? s : d.order(i));
        weights.push_back(d.weight(i));
      }
    }
    const CoordinateDecomposition ds(dims, orders, weights);
    const Preset pr = separable_bump_preset(ds, p.domain);
    std::ostringstream label;
    label << "separable-bump/s=" << s;
    fam.push_back(Instance{label.str(), ds, p.domain, pr.field, pr.sup_u, pr.sup_dnu});
  }
  return fam;
}

int cmd_verify_holder(const Common& c, CorollaryOptions co) {
  const ProblemConfig p = load(c);
  co.seed = c.seed;
  co.threads = c.threads;
  co.quad = p.quad;
  if (!(co.alpha > 0.0 && co.alpha < 1.0)) throw ConfigError("--alpha", "must lie in (0, 1)");
  if (co.levels < 2) throw ConfigError("--levels", "need at least two resolutions");
  const std::vector<Instance> fam = holder_family(c, p);
  const CorollaryResult res = probe_corollary_here(fam, co);

  CheckReport scaling("scaling_invariance");
  {
    const Instance& base = fam.front();
    Instance twice = base;
    twice.u = scaled(base.u, 2.0);
    twice.sup_u = 2.0 * base.sup_u;
    twice.sup_dnu = 2.0 * base.sup_dnu;
    const int top = co.levels - 1;
    const CorollaryLevel a = corollary_ratio(base, top, co);
    const CorollaryLevel b = corollary_ratio(twice, top, co);
    scaling.params = {{"label", base.label}, {"level", top}, {"factor", 2.0}};
    scaling.add_eq(Json{{"rho_u_f", a.ratio}, {"rho_2u_2f", b.ratio}}, b.ratio, a.ratio, 0.0);
  }
  CheckSuite suite{"holder",
                   {{"problem", problem_json(p)}, {"seed", co.seed}},
                   {res.report, scaling}};
  select_checks({&suite}, parse_selection(c.checks));
  Json j = {{"command", "verify-holder"}, {"pass", suite.pass()}};
  j["suite"] = suite.to_json();
  write_text(c.out, dump(j));
  for (const auto& r : res.instances) {
    std::printf("  %s:", r.label.c_str());
    for (const auto& l : r.levels) std::printf(" rho[%d]=%.6g", l.level, l.ratio);
    std::printf(" variation=%.4g\n", r.variation);
  }
  return finish({&suite});
}

// ---- localize-check ------------------------------------------------------------

int cmd_localize(const Common& c, int points) {
  const ProblemConfig p = load(c);
  FieldConfig f;
  if (!c.field.empty() || !c.preset.empty() || p.raw.contains("manufactured")) {
    f = resolve_field(c, p, "separable-bump");
  } else {
    // Support wider than the cut-off so the tails do not vanish.
    std::vector<double> wide = p.domain.radii;
    for (double& r : wide) r *= 1.6;
    const Preset pr = separable_bump_preset(p.decomp, p.domain, 4, wide);
    f = FieldConfig{"separable-bump/wide", pr.field, pr.sup_u, pr.sup_dnu};
  }
  const Instance inst = make_instance(f, p);
  LocalizeOptions lo;
  lo.points = points;
  lo.seed = c.seed;
  lo.threads = c.threads;
  lo.quad = p.quad;
  LocalizeResult r = localize(inst, lo);
  select_checks({&r.suite}, parse_selection(c.checks));
  Json j = {{"command", "localize-check"}, {"field", inst.label}, {"pass", r.suite.pass()}};
  j["suite"] = r.suite.to_json();
  write_text(c.out, dump(j));
  return finish({&r.suite});
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("anisofrac");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ANISOFRAC_LOG")) {
    const auto lvl = spdlog::level::from_str(env);
    if (lvl == spdlog::level::off && std::string(env) != "off")
      spdlog::warn("ANISOFRAC_LOG='{}' not recognised; using warn", env);
    else
      spdlog::set_level(lvl);
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"anisofrac: mixed local/nonlocal operators, barriers and gradient estimates"};
  app.require_subcommand(1);

  int N = 1;
  double s = 0.5, d = 1.0;
  bool validate = false;
  auto* constants = app.add_subcommand("constants", "kernel normalization constants as JSON");
  constants->add_option("--N", N, "group dimension")->required();
  constants->add_option("--s", s, "fractional order in (0,1)")->required();
  constants->add_flag("--validate", validate, "check the bump identity by quadrature");
  constants->add_option("--d", d, "bump radius for --validate")->capture_default_str();

  Common apply_c;
  fs::path points;
  bool extended = false;
  auto* apply = app.add_subcommand("apply", "evaluate L u at points from a CSV file");
  add_common(apply, apply_c, true, "-");
  apply->add_option("--points", points, "CSV of coordinates")->required()->check(
      CLI::ExistingFile);
  apply->add_flag("--extended", extended, "evaluate the extended operator on phi at (X', y, z)");

  Common solve_c;
  auto* solvec = app.add_subcommand("solve", "collocation solve of the exterior-data problem");
  add_common(solvec, solve_c, true, "solution.json");

  Common bar_c;
  int bar_samples = 36;
  auto* barriers = app.add_subcommand("barriers", "barrier lemma checks for phi and psi");
  barriers->alias("verify-barriers");
  add_common(barriers, bar_c, true, "barriers.json");
  barriers->add_option("--sup-samples", bar_samples, "per-axis samples for sup |Lu|")
      ->capture_default_str();

  Common main_c;
  fs::path ys_file, plot;
  int main_samples = 36;
  auto* vmain = app.add_subcommand("verify-main", "log-Lipschitz gradient estimate");
  add_common(vmain, main_c, true, "report.json");
  vmain->add_option("--ys", ys_file, "JSON list of probe offsets y")->check(CLI::ExistingFile);
  vmain->add_option("--sup-samples", main_samples, "per-axis samples for sup |Lu|")
      ->capture_default_str();
  vmain->add_option("--emit-plot-data", plot, "CSV of (y, lhs, rhs)");

  Common hold_c;
  CorollaryOptions co;
  auto* vhold = app.add_subcommand("verify-holder", "Holder ratio across resolutions");
  add_common(vhold, hold_c, true, "holder.json");
  vhold->add_option("--alpha", co.alpha)->capture_default_str();
  vhold->add_option("--levels", co.levels)->capture_default_str();
  vhold->add_option("--grid", co.base_grid, "coarsest sup grid per axis")->capture_default_str();
  vhold->add_option("--pairs", co.base_pairs, "coarsest pair count")->capture_default_str();
  vhold->add_option("--max-variation", co.max_variation)->capture_default_str();

  Common loc_c;
  int loc_points = 10;
  auto* loc = app.add_subcommand("localize-check", "cut-off localization identity");
  add_common(loc, loc_c, true, "localization.json");
  loc->add_option("--points", loc_points)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kBadInput;
  }

  try {
    if (*constants) return cmd_constants(N, s, validate, d);
    if (*apply) return cmd_apply(apply_c, points, extended);
    if (*solvec) return cmd_solve(solve_c);
    if (*barriers) return cmd_barriers(bar_c, bar_samples);
    if (*vmain) return cmd_verify_main(main_c, ys_file, main_samples, plot);
    if (*vhold) return cmd_verify_holder(hold_c, co);
    if (*loc) return cmd_localize(loc_c, loc_points);
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    spdlog::error("invalid input: {}", e.what());
    return kBadInput;
  } catch (const std::length_error& e) {
    spdlog::error("invalid input: {}", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kInternal;
  }
  return kInternal;
}
