#include "anisofrac/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "anisofrac/operator.hpp"
#include "anisofrac/parallel.hpp"

namespace anisofrac {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double axis_radius(const CoordinateDecomposition& decomp, const BoxDomain& domain, int axis) {
  for (int i = 0; i < decomp.groups(); ++i)
    if (axis >= decomp.offset(i) && axis < decomp.offset(i) + decomp.group_dim(i))
      return i + 1 == decomp.groups() ? domain.radii[i] * domain.dilation : domain.radii[i];
  throw std::out_of_range("axis out of range");
}

}  // namespace

SupEstimate estimate_sup_Lu(const ScalarField& u, const CoordinateDecomposition& decomp,
                            const BoxDomain& domain, int per_axis, const QuadratureSpec& q,
                            int threads) {
  domain.validate(decomp);
  if (per_axis < 2) throw std::invalid_argument("need at least 2 samples per axis");
  const int n = decomp.dimension();
  std::vector<double> R(n);
  for (int k = 0; k < n; ++k) R[k] = axis_radius(decomp, domain, k);

  std::size_t total = 1;
  for (int k = 0; k < n; ++k) total *= per_axis;
  std::vector<long> sample_of(total, -1);
  std::vector<std::vector<double>> pts;
  std::vector<std::size_t> cell_of;
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<double> x(n);
    std::size_t rem = c;
    for (int k = n; k-- > 0;) {
      const int j = static_cast<int>(rem % per_axis);
      rem /= per_axis;
      x[k] = -R[k] + (j + 0.5) * 2.0 * R[k] / per_axis;
    }
    if (!domain.contains(decomp, x)) continue;
    sample_of[c] = static_cast<long>(pts.size());
    pts.push_back(std::move(x));
    cell_of.push_back(c);
  }
  std::vector<Estimate> vals(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) { vals[i] = apply_L(u, decomp, pts[i], q); });

  SupEstimate out;
  out.samples = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double a = std::abs(vals[i].value);
    if (a > out.sampled_max || out.argmax.empty()) {
      out.sampled_max = a;
      out.argmax = pts[i];
    }
    out.quadrature_error = std::max(out.quadrature_error, vals[i].error);
    std::size_t stride = 1;
    for (int k = n; k-- > 0;) {
      const std::size_t j = (cell_of[i] / stride) % per_axis;
      if (j + 1 < static_cast<std::size_t>(per_axis)) {
        const long nb = sample_of[cell_of[i] + stride];
        if (nb >= 0)
          out.neighbor_gap =
              std::max(out.neighbor_gap, std::abs(vals[i].value - vals[nb].value));
      }
      stride *= per_axis;
    }
  }
  out.value = out.sampled_max + out.quadrature_error + out.neighbor_gap;
  return out;
}

CTildeVariant select_c_tilde_variant(const CoordinateDecomposition& decomp) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, CTildeVariant> cache;
  std::optional<CTildeVariant> chosen;
  for (int i = 0; i + 1 < decomp.groups(); ++i) {
    if (!decomp.is_fractional(i)) continue;
    const std::pair<int, double> key{decomp.group_dim(i), decomp.order(i)};
    CTildeVariant v;
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find(key);
      if (it == cache.end()) {
        const auto r = validate_c_tilde(key.first, key.second, 1.0, {0.0, 0.3, -0.3, 0.6, -0.6},
                                        QuadratureSpec::for_length_scale(1.0));
        if (r.matching.size() != 1 || r.relative_spread >= 1e-3)
          throw std::runtime_error("c~ convention undecided for N = " + std::to_string(key.first) +
                                   ", s = " + std::to_string(key.second));
        it = cache.emplace(key, r.matching.front()).first;
      }
      v = it->second;
    }
    if (chosen && *chosen != v) throw std::runtime_error("groups disagree on the c~ convention");
    chosen = v;
  }
  return chosen.value_or(CTildeVariant::pow4s);
}

Estimate partial_derivative(const ScalarField& u, int axis, std::span<const double> x, double h) {
  if (const auto d = u.partial(axis, x)) return {*d, 0.0};
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  std::vector<double> b(x.begin(), x.end());
  auto central = [&](double step) {
    b[axis] = x[axis] + step;
    const double up = u.value(b);
    b[axis] = x[axis] - step;
    const double dn = u.value(b);
    b[axis] = x[axis];
    return (up - dn) / (2.0 * step);
  };
  const double d1 = central(h), d2 = central(2.0 * h);
  const double roundoff = 2.0 * kEps * std::max(std::abs(u.value(x)), 1e-300) / h;
  return {d1 + (d1 - d2) / 3.0, std::abs(d1 - d2) / 3.0 + roundoff};
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> v(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < count; ++k) v[k] = std::exp(a + (b - a) * k / (count - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

TheoremResult verify_theorem_main(const Instance& inst, const TheoremOptions& opt) {
  const auto& dec = inst.decomp;
  const BoxDomain Qd{inst.domain.radii, 1.0};
  Qd.validate(dec);
  if (!inst.u) throw std::invalid_argument("instance has no field");
  if (!std::isfinite(inst.sup_u) || !std::isfinite(inst.sup_dnu) || inst.sup_u < 0.0 ||
      inst.sup_dnu < 0.0)
    throw std::invalid_argument("instance needs finite sup-norm bounds");
  const double dm = Qd.radii.back();
  std::vector<double> ys = opt.ys.empty() ? log_spaced(1e-3 * dm, 0.24 * dm, 20) : opt.ys;
  for (double y : ys)
    if (!(y != 0.0 && std::abs(y) < 0.25 * dm))
      throw std::invalid_argument("probe y = " + std::to_string(y) +
                                  " lies outside (-d_m/4, d_m/4) minus {0}");

  TheoremResult res;
  res.sup_Lu = estimate_sup_Lu(*inst.u, dec, Qd, opt.sup_samples_per_axis, opt.quad, opt.threads);
  const CTildeVariant variant = opt.variant.value_or(select_c_tilde_variant(dec));
  res.kappa = compute_kappa(res.sup_Lu.value, inst.sup_u, inst.sup_dnu, dec, Qd, variant);

  CheckReport& rep = res.report;
  rep.check = "theorem_main";
  rep.params = {{"label", inst.label},
                {"provenance", inst.provenance},
                {"kappa", res.kappa.kappa},
                {"c_tilde_variant", std::string(to_string(variant))},
                {"per_group_terms", to_json(res.kappa.per_group_terms)},
                {"sup_u", inst.sup_u},
                {"sup_dnu", inst.sup_dnu},
                {"sup_Lu", {{"value", res.sup_Lu.value},
                            {"sampled_max", res.sup_Lu.sampled_max},
                            {"quadrature_error", res.sup_Lu.quadrature_error},
                            {"neighbor_gap", res.sup_Lu.neighbor_gap},
                            {"samples", res.sup_Lu.samples}}},
                {"radii", to_json(Qd.radii)},
                {"orders", Json::array()},
                {"weights", Json::array()}};
  for (int i = 0; i + 1 < dec.groups(); ++i) {
    rep.params["orders"].push_back(dec.order(i));
    rep.params["weights"].push_back(dec.weight(i));
  }

  const int n = dec.dimension();
  const int ax = dec.local_axis();
  for (double y : ys) {
    std::vector<double> xp(n, 0.0), xm(n, 0.0);
    xp[ax] = y;
    xm[ax] = -y;
    const Estimate dp = partial_derivative(*inst.u, ax, xp, opt.quad.fd_step);
    const Estimate dn = partial_derivative(*inst.u, ax, xm, opt.quad.fd_step);
    const double lhs = std::abs(dp.value - dn.value);
    const double ay = std::abs(y);
    const double lin = 8.0 * inst.sup_dnu * ay / dm;
    const double logf = std::log(2.0 * dm / ay);
    const double lg = 2.0 * res.kappa.kappa * ay * logf;
    const double rhs = lin + lg;
    const double tol = dp.error + dn.error + 64.0 * kEps * (lhs + rhs);
    rep.add_le(Json{{"y", y}, {"linear_term", lin}, {"log_term", lg}, {"log_factor", logf}}, lhs,
               rhs, tol);
  }
  return res;
}

FieldPtr difference_quotient(const FieldPtr& u, int local_axis, double tau) {
  if (tau == 0.0 || !std::isfinite(tau)) throw std::invalid_argument("tau must be nonzero");
  if (!u) throw std::invalid_argument("difference_quotient needs a field");
  const int n = u->dimension();
  std::optional<double> sup;
  if (const auto b = u->sup_partial_bound(local_axis)) sup = *b;
  if (const auto* cf = dynamic_cast<const ClosedFormField*>(u.get())) {
    const Expr& e = cf->expr();
    const Expr shifted = e.substitute(local_axis, Expr::coord(local_axis) + Expr(tau));
    std::optional<Support> box;
    if (cf->support()) {
      box = *cf->support();
      box->lo[local_axis] = std::min(box->lo[local_axis], box->lo[local_axis] - tau);
      box->hi[local_axis] = std::max(box->hi[local_axis], box->hi[local_axis] - tau);
      box->exterior = 0.0;
    }
    FieldBounds fb;
    fb.sup = sup;
    return make_closed_form((shifted - e) * Expr(1.0 / tau), n, box, fb);
  }
  return std::make_shared<FunctionField>(
      n,
      [u, local_axis, tau](std::span<const double> x) {
        std::vector<double> b(x.begin(), x.end());
        b[local_axis] += tau;
        return (u->value(b) - u->value(x)) / tau;
      },
      std::nullopt, sup);
}

FieldPtr derivative_field(const FieldPtr& u, int axis, double h) {
  if (!u) throw std::invalid_argument("derivative_field needs a field");
  const int n = u->dimension();
  std::optional<double> sup;
  if (const auto b = u->sup_partial_bound(axis)) sup = *b;
  if (const auto* cf = dynamic_cast<const ClosedFormField*>(u.get())) {
    std::optional<Support> box = cf->support();
    if (box) box->exterior = 0.0;
    FieldBounds fb;
    fb.sup = sup;
    return make_closed_form(cf->expr().diff(axis), n, box, fb);
  }
  return std::make_shared<FunctionField>(
      n, [u, axis, h](std::span<const double> x) { return partial_derivative(*u, axis, x, h).value; },
      std::nullopt, sup);
}

}  // namespace anisofrac
