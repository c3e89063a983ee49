#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anisofrac/operator.hpp"
#include "anisofrac/parallel.hpp"
#include "anisofrac/sampling.hpp"
#include "anisofrac/verification.hpp"

namespace anisofrac {
namespace {

constexpr double kInner = 0.75;
constexpr double kOuter = 0.8;
constexpr double kTailRadius = 0.1;
constexpr double kEps = std::numeric_limits<double>::epsilon();

BoxDomain half_box(const CoordinateDecomposition& decomp) {
  return BoxDomain{std::vector<double>(decomp.groups(), 0.5), 1.0};
}

}  // namespace

CutoffField make_cutoff(const FieldPtr& u, const CoordinateDecomposition& decomp) {
  if (!u || u->dimension() != decomp.dimension())
    throw std::invalid_argument("cut-off needs a field on R^n");
  const int n = decomp.dimension();
  Expr tau(1.0);
  for (int i = 0; i < decomp.groups(); ++i)
    tau = tau * radial_taper(squared_norm(decomp.offset(i), decomp.group_dim(i)), kInner, kOuter);
  Support tbox;
  tbox.lo.assign(n, -kOuter);
  tbox.hi.assign(n, kOuter);
  FieldBounds tb;
  tb.sup = 1.0;

  CutoffField c;
  c.base = u;
  c.tau = make_closed_form(tau, n, tbox, tb);
  const std::optional<double> sup = u->sup_bound();
  if (const auto* cf = dynamic_cast<const ClosedFormField*>(u.get())) {
    FieldBounds vb;
    vb.sup = sup;
    c.v = make_closed_form(tau * cf->expr(), n, tbox, vb);
    std::optional<Support> rbox;
    if (cf->support() && cf->support()->exterior == 0.0) rbox = cf->support();
    if (rbox) {
      for (int k = 0; k < n; ++k) {
        rbox->lo[k] = std::min(rbox->lo[k], -kOuter);
        rbox->hi[k] = std::max(rbox->hi[k], kOuter);
      }
    }
    FieldBounds rb;
    rb.sup = sup;
    c.remainder = make_closed_form((Expr(1.0) - tau) * cf->expr(), n, rbox, rb);
    return c;
  }
  const FieldPtr t = c.tau;
  c.v = std::make_shared<FunctionField>(
      n, [u, t](std::span<const double> x) { return t->value(x) * u->value(x); }, tbox, sup);
  c.remainder = std::make_shared<FunctionField>(
      n, [u, t](std::span<const double> x) { return (1.0 - t->value(x)) * u->value(x); },
      std::nullopt, sup);
  return c;
}

double tail_constant(int N, double s) { return kernel_tail_mass(N, s, kTailRadius); }

Estimate tail_term(const CutoffField& c, const CoordinateDecomposition& decomp, int group,
                   std::span<const double> x, const QuadratureSpec& q) {
  // One-sided: half the symmetric far-field integral.
  return 0.5 * far_field_integral(*c.remainder, decomp, group, x, kTailRadius, q);
}

double LocalizationPoint::rhs(const CoordinateDecomposition& decomp, double b_factor) const {
  double v = f.value;
  for (int i = 0; i + 1 < decomp.groups(); ++i)
    if (decomp.is_fractional(i))
      v += b_factor * decomp.weight(i) * c_ns(decomp.group_dim(i), decomp.order(i)) * g[i].value;
  return v;
}

double LocalizationPoint::rhs_error(const CoordinateDecomposition& decomp, double b_factor) const {
  double e = f.error;
  for (int i = 0; i + 1 < decomp.groups(); ++i)
    if (decomp.is_fractional(i))
      e += b_factor * decomp.weight(i) * c_ns(decomp.group_dim(i), decomp.order(i)) * g[i].error;
  return e;
}

LocalizationPoint evaluate_localization(const Instance& inst, const CutoffField& c,
                                        std::span<const double> x, const QuadratureSpec& q) {
  const auto& dec = inst.decomp;
  if (!half_box(dec).contains(dec, x))
    throw std::invalid_argument("localization identity is only claimed on B_{1/2}");
  LocalizationPoint p;
  p.x.assign(x.begin(), x.end());
  p.Lv = apply_L(*c.v, dec, x, q);
  p.f = apply_L(*inst.u, dec, x, q);
  p.g.assign(dec.groups() - 1, Estimate{});
  for (int i = 0; i + 1 < dec.groups(); ++i)
    if (dec.is_fractional(i)) p.g[i] = tail_term(c, dec, i, x, q);
  return p;
}

LocalizeResult localize(const Instance& inst, const LocalizeOptions& opt) {
  const auto& dec = inst.decomp;
  const BoxDomain half = half_box(dec);
  LocalizeResult res;
  res.cutoff = make_cutoff(inst.u, dec);

  Rng rng(opt.seed);
  std::vector<std::vector<double>> xs;
  const int n = dec.dimension();
  while (static_cast<int>(xs.size()) < opt.points) {
    std::vector<double> x(n);
    for (auto& c : x) c = rng.uniform(-0.5, 0.5);
    if (half.contains(dec, x)) xs.push_back(std::move(x));
  }
  std::vector<LocalizationPoint> pts(xs.size());
  parallel_for(xs.size(), opt.threads, [&](std::size_t k) {
    pts[k] = evaluate_localization(inst, res.cutoff, xs[k], opt.quad);
  });

  CheckSuite& suite = res.suite;
  suite.name = "localization";
  suite.params = {{"label", inst.label}, {"sup_u", inst.sup_u}, {"seed", opt.seed},
                  {"tau_transition", {kInner, kOuter}}, {"tail_radius", kTailRadius}};

  CheckReport literal{"Lv_eq_g_b_a_c"};
  literal.params = {{"b_i", "a_i c_{N_i,s_i}"}};
  CheckReport doubled{"Lv_eq_g_b_2a_c"};
  doubled.params = {{"b_i", "2 a_i c_{N_i,s_i}"}};
  CheckReport bound{"tail_bound"};
  for (const auto& p : pts) {
    Json at = to_json(p.x);
    for (auto [rep, factor] : {std::pair{&literal, 1.0}, std::pair{&doubled, 2.0}}) {
      const double rhs = p.rhs(dec, factor);
      const double tol = 10.0 * (p.Lv.error + p.rhs_error(dec, factor)) +
                         64.0 * kEps * (std::abs(p.Lv.value) + std::abs(rhs));
      rep->add_eq(at, p.Lv.value, rhs, tol);
    }
    for (int i = 0; i + 1 < dec.groups(); ++i) {
      if (!dec.is_fractional(i)) continue;
      const double C = tail_constant(dec.group_dim(i), dec.order(i));
      bound.add_le(Json{{"x", at}, {"group", i}}, std::abs(p.g[i].value), C * inst.sup_u,
                   10.0 * p.g[i].error);
    }
  }

  // Closed-form tail constant against quadrature of the constant field.
  CheckReport constant{"tail_constant_numeric"};
  for (int i = 0; i + 1 < dec.groups(); ++i) {
    if (!dec.is_fractional(i)) continue;
    const auto one = make_closed_form(Expr(1.0), n);
    std::vector<double> x0(n, 0.0);
    const Estimate num = 0.5 * far_field_integral(*one, dec, i, x0, kTailRadius, opt.quad);
    const double C = tail_constant(dec.group_dim(i), dec.order(i));
    constant.add_eq(Json{{"group", i}}, num.value, C, 1e-8 * C + 10.0 * num.error);
  }
  suite.checks = {literal, doubled, bound, constant};
  return res;
}

}  // namespace anisofrac
