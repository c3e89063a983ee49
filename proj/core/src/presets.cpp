#include "anisofrac/presets.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anisofrac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LocalCutoff {
  Expr taper;
  double lo, hi;
  double slope;  // max |T'|
};

LocalCutoff local_cutoff(const CoordinateDecomposition& decomp, const BoxDomain& domain) {
  domain.validate(decomp);
  const double dm = domain.radii.back() * domain.dilation;
  const double lo = 1.25 * dm, hi = 2.0 * dm;
  const Expr xn = Expr::coord(decomp.local_axis());
  return {radial_taper(xn * xn, lo, hi), lo, hi, 15.0 / (8.0 * (hi - lo))};
}

Support local_slab(const CoordinateDecomposition& decomp, double hi) {
  Support box;
  box.lo.assign(decomp.dimension(), -kInf);
  box.hi.assign(decomp.dimension(), kInf);
  box.lo.back() = -hi;
  box.hi.back() = hi;
  return box;
}

FieldBounds bounds_with(const CoordinateDecomposition& decomp, double sup, double sup_dnu) {
  FieldBounds b;
  b.sup = sup;
  b.sup_partial.resize(decomp.dimension());
  b.sup_partial[decomp.local_axis()] = sup_dnu;
  return b;
}

}  // namespace

double bump_slope_max(int power, double radius) {
  if (power < 1) throw std::invalid_argument("bump power must be >= 1");
  if (power == 1) return 2.0 / radius;
  const double k = power;
  return 2.0 * k / radius / std::sqrt(2.0 * k - 1.0) * std::pow((2.0 * k - 2.0) / (2.0 * k - 1.0), k - 1.0);
}

FieldPtr fractional_bump(const CoordinateDecomposition& decomp, int group, double d, double p) {
  if (!(d > 0.0)) throw std::invalid_argument("bump radius must be positive");
  const int n = decomp.dimension();
  const Expr q = squared_norm(decomp.offset(group), decomp.group_dim(group));
  const Expr e = pow_pos(Expr(1.0) - Expr(1.0 / (d * d)) * q, p);
  Support box;
  box.lo.assign(n, -kInf);
  box.hi.assign(n, kInf);
  for (int k = 0; k < decomp.group_dim(group); ++k) {
    box.lo[decomp.offset(group) + k] = -d;
    box.hi[decomp.offset(group) + k] = d;
  }
  FieldBounds b;
  b.sup = 1.0;
  b.sup_partial.assign(n, std::nullopt);
  if (group != decomp.groups() - 1) b.sup_partial[decomp.local_axis()] = 0.0;
  return make_closed_form(e, n, box, b);
}

Preset affine_preset(const CoordinateDecomposition& decomp, const BoxDomain& domain, double c,
                     double b) {
  const LocalCutoff cut = local_cutoff(decomp, domain);
  const Expr xn = Expr::coord(decomp.local_axis());
  const double sup = std::abs(c) + std::abs(b) * cut.hi;
  const double sup_dnu = std::abs(b) + sup * cut.slope;
  Preset p;
  p.name = "affine";
  p.field = make_closed_form((Expr(c) + Expr(b) * xn) * cut.taper, decomp.dimension(),
                             local_slab(decomp, cut.hi), bounds_with(decomp, sup, sup_dnu));
  p.sup_u = sup;
  p.sup_dnu = sup_dnu;
  return p;
}

Preset quadratic_taper_preset(const CoordinateDecomposition& decomp, const BoxDomain& domain) {
  const LocalCutoff cut = local_cutoff(decomp, domain);
  const Expr xn = Expr::coord(decomp.local_axis());
  const double sup = cut.hi * cut.hi;
  const double sup_dnu = 2.0 * cut.hi + sup * cut.slope;
  Preset p;
  p.name = "quadratic-taper";
  p.field = make_closed_form(xn * xn * cut.taper, decomp.dimension(), local_slab(decomp, cut.hi),
                             bounds_with(decomp, sup, sup_dnu));
  p.sup_u = sup;
  p.sup_dnu = sup_dnu;
  return p;
}

Preset separable_bump_preset(const CoordinateDecomposition& decomp, const BoxDomain& domain,
                             int power, std::vector<double> radii) {
  domain.validate(decomp);
  if (radii.empty()) radii = domain.radii;
  if (static_cast<int>(radii.size()) != decomp.groups())
    throw std::invalid_argument("separable bump needs one radius per group");
  const int n = decomp.dimension();
  Expr e(1.0);
  Support box;
  box.lo.assign(n, 0.0);
  box.hi.assign(n, 0.0);
  for (int i = 0; i < decomp.groups(); ++i) {
    const double r = radii[i];
    if (!(r > 0.0)) throw std::invalid_argument("bump radius must be positive");
    const Expr q = squared_norm(decomp.offset(i), decomp.group_dim(i));
    e = e * pow_pos(Expr(1.0) - Expr(1.0 / (r * r)) * q, power);
    for (int k = 0; k < decomp.group_dim(i); ++k) {
      box.lo[decomp.offset(i) + k] = -r;
      box.hi[decomp.offset(i) + k] = r;
    }
  }
  const double sup_dnu = bump_slope_max(power, radii.back());
  Preset p;
  p.name = "separable-bump";
  p.field = make_closed_form(e, n, box, bounds_with(decomp, 1.0, sup_dnu));
  p.sup_u = 1.0;
  p.sup_dnu = sup_dnu;
  p.exact_sups = true;
  return p;
}

Preset fractional_bump_preset(const CoordinateDecomposition& decomp, const BoxDomain& domain) {
  domain.validate(decomp);
  if (decomp.groups() < 2 || !decomp.is_fractional(0))
    throw std::invalid_argument("fractional-bump needs a fractional first group");
  Preset p;
  p.name = "fractional-bump";
  p.field = fractional_bump(decomp, 0, domain.radii[0], decomp.order(0));
  p.sup_u = 1.0;
  p.sup_dnu = 0.0;
  p.exact_sups = true;
  return p;
}

Preset make_preset(std::string_view name, const CoordinateDecomposition& decomp,
                   const BoxDomain& domain) {
  if (name == "affine") return affine_preset(decomp, domain);
  if (name == "quadratic-taper") return quadratic_taper_preset(decomp, domain);
  if (name == "separable-bump") return separable_bump_preset(decomp, domain);
  if (name == "fractional-bump") return fractional_bump_preset(decomp, domain);
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"affine", "quadratic-taper", "separable-bump", "fractional-bump"};
}

}  // namespace anisofrac
