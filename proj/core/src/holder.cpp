#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anisofrac/sampling.hpp"
#include "anisofrac/verification.hpp"

namespace anisofrac {
namespace {

std::vector<double> axis_radii(const CoordinateDecomposition& decomp, const BoxDomain& region) {
  std::vector<double> R(decomp.dimension());
  for (int i = 0; i < decomp.groups(); ++i) {
    const double r =
        i + 1 == decomp.groups() ? region.radii[i] * region.dilation : region.radii[i];
    for (int k = decomp.offset(i); k < decomp.offset(i) + decomp.group_dim(i); ++k) R[k] = r;
  }
  return R;
}

std::vector<double> draw_point(Rng& rng, const CoordinateDecomposition& decomp,
                               const BoxDomain& region, const std::vector<double>& R) {
  std::vector<double> x(R.size());
  do {
    for (std::size_t k = 0; k < R.size(); ++k) x[k] = rng.uniform(-R[k], R[k]);
  } while (!region.contains(decomp, x));
  return x;
}

std::vector<double> draw_direction(Rng& rng, std::size_t n) {
  std::vector<double> e(n);
  double r2;
  do {
    r2 = 0.0;
    for (auto& c : e) {
      c = rng.uniform(-1.0, 1.0);
      r2 += c * c;
    }
  } while (r2 > 1.0 || r2 < 1e-4);
  const double r = std::sqrt(r2);
  for (auto& c : e) c /= r;
  return e;
}

}  // namespace

HolderEstimate holder_seminorm(const ScalarField& g, double alpha,
                               const CoordinateDecomposition& decomp, const BoxDomain& region,
                               std::size_t sample_pairs, std::uint64_t seed, int levels) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (levels < 1) throw std::invalid_argument("need at least one stratification level");
  region.validate(decomp);
  const auto R = axis_radii(decomp, region);
  double diam2 = 0.0;
  for (double r : R) diam2 += 4.0 * r * r;
  const double h0 = std::sqrt(diam2) * std::pow(2.0, -levels);

  Rng rng(seed);
  HolderEstimate out;
  auto consider = [&](const std::vector<double>& x, const std::vector<double>& x2) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d2 += (x[k] - x2[k]) * (x[k] - x2[k]);
    if (!(d2 > 0.0)) return;
    const double gx = g.value(x), gy = g.value(x2);
    out.sup = std::max({out.sup, std::abs(gx), std::abs(gy)});
    const double q = std::abs(gx - gy) / std::pow(std::sqrt(d2), alpha);
    if (q > out.seminorm) {
      out.seminorm = q;
      out.x = x;
      out.x2 = x2;
    }
    ++out.pairs;
  };

  const std::size_t uniform = sample_pairs / 2;
  for (std::size_t k = 0; k < uniform; ++k) {
    const auto x = draw_point(rng, decomp, region, R);
    const auto x2 = draw_point(rng, decomp, region, R);
    consider(x, x2);
  }
  for (std::size_t k = uniform; k < sample_pairs; ++k) {
    const double dist = h0 * std::ldexp(1.0, static_cast<int>(k % levels));
    for (int attempt = 0; attempt < 8; ++attempt) {
      const auto x = draw_point(rng, decomp, region, R);
      const auto e = draw_direction(rng, x.size());
      std::vector<double> x2(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) x2[j] = x[j] + dist * e[j];
      if (region.contains(decomp, x2)) {
        consider(x, x2);
        break;
      }
    }
  }
  return out;
}

CorollaryLevel corollary_ratio(const Instance& inst, int level, const CorollaryOptions& opt) {
  const auto& dec = inst.decomp;
  const BoxDomain outer{inst.domain.radii, 1.0};
  BoxDomain inner = outer;
  for (double& r : inner.radii) r *= 0.5;
  const FieldPtr g = derivative_field(inst.u, dec.local_axis(), opt.quad.fd_step);
  const std::size_t pairs = opt.base_pairs << level;
  const HolderEstimate h = holder_seminorm(*g, opt.alpha, dec, inner, pairs, opt.seed);
  const SupEstimate f =
      estimate_sup_Lu(*inst.u, dec, outer, opt.base_grid << level, opt.quad, opt.threads);
  CorollaryLevel out;
  out.level = level;
  out.holder_norm = h.norm();
  out.sup_f = f.sampled_max;
  out.sup_u = inst.sup_u;
  out.ratio = out.holder_norm / (out.sup_f + out.sup_u);
  return out;
}

CorollaryResult probe_corollary_here(const std::vector<Instance>& family,
                                     const CorollaryOptions& opt) {
  if (opt.levels < 2) throw std::invalid_argument("need at least two resolutions");
  CorollaryResult res;
  res.report.check = "corollary_holder_ratio";
  res.report.params = {{"alpha", opt.alpha},
                       {"levels", opt.levels},
                       {"base_grid", opt.base_grid},
                       {"base_pairs", opt.base_pairs},
                       {"seed", opt.seed},
                       {"max_variation", opt.max_variation}};
  for (const Instance& inst : family) {
    CorollaryInstanceResult r;
    r.label = inst.label;
    for (int l = 0; l < opt.levels; ++l) r.levels.push_back(corollary_ratio(inst, l, opt));
    const double a = r.levels[opt.levels - 1].ratio, b = r.levels[opt.levels - 2].ratio;
    r.variation = std::abs(a - b) / std::abs(a);
    Json levels = Json::array();
    for (const auto& lv : r.levels)
      levels.push_back({{"level", lv.level},
                        {"holder_norm", lv.holder_norm},
                        {"sup_f", lv.sup_f},
                        {"sup_u", lv.sup_u},
                        {"ratio", lv.ratio}});
    res.report.add_le(Json{{"label", inst.label}, {"levels", levels}}, r.variation,
                      opt.max_variation, 0.0);
    res.instances.push_back(std::move(r));
  }
  return res;
}

}  // namespace anisofrac
