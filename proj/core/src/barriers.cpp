#include "anisofrac/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anisofrac/operator.hpp"
#include "anisofrac/parallel.hpp"
#include "anisofrac/sampling.hpp"

namespace anisofrac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

double pos(double r) { return r > 0.0 ? r : 0.0; }

Json point_json(std::span<const double> p) {
  Json a = Json::array();
  for (double v : p) a.push_back(v);
  return a;
}

// Random X' with group i in the shell [lo_i, hi_i) scaled by d_i.
std::vector<double> sample_x_prime(Rng& rng, const CoordinateDecomposition& decomp,
                                   const BoxDomain& domain, double lo, double hi) {
  std::vector<double> xp(decomp.dimension() - 1, 0.0);
  for (int i = 0; i + 1 < decomp.groups(); ++i) {
    const auto g = rng.in_shell(decomp.group_dim(i), lo * domain.radii[i], hi * domain.radii[i]);
    std::copy(g.begin(), g.end(), xp.begin() + decomp.offset(i));
  }
  return xp;
}

std::vector<double> pack(std::vector<double> xp, double y, double z) {
  xp.push_back(y);
  xp.push_back(z);
  return xp;
}

}  // namespace

BarrierPhi::BarrierPhi(FieldPtr u) : u_(std::move(u)) {
  if (!u_) throw std::invalid_argument("BarrierPhi needs a base field");
  n_ = u_->dimension();
}

double BarrierPhi::value(std::span<const double> p) const {
  const double yp = pos(p[n_ - 1]), zp = pos(p[n_]);
  std::vector<double> x(p.begin(), p.begin() + n_);
  auto at = [&](double t) {
    x[n_ - 1] = t;
    return u_->value(x);
  };
  const double a = yp + zp, b = yp - zp;
  return 0.25 * ((at(a) + at(-a)) - (at(b) + at(-b)));
}

std::optional<double> BarrierPhi::second_partial(int axis, std::span<const double> p) const {
  const double y = p[n_ - 1], z = p[n_];
  if (y < 0.0 || z < 0.0) return 0.0;
  if (y == 0.0 || z == 0.0) return std::nullopt;
  const int base_axis = axis >= n_ - 1 ? n_ - 1 : axis;
  std::vector<double> x(p.begin(), p.begin() + n_);
  double acc = 0.0;
  const double args[4] = {y + z, -y - z, y - z, -y + z};
  for (int k = 0; k < 4; ++k) {
    x[n_ - 1] = args[k];
    const auto d2 = u_->second_partial(base_axis, x);
    if (!d2) return std::nullopt;
    acc += (k < 2 ? 1.0 : -1.0) * *d2;
  }
  return 0.25 * acc;
}

std::optional<double> BarrierPhi::ray_exit_radius(std::span<const double> p,
                                                  std::span<const double> e) const {
  if (e[n_ - 1] != 0.0 || e[n_] != 0.0) return std::nullopt;
  const double yp = pos(p[n_ - 1]), zp = pos(p[n_]);
  std::vector<double> x(p.begin(), p.begin() + n_);
  std::vector<double> dir(e.begin(), e.begin() + n_);
  double R = 0.0;
  for (double t : {yp + zp, yp - zp, -yp + zp, -yp - zp}) {
    x[n_ - 1] = t;
    const auto r = u_->ray_exit_radius(x, dir);
    if (!r) return std::nullopt;
    R = std::max(R, *r);
  }
  return R;
}

BarrierPsi::BarrierPsi(const CoordinateDecomposition& decomp, const BoxDomain& domain,
                       double sup_u, double sup_dnu, double kappa)
    : decomp_(decomp),
      radii_(domain.radii),
      sup_u_(sup_u),
      sup_dnu_(sup_dnu),
      kappa_(kappa),
      n_(decomp.dimension()) {
  domain.validate(decomp);
  dm_ = domain.radii.back();
  Expr e(0.0);
  for (int i = 0; i + 1 < decomp.groups(); ++i) {
    const double s = decomp.order(i), d = radii_[i];
    const double A = sup_u / (1.0 - std::pow(0.75, s));
    const Expr q = squared_norm(decomp.offset(i), decomp.group_dim(i));
    e = e + Expr(A) * (Expr(1.0) - pow_pos(Expr(1.0) - Expr(1.0 / (d * d)) * q, s));
  }
  x_part_ = make_closed_form(e, n_ + 1);
}

double BarrierPsi::group_part(std::span<const double> p) const { return x_part_->value(p); }

double BarrierPsi::value(std::span<const double> p) const {
  const double yp = pos(p[n_ - 1]), zp = pos(p[n_]);
  double v = group_part(p);
  if (yp > 0.0 && zp > 0.0)
    v += 4.0 * sup_dnu_ * yp * zp / dm_ + kappa_ * yp * zp * std::abs(std::log(2.0 * dm_ / (yp + zp)));
  return v;
}

std::optional<double> BarrierPsi::second_partial(int axis, std::span<const double> p) const {
  if (axis < n_ - 1) return x_part_->second_partial(axis, p);
  const double y = p[n_ - 1], z = p[n_];
  if (y < 0.0 || z < 0.0) return 0.0;
  if (y == 0.0 || z == 0.0) return std::nullopt;
  const double sgn = std::log(2.0 * dm_ / (y + z)) < 0.0 ? -1.0 : 1.0;
  const double w = y + z;
  const double d2 = axis == n_ - 1 ? -z * (y + 2.0 * z) / (w * w) : -y * (z + 2.0 * y) / (w * w);
  return kappa_ * sgn * d2;
}

std::optional<double> BarrierPsi::ray_exit_radius(std::span<const double> p,
                                                  std::span<const double> e) const {
  if (e[n_ - 1] != 0.0 || e[n_] != 0.0) return std::nullopt;
  int group = -1;
  for (int k = 0; k < n_ - 1; ++k) {
    if (e[k] == 0.0) continue;
    int g = 0;
    while (!(k >= decomp_.offset(g) && k < decomp_.offset(g) + decomp_.group_dim(g))) ++g;
    if (group >= 0 && g != group) return std::nullopt;
    group = g;
  }
  if (group < 0) return 0.0;
  Support box;
  box.lo.assign(n_ + 1, -kInf);
  box.hi.assign(n_ + 1, kInf);
  for (int k = decomp_.offset(group); k < decomp_.offset(group) + decomp_.group_dim(group); ++k) {
    box.lo[k] = -radii_[group];
    box.hi[k] = radii_[group];
  }
  return box_ray_exit(box, p, e);
}

double h_ratio(double t) { return t / ((1.0 + t) * (1.0 + t)); }

double yz_log(double y, double z, double d) { return y * z * std::log(2.0 * d / (y + z)); }

double yz_log_laplacian(double y, double z) { return -2.0 + 2.0 * y * z / ((y + z) * (y + z)); }

CheckSuite check_phi_lemma(const BarrierInput& in, const CoordinateDecomposition& decomp,
                           const BoxDomain& domain, const BarrierOptions& opt) {
  domain.validate(decomp);
  const int n = decomp.dimension();
  const double dm = domain.radii.back();
  const auto phi = std::make_shared<BarrierPhi>(in.u);
  Rng rng(opt.seed);

  CheckSuite suite;
  suite.name = "phi_lemma";
  suite.params = {{"sup_u", in.sup_u}, {"sup_dnu", in.sup_dnu}, {"sup_Lu", in.sup_Lu},
                  {"seed", opt.seed}};

  // Interior probes of Q'.
  std::vector<std::vector<double>> probes;
  for (int k = 0; k < opt.identity_probes; ++k) {
    auto xp = sample_x_prime(rng, decomp, domain, 0.0, 1.0);
    const double y = rng.uniform(0.0, 0.25 * dm), z = rng.uniform(0.0, 0.25 * dm);
    probes.push_back(pack(std::move(xp), y, z));
  }
  std::vector<Estimate> lhs(probes.size()), rhs(probes.size());
  std::vector<double> scale(probes.size());
  parallel_for(probes.size(), opt.threads, [&](std::size_t k) {
    const auto& p = probes[k];
    lhs[k] = apply_extended(*phi, decomp, p, opt.quad);
    const double y = p[n - 1], z = p[n];
    std::vector<double> x(p.begin(), p.begin() + n);
    double acc = 0.0, err = 0.0, sc = 0.0;
    const double args[4] = {y + z, y - z, -y + z, -y - z};
    const double sign[4] = {1.0, -1.0, -1.0, 1.0};
    for (int j = 0; j < 4; ++j) {
      x[n - 1] = args[j];
      const Estimate L = apply_L(*in.u, decomp, x, opt.quad);
      acc += sign[j] * L.value;
      err += L.error;
      sc += std::abs(L.value);
    }
    rhs[k] = {0.25 * acc, 0.25 * err};
    scale[k] = sc;
  });

  CheckReport identity{"L_phi_identity"};
  CheckReport norm{"L_phi_norm_bound"};
  CheckReport vanish{"phi_vanishing"};
  CheckReport symmetry{"phi_symmetry"};
  CheckReport lipschitz{"phi_lipschitz_bound"};
  identity.params = {{"tol_rule", "10x quadrature error of both sides"}};
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const double tol = 10.0 * (lhs[k].error + rhs[k].error) + 64.0 * kEps * scale[k];
    identity.add_eq(point_json(probes[k]), lhs[k].value, rhs[k].value, tol);
    norm.add_le(point_json(probes[k]), std::abs(lhs[k].value), in.sup_Lu, 10.0 * lhs[k].error);
  }

  for (int k = 0; k < opt.lipschitz_samples; ++k) {
    auto xp = sample_x_prime(rng, decomp, domain, 0.0, 1.5);
    const double y = rng.uniform(-0.5 * dm, dm), z = rng.uniform(-0.5 * dm, dm);
    const auto p = pack(xp, y, z);
    const double v = phi->value(p);
    lipschitz.add_le(point_json(p), std::abs(v), in.sup_dnu * std::min(pos(y), pos(z)), 1e-9);
    symmetry.add_eq(point_json(p), v, phi->value(pack(xp, z, y)), 0.0);
    const double ay = std::abs(y), az = std::abs(z);
    for (const auto& q : {pack(xp, -ay, az), pack(xp, ay, -az), pack(xp, -ay, -az),
                          pack(xp, 0.0, az), pack(xp, ay, 0.0)})
      vanish.add_eq(point_json(q), phi->value(q), 0.0, 0.0);
  }
  suite.checks = {identity, norm, vanish, symmetry, lipschitz};
  return suite;
}

CheckSuite check_psi_supersolution(const BarrierInput& in, const CoordinateDecomposition& decomp,
                                   const BoxDomain& domain, const EstimateParameters& kp,
                                   const BarrierOptions& opt) {
  domain.validate(decomp);
  const int m = decomp.groups();
  const double dm = domain.radii.back();
  const auto phi = std::make_shared<BarrierPhi>(in.u);
  const auto psi = std::make_shared<BarrierPsi>(decomp, domain, in.sup_u, in.sup_dnu, kp.kappa);
  Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);

  CheckSuite suite;
  suite.name = "psi_lemma";
  suite.params = {{"sup_u", in.sup_u},   {"sup_dnu", in.sup_dnu},
                  {"sup_Lu", in.sup_Lu}, {"kappa", kp.kappa},
                  {"c_tilde_variant", std::string(to_string(kp.variant))},
                  {"seed", opt.seed}};

  // Exterior regions P_1..P_5 (P_1 absent without nonlocal groups).
  CheckReport exterior{"psi_pm_phi_exterior"};
  exterior.params = {{"tol", 1e-9}};
  const int first_region = m > 1 ? 1 : 2;
  for (int k = 0; k < opt.exterior_samples; ++k) {
    const int region = first_region + k % (6 - first_region);
    std::vector<double> xp = sample_x_prime(rng, decomp, domain, 0.0, 1.5);
    double y = rng.uniform(-0.5 * dm, 1.5 * dm), z = rng.uniform(-0.5 * dm, 1.5 * dm);
    switch (region) {
      case 1: {
        const int i = rng.index(m - 1);
        const bool shell = (k / 5) % 2 == 0;
        const auto g = rng.in_shell(decomp.group_dim(i), (shell ? 0.5 : 1.0) * domain.radii[i],
                                    (shell ? 1.0 : 2.0) * domain.radii[i]);
        std::copy(g.begin(), g.end(), xp.begin() + decomp.offset(i));
        break;
      }
      case 2: y = rng.uniform(-dm, 0.0); break;
      case 3: z = rng.uniform(-dm, 0.0); break;
      case 4: y = rng.uniform(0.25 * dm, 2.0 * dm); break;
      default: z = rng.uniform(0.25 * dm, 2.0 * dm); break;
    }
    const auto p = pack(xp, y, z);
    Json input = {{"region", "P" + std::to_string(region)}, {"point", point_json(p)}};
    exterior.add_le(std::move(input), std::abs(phi->value(p)), psi->value(p), 1e-9);
  }

  // Interior probes of Q'.
  std::vector<std::vector<double>> probes;
  for (int k = 0; k < opt.psi_probes; ++k) {
    auto xp = sample_x_prime(rng, decomp, domain, 0.0, 1.0);
    const double y = rng.uniform(0.0, 0.25 * dm), z = rng.uniform(0.0, 0.25 * dm);
    probes.push_back(pack(std::move(xp), y, z));
  }
  std::vector<Estimate> Lpsi(probes.size()), Lphi(probes.size());
  parallel_for(probes.size(), opt.threads, [&](std::size_t k) {
    Lpsi[k] = apply_extended(*psi, decomp, probes[k], opt.quad);
    Lphi[k] = apply_extended(*phi, decomp, probes[k], opt.quad);
  });
  CheckReport stated{"L_psi_le_norm_Lu"};
  CheckReport stated_pm{"L_psi_pm_phi_le_0"};
  CheckReport reverse{"L_psi_ge_norm_Lu"};
  CheckReport reverse_pm{"L_psi_pm_phi_ge_0"};
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const Json at = point_json(probes[k]);
    const double t1 = 10.0 * Lpsi[k].error + 64.0 * kEps * std::abs(Lpsi[k].value);
    const double t2 = t1 + 10.0 * Lphi[k].error;
    stated.add_le(at, Lpsi[k].value, in.sup_Lu, t1);
    stated_pm.add_le(at, Lpsi[k].value + std::abs(Lphi[k].value), 0.0, t2);
    reverse.add_le(at, in.sup_Lu, Lpsi[k].value, t1);
    reverse_pm.add_le(at, std::abs(Lphi[k].value), Lpsi[k].value, t2);
  }

  CheckReport hessian{"yz_log_hessian_trace"};
  hessian.params = {{"step", opt.hessian_step}, {"tol", opt.hessian_tol}, {"d_m", dm}};
  {
    const double h = opt.hessian_step;
    auto fd = [&](double y, double z) {
      const double c = yz_log(y, z, dm);
      const double dyy = (yz_log(y + h, z, dm) - 2.0 * c + yz_log(y - h, z, dm)) / (h * h);
      const double dzz = (yz_log(y, z + h, dm) - 2.0 * c + yz_log(y, z - h, dm)) / (h * h);
      return dyy + dzz;
    };
    std::vector<std::pair<double, double>> pts{{0.2 * dm, 0.3 * dm}};
    for (int k = 1; k < opt.hessian_points; ++k)
      pts.emplace_back(rng.uniform(0.05, 0.95) * dm, rng.uniform(0.05, 0.95) * dm);
    for (auto [y, z] : pts)
      hessian.add_eq(Json{{"y", y}, {"z", z}}, fd(y, z), yz_log_laplacian(y, z), opt.hessian_tol);
    hessian.params["closed_form_at_0.2_0.3"] = yz_log_laplacian(0.2, 0.3);
  }

  CheckReport hsup{"h_sup_at_one"};
  {
    double best = -1.0, arg = 0.0;
    const long steps = std::lround(opt.h_scan_max / opt.h_scan_step);
    for (long k = 0; k <= steps; ++k) {
      const double t = k * opt.h_scan_step;
      const double v = h_ratio(t);
      if (v > best) {
        best = v;
        arg = t;
      }
    }
    hsup.params = {{"step", opt.h_scan_step}, {"t_max", opt.h_scan_max}};
    hsup.add_eq(Json{{"quantity", "max h"}}, best, 0.25, 1e-15);
    hsup.add_eq(Json{{"quantity", "argmax h"}}, arg, 1.0, opt.h_scan_step);
    hsup.add_eq(Json{{"quantity", "h(1)"}}, h_ratio(1.0), 0.25, 0.0);
    for (double t : {0.1, 0.5, 2.0, 10.0}) hsup.add_le(Json{{"t", t}}, h_ratio(t), 0.25, 0.0);
  }

  suite.checks = {exterior, stated, stated_pm, reverse, reverse_pm, hessian, hsup};
  return suite;
}

}  // namespace anisofrac
