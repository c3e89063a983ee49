#include "anisofrac/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "anisofrac/presets.hpp"

namespace anisofrac {
namespace {

void require_point(const ScalarField& u, std::span<const double> x) {
  if (static_cast<int>(x.size()) != u.dimension())
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " does not match field dimension " +
                                std::to_string(u.dimension()));
}

void require_fractional(const CoordinateDecomposition& decomp, int group) {
  if (group < 0 || group >= decomp.groups() - 1)
    throw std::out_of_range("group " + std::to_string(group) + " is not a nonlocal group");
  if (!decomp.is_fractional(group))
    throw std::invalid_argument("group " + std::to_string(group) +
                                " has s = 1; use the classical second derivative");
}

}  // namespace

Estimate sectional_integral(const ScalarField& u, const CoordinateDecomposition& decomp,
                            int group, std::span<const double> x, const QuadratureSpec& q) {
  require_fractional(decomp, group);
  require_point(u, x);
  q.validate();
  if (u.dimension() < decomp.dimension())
    throw std::invalid_argument("field dimension is smaller than the decomposition");
  const double s = decomp.order(group);
  return integrate_directions(u.dimension(), decomp.offset(group), decomp.group_dim(group),
                              q.angular_nodes, [&](std::span<const double> e) {
                                return ray_second_difference_integral(u, x, e, s, q);
                              });
}

Estimate frac_laplacian_point(const ScalarField& u, const CoordinateDecomposition& decomp,
                              int group, std::span<const double> x, const QuadratureSpec& q) {
  require_fractional(decomp, group);
  const double c = c_ns(decomp.group_dim(group), decomp.order(group));
  return c * sectional_integral(u, decomp, group, x, q);
}

Estimate far_field_integral(const ScalarField& u, const CoordinateDecomposition& decomp,
                            int group, std::span<const double> x, double rho,
                            const QuadratureSpec& q) {
  require_fractional(decomp, group);
  require_point(u, x);
  q.validate();
  const double s = decomp.order(group);
  return integrate_directions(u.dimension(), decomp.offset(group), decomp.group_dim(group),
                              q.angular_nodes, [&](std::span<const double> e) {
                                return ray_tail_integral(u, x, e, s, rho, q);
                              });
}

Estimate minus_second_derivative(const ScalarField& u, int first, int count,
                                 std::span<const double> x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  require_point(u, x);
  Estimate out;
  std::vector<double> buf(x.begin(), x.end());
  const double u0 = u.value(x);
  auto central = [&](int k, double step) {
    buf[k] = x[k] + step;
    const double up = u.value(buf);
    buf[k] = x[k] - step;
    const double dn = u.value(buf);
    buf[k] = x[k];
    return (up - 2.0 * u0 + dn) / (step * step);
  };
  for (int k = first; k < first + count; ++k) {
    if (const auto exact = u.second_partial(k, x)) {
      out.value -= *exact;
      continue;
    }
    const double dh = central(k, h);
    const double d2h = central(k, 2.0 * h);
    const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() *
                            std::max(std::abs(u0), 1e-300) / (h * h);
    // Richardson-extrapolated value, its correction as the error.
    out.value -= dh + (dh - d2h) / 3.0;
    out.error += std::abs(dh - d2h) / 3.0 + roundoff;
  }
  return out;
}

Estimate classical_second_derivative(const ScalarField& u, const CoordinateDecomposition& decomp,
                                     int group, std::span<const double> x, double h) {
  if (group < 0 || group >= decomp.groups())
    throw std::out_of_range("group index out of range");
  if (decomp.is_fractional(group))
    throw std::invalid_argument("group " + std::to_string(group) + " is fractional");
  return minus_second_derivative(u, decomp.offset(group), decomp.group_dim(group), x, h);
}

Estimate apply_L(const ScalarField& u, const CoordinateDecomposition& decomp,
                 std::span<const double> x, const QuadratureSpec& q) {
  if (u.dimension() != decomp.dimension())
    throw std::invalid_argument("field dimension does not match the decomposition");
  Estimate out;
  for (int i = 0; i + 1 < decomp.groups(); ++i) {
    const double a = decomp.weight(i);
    if (a == 0.0) continue;
    out += a * (decomp.is_fractional(i) ? frac_laplacian_point(u, decomp, i, x, q)
                                        : classical_second_derivative(u, decomp, i, x, q.fd_step));
  }
  out += classical_second_derivative(u, decomp, decomp.groups() - 1, x, q.fd_step);
  return out;
}

Estimate apply_extended(const ScalarField& u, const CoordinateDecomposition& decomp,
                        std::span<const double> p, const QuadratureSpec& q) {
  const int n = decomp.dimension();
  if (u.dimension() != n + 1)
    throw std::invalid_argument("extended field must live on R^{n+1}");
  Estimate out;
  for (int i = 0; i + 1 < decomp.groups(); ++i) {
    const double a = decomp.weight(i);
    if (a == 0.0) continue;
    out += a * (decomp.is_fractional(i) ? frac_laplacian_point(u, decomp, i, p, q)
                                        : classical_second_derivative(u, decomp, i, p, q.fd_step));
  }
  out += 0.5 * minus_second_derivative(u, n - 1, 2, p, q.fd_step);
  return out;
}

CTildeValidation validate_c_tilde(int N, double s, double d, std::vector<double> probe_radii,
                                  const QuadratureSpec& q, double match_tol) {
  if (probe_radii.empty()) throw std::invalid_argument("need at least one probe");
  CTildeValidation r;
  r.N = N;
  r.s = s;
  r.d = d;
  r.match_tol = match_tol;
  r.probe_radii = probe_radii;
  const CoordinateDecomposition decomp({N, 1}, {s}, {1.0});
  const FieldPtr bump = fractional_bump(decomp, 0, d, s);
  // Probes lie on a fixed oblique ray when N = 2.
  const double ca = std::cos(0.7), sa = std::sin(0.7);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  for (double rad : probe_radii) {
    if (!(std::abs(rad) < d)) throw std::invalid_argument("probe lies outside the ball");
    std::vector<double> x(N + 1, 0.0);
    if (N == 1) {
      x[0] = rad;
    } else {
      x[0] = rad * ca;
      x[1] = rad * sa;
    }
    const Estimate v = frac_laplacian_point(*bump, decomp, 0, x, q);
    r.values.push_back(v);
    lo = std::min(lo, v.value);
    hi = std::max(hi, v.value);
    sum += v.value;
  }
  r.mean = sum / static_cast<double>(probe_radii.size());
  r.relative_spread = (hi - lo) / std::abs(r.mean);
  const double scale = std::pow(d, -2.0 * s);
  r.expected_pow2s = c_tilde(N, s, CTildeVariant::pow2s) * scale;
  r.expected_pow4s = c_tilde(N, s, CTildeVariant::pow4s) * scale;
  r.rel_error_pow2s = std::abs(r.mean - r.expected_pow2s) / r.expected_pow2s;
  r.rel_error_pow4s = std::abs(r.mean - r.expected_pow4s) / r.expected_pow4s;
  if (r.rel_error_pow2s < match_tol) r.matching.push_back(CTildeVariant::pow2s);
  if (r.rel_error_pow4s < match_tol) r.matching.push_back(CTildeVariant::pow4s);
  return r;
}

}  // namespace anisofrac
