#include "anisofrac/constants.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace anisofrac {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// sin(pi x) with exact zeros at the integers.
double sin_pi(double x) {
  double r = std::fmod(x, 2.0);  // (-2, 2)
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  // r in [-1, 1]; fold onto [-1/2, 1/2] using sin(pi r) = sin(pi (1 - r)).
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

double lanczos(double x) {
  // Gamma(x) for x >= 1/2.
  const double xm = x - 1.0;
  double acc = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) acc += kLanczos[k] / (xm + double(k));
  const double t = xm + kLanczosG + 0.5;
  const double sqrt_two_pi = std::sqrt(2.0 * std::numbers::pi);
  // Split the power to delay overflow for large x.
  const double half = std::pow(t, 0.5 * (xm + 0.5));
  return sqrt_two_pi * half * (half * std::exp(-t)) * acc;
}

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("gamma: pole at nonpositive integer " + std::to_string(x));
  if (x < 0.5) return std::numbers::pi / (sin_pi(x) * lanczos(1.0 - x));
  return lanczos(x);
}

double c_ns(int N, double s) {
  if (N < 1) throw std::invalid_argument("c_ns: N must be >= 1");
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("c_ns: s must lie in (0,1); s = 1 is the classical case");
  const double half_n = 0.5 * N;
  return std::pow(2.0, 2.0 * s - 1.0) * gamma(s + half_n) /
         (std::pow(std::numbers::pi, half_n) * std::abs(gamma(-s)));
}

std::string_view to_string(CTildeVariant v) {
  return v == CTildeVariant::pow2s ? "2^s" : "2^(2s)";
}

double c_tilde(int N, double s, CTildeVariant variant) {
  if (N < 1) throw std::invalid_argument("c_tilde: N must be >= 1");
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("c_tilde: s must lie in (0,1]");
  const double half_n = 0.5 * N;
  const double prefactor = std::pow(2.0, variant == CTildeVariant::pow2s ? s : 2.0 * s);
  return prefactor * gamma(s + 1.0) * gamma(half_n + s) / gamma(half_n);
}

KernelConstants kernel_constants(int N, double s) {
  KernelConstants k;
  k.N = N;
  k.s = s;
  k.c = c_ns(N, s);
  k.c_tilde_pow2s = c_tilde(N, s, CTildeVariant::pow2s);
  k.c_tilde_pow4s = c_tilde(N, s, CTildeVariant::pow4s);
  return k;
}

double sphere_measure(int N) {
  if (N < 1) throw std::invalid_argument("sphere_measure: N must be >= 1");
  if (N == 1) return 2.0;
  if (N == 2) return 2.0 * std::numbers::pi;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / gamma(0.5 * N);
}

double kernel_tail_mass(int N, double s, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("kernel_tail_mass: rho must be positive");
  return sphere_measure(N) * std::pow(rho, -2.0 * s) / (2.0 * s);
}

EstimateParameters compute_kappa(double sup_Lu, double sup_u, double sup_dnu,
                                 const CoordinateDecomposition& decomp,
                                 const BoxDomain& domain, CTildeVariant variant) {
  if (!(sup_Lu >= 0.0) || !(sup_u >= 0.0) || !(sup_dnu >= 0.0) || !std::isfinite(sup_Lu) ||
      !std::isfinite(sup_u) || !std::isfinite(sup_dnu))
    throw std::invalid_argument("compute_kappa: norms must be finite and nonnegative");
  domain.validate(decomp);

  EstimateParameters p;
  p.sup_Lu = sup_Lu;
  p.sup_u = sup_u;
  p.sup_dnu = sup_dnu;
  p.variant = variant;
  double sum = 0.0;
  for (int i = 0; i < decomp.groups(); ++i) {
    const double s = decomp.order(i);
    const double d = domain.radii[i];
    const double term = sup_u / (1.0 - std::pow(0.75, s)) *
                        c_tilde(decomp.group_dim(i), s, variant) / std::pow(d, 2.0 * s);
    p.per_group_terms.push_back(term);
    sum += term;
  }
  p.kappa = 4.0 / 3.0 * (sup_Lu + sum);
  return p;
}

}  // namespace anisofrac
