#pragma once

#include <string_view>
#include <vector>

#include "anisofrac/decomposition.hpp"

namespace anisofrac {

/// Euler Gamma function via a Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula below 1/2. Throws std::domain_error at the poles.
double gamma(double x);

/// Normalization c_{N,s} of the symmetric-difference fractional Laplacian.
/// Requires N >= 1 and s in (0,1).
double c_ns(int N, double s);

/// Prefactor convention for the constant in (-Delta)^s (1-|x|^2)_+^s.
enum class CTildeVariant {
  pow2s,  ///< 2^s Gamma(s+1) Gamma(N/2+s) / Gamma(N/2)
  pow4s,  ///< 2^{2s} Gamma(s+1) Gamma(N/2+s) / Gamma(N/2)
};

std::string_view to_string(CTildeVariant v);

/// c~_{N,s} in either convention, for s in (0,1].
double c_tilde(int N, double s, CTildeVariant variant = CTildeVariant::pow2s);

struct KernelConstants {
  int N = 1;
  double s = 0.5;
  double c = 0.0;
  double c_tilde_pow2s = 0.0;
  double c_tilde_pow4s = 0.0;
};

KernelConstants kernel_constants(int N, double s);

/// Surface measure of the unit sphere S^{N-1} (2 for N = 1).
double sphere_measure(int N);

/// Integral of |y|^{-N-2s} over {|y| >= rho} in R^N.
double kernel_tail_mass(int N, double s, double rho);

struct EstimateParameters {
  double kappa = 0.0;
  double sup_Lu = 0.0;
  double sup_u = 0.0;
  double sup_dnu = 0.0;
  /// sup_u / (1 - (3/4)^{s_i}) * c~_{N_i,s_i} / d_i^{2 s_i}, one per group (local group last).
  std::vector<double> per_group_terms;
  CTildeVariant variant = CTildeVariant::pow2s;
};

/// kappa = 4/3 (sup_Lu + sum_{i=1}^m sup_u/(1-(3/4)^{s_i}) c~_{N_i,s_i}/d_i^{2 s_i}),
/// with s_m = 1 for the local group.
EstimateParameters compute_kappa(double sup_Lu, double sup_u, double sup_dnu,
                                 const CoordinateDecomposition& decomp,
                                 const BoxDomain& domain,
                                 CTildeVariant variant = CTildeVariant::pow2s);

}  // namespace anisofrac
