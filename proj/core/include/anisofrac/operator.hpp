#pragma once

#include <span>
#include <vector>

#include "anisofrac/constants.hpp"
#include "anisofrac/decomposition.hpp"
#include "anisofrac/field.hpp"
#include "anisofrac/quadrature.hpp"

namespace anisofrac {

/// int_{R^N} [2u(x) - u(x+y) - u(x-y)] |y|^{-N-2s} dy over the X_i block,
/// without the normalization c_{N,s}. Works on fields of any dimension >= the
/// decomposition's, so it also serves extended fields on R^{n+1}.
Estimate sectional_integral(const ScalarField& u, const CoordinateDecomposition& decomp,
                            int group, std::span<const double> x, const QuadratureSpec& q);

/// (-Delta_{X_i})^{s_i} u(x) for a fractional group.
Estimate frac_laplacian_point(const ScalarField& u, const CoordinateDecomposition& decomp,
                              int group, std::span<const double> x, const QuadratureSpec& q);

/// int_{|y| >= rho} [u(x+y) + u(x-y)] |y|^{-N-2s} dy over the X_i block.
Estimate far_field_integral(const ScalarField& u, const CoordinateDecomposition& decomp,
                            int group, std::span<const double> x, double rho,
                            const QuadratureSpec& q);

/// -sum_k d^2 u/dx_k^2 over axes [first, first+count). Exact when the field has
/// second partials, otherwise central differences with step h.
Estimate minus_second_derivative(const ScalarField& u, int first, int count,
                                 std::span<const double> x, double h);

/// The classical term of group i (s_i = 1 or the local group).
Estimate classical_second_derivative(const ScalarField& u, const CoordinateDecomposition& decomp,
                                     int group, std::span<const double> x, double h);

/// L u(x) = sum_{i<m} a_i (-Delta_{X_i})^{s_i} u(x) - d^2u/dx_n^2.
Estimate apply_L(const ScalarField& u, const CoordinateDecomposition& decomp,
                 std::span<const double> x, const QuadratureSpec& q);

/// Extended operator on R^{n+1} at the packed point (X', y, z):
/// sum_{i<m} a_i (-Delta_{X_i})^{s_i} - (1/2) d_y^2 - (1/2) d_z^2.
Estimate apply_extended(const ScalarField& u, const CoordinateDecomposition& decomp,
                        std::span<const double> p, const QuadratureSpec& q);

/// Quadrature check of (-Delta)^s (1-|x|^2/d^2)_+^s = const on B_d in R^N.
struct CTildeValidation {
  int N = 1;
  double s = 0.5;
  double d = 1.0;
  std::vector<double> probe_radii;
  std::vector<Estimate> values;
  double mean = 0.0;
  double relative_spread = 0.0;
  double expected_pow2s = 0.0;
  double expected_pow4s = 0.0;
  double rel_error_pow2s = 0.0;
  double rel_error_pow4s = 0.0;
  /// Variants matching within `match_tol`; the identity is decided iff exactly one.
  std::vector<CTildeVariant> matching;
  double match_tol = 1e-3;
};

CTildeValidation validate_c_tilde(int N, double s, double d, std::vector<double> probe_radii,
                                  const QuadratureSpec& q, double match_tol = 1e-3);

}  // namespace anisofrac
