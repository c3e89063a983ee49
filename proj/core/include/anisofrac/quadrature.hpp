#pragma once

#include <cmath>
#include <functional>
#include <span>

#include "anisofrac/field.hpp"

namespace anisofrac {

/// A computed value with an (absolute) error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;

  Estimate& operator+=(const Estimate& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
  friend Estimate operator+(Estimate a, const Estimate& b) { return a += b; }
  friend Estimate operator-(Estimate a, const Estimate& b) {
    a.value -= b.value;
    a.error += b.error;
    return a;
  }
  friend Estimate operator*(double k, Estimate a) {
    a.value *= k;
    a.error *= std::abs(k);
    return a;
  }
};

enum class TailMode {
  analytic,  ///< closed-form tail beyond the field's exit radius; numeric if unknown
  numeric,   ///< always integrate the tail numerically from far_cutoff
};

/// Discretization of the radial/angular integrals behind the sectional operators.
///
/// Each ray integral is split into an inner stub [0, inner_radius] (second
/// difference Taylor model), a near field [inner_radius, near_radius]
/// (Gauss-Kronrod in w = r^{2-2s}), a mid field [near_radius, R] and a tail.
/// `radial_nodes` sets the initial node budget of the near and mid fields
/// (panels of 15 Kronrod nodes), refined adaptively up to `max_intervals`.
/// `angular_nodes` is the trapezoid count on the half circle (N = 2).
struct QuadratureSpec {
  double inner_radius = 1e-4;
  double near_radius = 0.1;
  double far_cutoff = 4.0;
  int radial_nodes = 256;
  int angular_nodes = 64;
  TailMode tail_mode = TailMode::analytic;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
  /// Step of central differences for fields without exact derivatives.
  double fd_step = 1e-3;

  /// Defaults scaled to the smallest box radius d.
  static QuadratureSpec for_length_scale(double d);
  void validate() const;
};

/// Global adaptive Gauss-Kronrod (7/15) on [a, b].
Estimate integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, double rel_tol, int initial_panels,
                            int max_intervals);

/// int_0^inf [2u(x) - u(x+re) - u(x-re)] r^{-1-2s} dr for s in (0,1).
Estimate ray_second_difference_integral(const ScalarField& u, std::span<const double> x,
                                        std::span<const double> e, double s,
                                        const QuadratureSpec& q);

/// int_rho^inf [u(x+re) + u(x-re)] r^{-1-2s} dr.
Estimate ray_tail_integral(const ScalarField& u, std::span<const double> x,
                           std::span<const double> e, double s, double rho,
                           const QuadratureSpec& q);

/// Integral over S^{N-1} of a direction function I with I(e) = I(-e). Unit
/// directions are embedded at axes [offset, offset+N) of an n-vector. N in {1, 2}.
Estimate integrate_directions(int n, int offset, int N, int angular_nodes,
                              const std::function<Estimate(std::span<const double>)>& ray);

}  // namespace anisofrac
