#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "anisofrac/expr.hpp"

namespace anisofrac {

/// A bounded function on R^n.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual int dimension() const = 0;
  virtual double value(std::span<const double> x) const = 0;

  /// Exact partial derivatives, when the representation has them.
  virtual std::optional<double> partial(int /*axis*/, std::span<const double> /*x*/) const {
    return std::nullopt;
  }
  virtual std::optional<double> second_partial(int /*axis*/,
                                               std::span<const double> /*x*/) const {
    return std::nullopt;
  }

  /// Some R >= 0 such that r -> u(x + r e) and r -> u(x - r e) are both
  /// constant on [R, infinity). Empty when no such radius is known.
  virtual std::optional<double> ray_exit_radius(std::span<const double> /*x*/,
                                                std::span<const double> /*e*/) const {
    return std::nullopt;
  }

  /// Known bounds on sup|u| and sup|d_k u| over R^n.
  virtual std::optional<double> sup_bound() const { return std::nullopt; }
  virtual std::optional<double> sup_partial_bound(int /*axis*/) const { return std::nullopt; }

  double operator()(std::span<const double> x) const { return value(x); }
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Axis-aligned box with the field equal to `exterior` everywhere outside it.
/// Bounds may be infinite.
struct Support {
  std::vector<double> lo;
  std::vector<double> hi;
  double exterior = 0.0;
};

/// Smallest R >= 0 with x +- r e outside the closed box for all r > R.
std::optional<double> box_ray_exit(const Support& box, std::span<const double> x,
                                   std::span<const double> e);

struct FieldBounds {
  std::optional<double> sup;
  std::vector<std::optional<double>> sup_partial;  // indexed by axis, may be short
};

class ClosedFormField final : public ScalarField {
 public:
  ClosedFormField(Expr expr, int dimension, std::optional<Support> support = std::nullopt,
                  FieldBounds bounds = {});

  int dimension() const override { return n_; }
  double value(std::span<const double> x) const override { return expr_(x); }
  std::optional<double> partial(int axis, std::span<const double> x) const override;
  std::optional<double> second_partial(int axis, std::span<const double> x) const override;
  std::optional<double> ray_exit_radius(std::span<const double> x,
                                        std::span<const double> e) const override;
  std::optional<double> sup_bound() const override { return bounds_.sup; }
  std::optional<double> sup_partial_bound(int axis) const override;

  const Expr& expr() const { return expr_; }
  const std::optional<Support>& support() const { return support_; }
  const FieldBounds& bounds() const { return bounds_; }

 private:
  Expr expr_;
  int n_;
  std::optional<Support> support_;
  FieldBounds bounds_;
  std::vector<std::optional<Expr>> d1_, d2_;
};

/// Samples on a uniform tensor grid, multilinear inside the grid box and
/// `exterior` outside it (zero when `exterior` is null).
class GridField final : public ScalarField {
 public:
  /// `values` is row-major with the last axis fastest.
  GridField(std::vector<double> lo, std::vector<double> spacing, std::vector<int> counts,
            std::vector<double> values, FieldPtr exterior = nullptr);

  int dimension() const override { return static_cast<int>(lo_.size()); }
  double value(std::span<const double> x) const override;
  std::optional<double> ray_exit_radius(std::span<const double> x,
                                        std::span<const double> e) const override;
  std::optional<double> sup_bound() const override;

  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& spacing() const { return h_; }
  const std::vector<int>& counts() const { return counts_; }
  const std::vector<double>& values() const { return values_; }
  const FieldPtr& exterior() const { return exterior_; }
  std::vector<double> node(std::span<const int> index) const;

 private:
  std::vector<double> lo_, h_;
  std::vector<int> counts_;
  std::vector<double> values_;
  FieldPtr exterior_;
  Support box_;
};

/// Wraps a callable. Used for derived fields without a closed form.
class FunctionField final : public ScalarField {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  FunctionField(int dimension, Fn fn, std::optional<Support> support = std::nullopt,
                std::optional<double> sup = std::nullopt);

  int dimension() const override { return n_; }
  double value(std::span<const double> x) const override { return fn_(x); }
  std::optional<double> ray_exit_radius(std::span<const double> x,
                                        std::span<const double> e) const override;
  std::optional<double> sup_bound() const override { return sup_; }

 private:
  int n_;
  Fn fn_;
  std::optional<Support> support_;
  std::optional<double> sup_;
};

FieldPtr make_closed_form(Expr expr, int dimension, std::optional<Support> support = std::nullopt,
                          FieldBounds bounds = {});

/// alpha*u + beta*v. Closed forms stay closed forms.
FieldPtr linear_combination(double alpha, const FieldPtr& u, double beta, const FieldPtr& v);

/// alpha*u, with bounds scaled accordingly.
FieldPtr scaled(const FieldPtr& u, double alpha);

}  // namespace anisofrac
