#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>

namespace anisofrac {

/// Immutable closed-form expression over the coordinates x_0, ..., x_{n-1}.
///
/// Supports symbolic differentiation and substitution, so fields built from
/// expressions carry exact partial derivatives and exact shifted copies.
class Expr {
 public:
  class Node;
  using NodePtr = std::shared_ptr<const Node>;

  Expr(double constant);  // NOLINT(google-explicit-constructor)
  explicit Expr(NodePtr node) : node_(std::move(node)) {}

  static Expr coord(int axis);

  double operator()(std::span<const double> x) const;
  Expr diff(int axis) const;
  /// Replace x_axis by `by` everywhere.
  Expr substitute(int axis, const Expr& by) const;

  std::optional<double> constant() const;
  /// Largest referenced axis, -1 for a constant.
  int max_axis() const;
  std::string str() const;

  const NodePtr& node() const { return node_; }

 private:
  NodePtr node_;
};

class Expr::Node {
 public:
  virtual ~Node() = default;
  virtual double eval(std::span<const double> x) const = 0;
  virtual Expr diff(int axis) const = 0;
  virtual Expr substitute(int axis, const Expr& by) const = 0;
  virtual int max_axis() const = 0;
  virtual std::string str() const = 0;
  virtual std::optional<double> constant() const { return std::nullopt; }
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// (base)_+^p = max(base, 0)^p, with (base)_+^0 the indicator of {base > 0}.
/// Negative p give base^p on {base > 0} and 0 elsewhere (derivatives of fractional powers).
Expr pow_pos(const Expr& base, double p);
/// base^k for integer k >= 0.
Expr ipow(const Expr& base, int k);
Expr exp(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
/// C^2 quintic cut-off of r = sqrt(q): 1 for r <= lo, 0 for r >= hi.
/// Differentiable twice in the coordinates.
Expr radial_taper(const Expr& q, double lo, double hi);

/// Sum of squares of x_first .. x_{first+count-1}.
Expr squared_norm(int first, int count);

}  // namespace anisofrac
