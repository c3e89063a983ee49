#include "anisofrac/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anisofrac {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class Constant final : public Expr::Node {
 public:
  explicit Constant(double v) : v_(v) {}
  double eval(std::span<const double>) const override { return v_; }
  Expr diff(int) const override { return Expr(0.0); }
  Expr substitute(int, const Expr&) const override { return Expr(v_); }
  int max_axis() const override { return -1; }
  std::string str() const override { return fmt(v_); }
  std::optional<double> constant() const override { return v_; }

 private:
  double v_;
};

class Coordinate final : public Expr::Node {
 public:
  explicit Coordinate(int axis) : axis_(axis) {}
  double eval(std::span<const double> x) const override { return x[axis_]; }
  Expr diff(int axis) const override { return Expr(axis == axis_ ? 1.0 : 0.0); }
  Expr substitute(int axis, const Expr& by) const override {
    return axis == axis_ ? by : Expr::coord(axis_);
  }
  int max_axis() const override { return axis_; }
  std::string str() const override { return "x" + std::to_string(axis_); }

 private:
  int axis_;
};

class Sum final : public Expr::Node {
 public:
  Sum(Expr a, Expr b) : a_(std::move(a)), b_(std::move(b)) {}
  double eval(std::span<const double> x) const override { return a_(x) + b_(x); }
  Expr diff(int axis) const override { return a_.diff(axis) + b_.diff(axis); }
  Expr substitute(int axis, const Expr& by) const override {
    return a_.substitute(axis, by) + b_.substitute(axis, by);
  }
  int max_axis() const override { return std::max(a_.max_axis(), b_.max_axis()); }
  std::string str() const override { return "(" + a_.str() + " + " + b_.str() + ")"; }

 private:
  Expr a_, b_;
};

class Product final : public Expr::Node {
 public:
  Product(Expr a, Expr b) : a_(std::move(a)), b_(std::move(b)) {}
  double eval(std::span<const double> x) const override { return a_(x) * b_(x); }
  Expr diff(int axis) const override {
    return a_.diff(axis) * b_ + a_ * b_.diff(axis);
  }
  Expr substitute(int axis, const Expr& by) const override {
    return a_.substitute(axis, by) * b_.substitute(axis, by);
  }
  int max_axis() const override { return std::max(a_.max_axis(), b_.max_axis()); }
  std::string str() const override { return a_.str() + "*" + b_.str(); }

 private:
  Expr a_, b_;
};

class PowPos final : public Expr::Node {
 public:
  PowPos(Expr base, double p) : base_(std::move(base)), p_(p) {}
  double eval(std::span<const double> x) const override {
    const double v = base_(x);
    if (!(v > 0.0)) return 0.0;
    if (p_ == 0.0) return 1.0;
    if (p_ == 1.0) return v;
    return std::pow(v, p_);
  }
  Expr diff(int axis) const override {
    if (p_ == 0.0) return Expr(0.0);
    return Expr(p_) * pow_pos(base_, p_ - 1.0) * base_.diff(axis);
  }
  Expr substitute(int axis, const Expr& by) const override {
    return pow_pos(base_.substitute(axis, by), p_);
  }
  int max_axis() const override { return base_.max_axis(); }
  std::string str() const override { return "pos(" + base_.str() + ")^" + fmt(p_); }

 private:
  Expr base_;
  double p_;
};

class IntPow final : public Expr::Node {
 public:
  IntPow(Expr base, int k) : base_(std::move(base)), k_(k) {}
  double eval(std::span<const double> x) const override {
    const double v = base_(x);
    double r = 1.0;
    for (int i = 0; i < k_; ++i) r *= v;
    return r;
  }
  Expr diff(int axis) const override {
    return Expr(double(k_)) * ipow(base_, k_ - 1) * base_.diff(axis);
  }
  Expr substitute(int axis, const Expr& by) const override {
    return ipow(base_.substitute(axis, by), k_);
  }
  int max_axis() const override { return base_.max_axis(); }
  std::string str() const override { return "(" + base_.str() + ")^" + std::to_string(k_); }

 private:
  Expr base_;
  int k_;
};

enum class Fn { exp, sin, cos };

class Unary final : public Expr::Node {
 public:
  Unary(Fn fn, Expr a) : fn_(fn), a_(std::move(a)) {}
  double eval(std::span<const double> x) const override {
    const double v = a_(x);
    switch (fn_) {
      case Fn::exp: return std::exp(v);
      case Fn::sin: return std::sin(v);
      case Fn::cos: return std::cos(v);
    }
    return 0.0;
  }
  Expr diff(int axis) const override {
    const Expr da = a_.diff(axis);
    switch (fn_) {
      case Fn::exp: return anisofrac::exp(a_) * da;
      case Fn::sin: return anisofrac::cos(a_) * da;
      case Fn::cos: return -(anisofrac::sin(a_) * da);
    }
    return Expr(0.0);
  }
  Expr substitute(int axis, const Expr& by) const override {
    return Expr(std::make_shared<Unary>(fn_, a_.substitute(axis, by)));
  }
  int max_axis() const override { return a_.max_axis(); }
  std::string str() const override {
    const char* name = fn_ == Fn::exp ? "exp" : fn_ == Fn::sin ? "sin" : "cos";
    return std::string(name) + "(" + a_.str() + ")";
  }

 private:
  Fn fn_;
  Expr a_;
};

// k-th derivative in q of T(sqrt(q)), T the quintic taper profile.
class RadialTaper final : public Expr::Node {
 public:
  RadialTaper(Expr q, double lo, double hi, int order)
      : q_(std::move(q)), lo_(lo), hi_(hi), order_(order) {}

  double eval(std::span<const double> x) const override {
    const double q = q_(x);
    const double r = std::sqrt(std::max(q, 0.0));
    if (r <= lo_) return order_ == 0 ? 1.0 : 0.0;
    if (r >= hi_) return 0.0;
    const double w = hi_ - lo_;
    const double t = (r - lo_) / w;
    const double s0 = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    const double s1 = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    const double s2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    const double T0 = 1.0 - s0;
    const double T1 = -s1 / w;
    const double T2 = -s2 / (w * w);
    switch (order_) {
      case 0: return T0;
      case 1: return T1 / (2.0 * r);
      case 2: return T2 / (4.0 * r * r) - T1 / (4.0 * r * r * r);
      default: break;
    }
    throw std::logic_error("radial_taper: derivatives above order 2 are not available");
  }
  Expr diff(int axis) const override {
    if (order_ >= 2)
      throw std::logic_error("radial_taper: derivatives above order 2 are not available");
    return Expr(std::make_shared<RadialTaper>(q_, lo_, hi_, order_ + 1)) * q_.diff(axis);
  }
  Expr substitute(int axis, const Expr& by) const override {
    return Expr(std::make_shared<RadialTaper>(q_.substitute(axis, by), lo_, hi_, order_));
  }
  int max_axis() const override { return q_.max_axis(); }
  std::string str() const override {
    return "taper" + std::to_string(order_) + "(" + q_.str() + "; " + fmt(lo_) + ", " +
           fmt(hi_) + ")";
  }

 private:
  Expr q_;
  double lo_, hi_;
  int order_;
};

}  // namespace

Expr::Expr(double constant) : node_(std::make_shared<Constant>(constant)) {}

Expr Expr::coord(int axis) {
  if (axis < 0) throw std::invalid_argument("coordinate axis must be >= 0");
  return Expr(std::make_shared<Coordinate>(axis));
}

double Expr::operator()(std::span<const double> x) const { return node_->eval(x); }
Expr Expr::diff(int axis) const { return node_->diff(axis); }
Expr Expr::substitute(int axis, const Expr& by) const { return node_->substitute(axis, by); }
std::optional<double> Expr::constant() const { return node_->constant(); }
int Expr::max_axis() const { return node_->max_axis(); }
std::string Expr::str() const { return node_->str(); }

Expr operator+(const Expr& a, const Expr& b) {
  const auto ca = a.constant();
  const auto cb = b.constant();
  if (ca && cb) return Expr(*ca + *cb);
  if (ca && *ca == 0.0) return b;
  if (cb && *cb == 0.0) return a;
  return Expr(std::make_shared<Sum>(a, b));
}

Expr operator*(const Expr& a, const Expr& b) {
  const auto ca = a.constant();
  const auto cb = b.constant();
  if (ca && cb) return Expr(*ca * *cb);
  if ((ca && *ca == 0.0) || (cb && *cb == 0.0)) return Expr(0.0);
  if (ca && *ca == 1.0) return b;
  if (cb && *cb == 1.0) return a;
  return Expr(std::make_shared<Product>(a, b));
}

Expr operator-(const Expr& a) { return Expr(-1.0) * a; }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr pow_pos(const Expr& base, double p) {
  if (!std::isfinite(p)) throw std::invalid_argument("pow_pos: exponent must be finite");
  if (const auto c = base.constant()) {
    if (!(*c > 0.0)) return Expr(0.0);
    return Expr(p == 0.0 ? 1.0 : std::pow(*c, p));
  }
  return Expr(std::make_shared<PowPos>(base, p));
}

Expr ipow(const Expr& base, int k) {
  if (k < 0) throw std::invalid_argument("ipow: exponent must be >= 0");
  if (k == 0) return Expr(1.0);
  if (k == 1) return base;
  if (const auto c = base.constant()) return Expr(std::pow(*c, k));
  return Expr(std::make_shared<IntPow>(base, k));
}

Expr exp(const Expr& a) {
  if (const auto c = a.constant()) return Expr(std::exp(*c));
  return Expr(std::make_shared<Unary>(Fn::exp, a));
}
Expr sin(const Expr& a) {
  if (const auto c = a.constant()) return Expr(std::sin(*c));
  return Expr(std::make_shared<Unary>(Fn::sin, a));
}
Expr cos(const Expr& a) {
  if (const auto c = a.constant()) return Expr(std::cos(*c));
  return Expr(std::make_shared<Unary>(Fn::cos, a));
}

Expr radial_taper(const Expr& q, double lo, double hi) {
  if (!(lo >= 0.0 && hi > lo)) throw std::invalid_argument("radial_taper: need 0 <= lo < hi");
  return Expr(std::make_shared<RadialTaper>(q, lo, hi, 0));
}

Expr squared_norm(int first, int count) {
  Expr acc(0.0);
  for (int k = first; k < first + count; ++k) acc = acc + ipow(Expr::coord(k), 2);
  return acc;
}

}  // namespace anisofrac
