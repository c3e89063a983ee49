#include "anisofrac/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace anisofrac {

std::optional<double> box_ray_exit(const Support& box, std::span<const double> x,
                                   std::span<const double> e) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lo = box.lo[k], hi = box.hi[k];
    if (e[k] == 0.0) {
      if (x[k] < lo || x[k] > hi) return 0.0;  // the whole line misses the box
      continue;
    }
    double a = (lo - x[k]) / e[k];
    double b = (hi - x[k]) / e[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (t0 > t1) return 0.0;
  const double r = std::max({t1, -t0, 0.0});
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

ClosedFormField::ClosedFormField(Expr expr, int dimension, std::optional<Support> support,
                                 FieldBounds bounds)
    : expr_(std::move(expr)), n_(dimension), support_(std::move(support)),
      bounds_(std::move(bounds)) {
  if (n_ < 1) throw std::invalid_argument("field dimension must be positive");
  if (expr_.max_axis() >= n_)
    throw std::invalid_argument("expression references axis " +
                                std::to_string(expr_.max_axis()) + " beyond dimension " +
                                std::to_string(n_));
  if (support_ && (static_cast<int>(support_->lo.size()) != n_ ||
                   static_cast<int>(support_->hi.size()) != n_))
    throw std::invalid_argument("support box has the wrong dimension");
  d1_.reserve(n_);
  d2_.reserve(n_);
  // Nodes without higher derivatives leave the corresponding slot empty.
  auto try_diff = [](const std::optional<Expr>& e, int k) -> std::optional<Expr> {
    if (!e) return std::nullopt;
    try {
      return e->diff(k);
    } catch (const std::logic_error&) {
      return std::nullopt;
    }
  };
  for (int k = 0; k < n_; ++k) {
    d1_.push_back(try_diff(expr_, k));
    d2_.push_back(try_diff(d1_.back(), k));
  }
}

std::optional<double> ClosedFormField::partial(int axis, std::span<const double> x) const {
  const auto& d = d1_.at(axis);
  if (!d) return std::nullopt;
  return (*d)(x);
}

std::optional<double> ClosedFormField::second_partial(int axis,
                                                      std::span<const double> x) const {
  const auto& d = d2_.at(axis);
  if (!d) return std::nullopt;
  return (*d)(x);
}

std::optional<double> ClosedFormField::ray_exit_radius(std::span<const double> x,
                                                       std::span<const double> e) const {
  if (!support_) return std::nullopt;
  return box_ray_exit(*support_, x, e);
}

std::optional<double> ClosedFormField::sup_partial_bound(int axis) const {
  if (axis < 0 || axis >= static_cast<int>(bounds_.sup_partial.size())) return std::nullopt;
  return bounds_.sup_partial[axis];
}

GridField::GridField(std::vector<double> lo, std::vector<double> spacing, std::vector<int> counts,
                     std::vector<double> values, FieldPtr exterior)
    : lo_(std::move(lo)), h_(std::move(spacing)), counts_(std::move(counts)),
      values_(std::move(values)), exterior_(std::move(exterior)) {
  const std::size_t n = lo_.size();
  if (n == 0 || h_.size() != n || counts_.size() != n)
    throw std::invalid_argument("grid: lo, spacing and counts must have equal nonzero length");
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (counts_[k] < 2) throw std::invalid_argument("grid: need at least 2 nodes per axis");
    if (!(h_[k] > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
    total *= static_cast<std::size_t>(counts_[k]);
  }
  if (values_.size() != total)
    throw std::invalid_argument("grid: expected " + std::to_string(total) + " values, got " +
                                std::to_string(values_.size()));
  if (exterior_ && exterior_->dimension() != static_cast<int>(n))
    throw std::invalid_argument("grid: exterior extension has the wrong dimension");
  box_.lo = lo_;
  box_.hi.resize(n);
  for (std::size_t k = 0; k < n; ++k) box_.hi[k] = lo_[k] + h_[k] * (counts_[k] - 1);
}

std::vector<double> GridField::node(std::span<const int> index) const {
  std::vector<double> x(lo_.size());
  for (std::size_t k = 0; k < lo_.size(); ++k) x[k] = lo_[k] + h_[k] * index[k];
  return x;
}

double GridField::value(std::span<const double> x) const {
  const std::size_t n = lo_.size();
  for (std::size_t k = 0; k < n; ++k)
    if (x[k] < box_.lo[k] || x[k] > box_.hi[k]) return exterior_ ? exterior_->value(x) : 0.0;

  // Cell index and local coordinate per axis.
  std::vector<int> cell(n);
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = (x[k] - lo_[k]) / h_[k];
    int c = static_cast<int>(std::floor(u));
    c = std::clamp(c, 0, counts_[k] - 2);
    cell[k] = c;
    t[k] = std::clamp(u - c, 0.0, 1.0);
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const bool up = (corner >> k) & 1u;
      w *= up ? t[k] : 1.0 - t[k];
      flat = flat * static_cast<std::size_t>(counts_[k]) + static_cast<std::size_t>(cell[k] + up);
    }
    if (w != 0.0) acc += w * values_[flat];
  }
  return acc;
}

std::optional<double> GridField::ray_exit_radius(std::span<const double> x,
                                                 std::span<const double> e) const {
  const auto box = box_ray_exit(box_, x, e);
  if (!box) return std::nullopt;
  if (!exterior_) return box;
  const auto ext = exterior_->ray_exit_radius(x, e);
  if (!ext) return std::nullopt;
  return std::max(*box, *ext);
}

std::optional<double> GridField::sup_bound() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  if (!exterior_) return m;
  const auto ext = exterior_->sup_bound();
  if (!ext) return std::nullopt;
  return std::max(m, *ext);
}

FunctionField::FunctionField(int dimension, Fn fn, std::optional<Support> support,
                             std::optional<double> sup)
    : n_(dimension), fn_(std::move(fn)), support_(std::move(support)), sup_(sup) {
  if (n_ < 1) throw std::invalid_argument("field dimension must be positive");
}

std::optional<double> FunctionField::ray_exit_radius(std::span<const double> x,
                                                     std::span<const double> e) const {
  if (!support_) return std::nullopt;
  return box_ray_exit(*support_, x, e);
}

FieldPtr make_closed_form(Expr expr, int dimension, std::optional<Support> support,
                          FieldBounds bounds) {
  return std::make_shared<ClosedFormField>(std::move(expr), dimension, std::move(support),
                                           std::move(bounds));
}

namespace {

std::optional<Support> combine_support(double alpha, double beta,
                                       const std::optional<Support>& su,
                                       const std::optional<Support>& sv) {
  if (!su || !sv) return std::nullopt;
  Support s;
  s.lo.resize(su->lo.size());
  s.hi.resize(su->hi.size());
  for (std::size_t k = 0; k < s.lo.size(); ++k) {
    s.lo[k] = std::min(su->lo[k], sv->lo[k]);
    s.hi[k] = std::max(su->hi[k], sv->hi[k]);
  }
  s.exterior = alpha * su->exterior + beta * sv->exterior;
  return s;
}

class Combination final : public ScalarField {
 public:
  Combination(double alpha, FieldPtr u, double beta, FieldPtr v)
      : alpha_(alpha), beta_(beta), u_(std::move(u)), v_(std::move(v)) {}

  int dimension() const override { return u_->dimension(); }
  double value(std::span<const double> x) const override {
    return alpha_ * u_->value(x) + beta_ * v_->value(x);
  }
  std::optional<double> partial(int axis, std::span<const double> x) const override {
    const auto a = u_->partial(axis, x);
    const auto b = v_->partial(axis, x);
    if (!a || !b) return std::nullopt;
    return alpha_ * *a + beta_ * *b;
  }
  std::optional<double> second_partial(int axis, std::span<const double> x) const override {
    const auto a = u_->second_partial(axis, x);
    const auto b = v_->second_partial(axis, x);
    if (!a || !b) return std::nullopt;
    return alpha_ * *a + beta_ * *b;
  }
  std::optional<double> ray_exit_radius(std::span<const double> x,
                                        std::span<const double> e) const override {
    const auto a = u_->ray_exit_radius(x, e);
    const auto b = v_->ray_exit_radius(x, e);
    if (!a || !b) return std::nullopt;
    return std::max(*a, *b);
  }
  std::optional<double> sup_bound() const override {
    const auto a = u_->sup_bound();
    const auto b = v_->sup_bound();
    if (!a || !b) return std::nullopt;
    return std::abs(alpha_) * *a + std::abs(beta_) * *b;
  }

 private:
  double alpha_, beta_;
  FieldPtr u_, v_;
};

}  // namespace

FieldPtr linear_combination(double alpha, const FieldPtr& u, double beta, const FieldPtr& v) {
  if (u->dimension() != v->dimension())
    throw std::invalid_argument("linear_combination: dimension mismatch");
  const auto* cu = dynamic_cast<const ClosedFormField*>(u.get());
  const auto* cv = dynamic_cast<const ClosedFormField*>(v.get());
  if (cu && cv) {
    FieldBounds b;
    if (cu->bounds().sup && cv->bounds().sup)
      b.sup = std::abs(alpha) * *cu->bounds().sup + std::abs(beta) * *cv->bounds().sup;
    return make_closed_form(Expr(alpha) * cu->expr() + Expr(beta) * cv->expr(), u->dimension(),
                            combine_support(alpha, beta, cu->support(), cv->support()), b);
  }
  return std::make_shared<Combination>(alpha, u, beta, v);
}

}  // namespace anisofrac

namespace anisofrac {

FieldPtr scaled(const FieldPtr& u, double alpha) {
  if (const auto* cu = dynamic_cast<const ClosedFormField*>(u.get())) {
    FieldBounds b = cu->bounds();
    if (b.sup) *b.sup *= std::abs(alpha);
    for (auto& p : b.sup_partial)
      if (p) *p *= std::abs(alpha);
    std::optional<Support> s = cu->support();
    if (s) s->exterior *= alpha;
    return make_closed_form(Expr(alpha) * cu->expr(), u->dimension(), s, b);
  }
  return std::make_shared<Combination>(alpha, u, 0.0, u);
}

}  // namespace anisofrac
