#include "anisofrac/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

namespace anisofrac {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b, value, error;
  bool converged;
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0, l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err, &l1);
  const double floor = 50.0 * kEps * l1;
  const bool converged = err <= floor ||
                         (b - a) <= 64.0 * kEps * std::max(std::abs(a), std::abs(b)) ||
                         (b - a) <= 1e3 * std::numeric_limits<double>::min();
  return {a, b, v, std::max(err, floor), converged};
}

struct ByError {
  bool operator()(const Panel& p, const Panel& q) const { return p.error < q.error; }
};

// Evaluate u(x + t e) with a reusable buffer.
class RayProbe {
 public:
  RayProbe(const ScalarField& u, std::span<const double> x, std::span<const double> e)
      : u_(u), x_(x), e_(e), buf_(x.size()) {}
  double at(double t) {
    for (std::size_t k = 0; k < x_.size(); ++k) buf_[k] = x_[k] + t * e_[k];
    const double v = u_.value(buf_);
    if (!std::isfinite(v)) throw std::domain_error("field is not finite along a quadrature ray");
    return v;
  }

 private:
  const ScalarField& u_;
  std::span<const double> x_, e_;
  std::vector<double> buf_;
};

int panels_for(int nodes) { return std::max(1, nodes / 15); }

// Radius beyond which the ray integrand is constant, or empty for a numeric tail.
std::optional<double> analytic_tail_start(const ScalarField& u, std::span<const double> x,
                                          std::span<const double> e, const QuadratureSpec& q) {
  if (q.tail_mode != TailMode::analytic) return std::nullopt;
  return u.ray_exit_radius(x, e);
}

}  // namespace

QuadratureSpec QuadratureSpec::for_length_scale(double d) {
  if (!(d > 0.0)) throw std::invalid_argument("quadrature length scale must be positive");
  QuadratureSpec q;
  q.inner_radius = 1e-4 * d;
  q.near_radius = 0.1 * d;
  q.far_cutoff = 4.0 * d;
  q.fd_step = 1e-3 * d;
  return q;
}

void QuadratureSpec::validate() const {
  if (!(inner_radius > 0.0 && near_radius > inner_radius))
    throw std::invalid_argument("quadrature: need 0 < inner_radius < near_radius");
  if (!(far_cutoff > near_radius))
    throw std::invalid_argument("quadrature: need far_cutoff > near_radius");
  if (radial_nodes < 4 || angular_nodes < 4)
    throw std::invalid_argument("quadrature: node counts must be >= 4");
  if (!(rel_tol > 0.0) || max_intervals < 1 || !(fd_step > 0.0))
    throw std::invalid_argument("quadrature: invalid tolerance settings");
}

Estimate integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, double rel_tol, int initial_panels,
                            int max_intervals) {
  if (!(b > a)) return {};
  std::priority_queue<Panel, std::vector<Panel>, ByError> open;
  std::vector<Panel> done;
  const int p0 = std::max(1, initial_panels);
  const double w = (b - a) / p0;
  double total = 0.0, error = 0.0;
  for (int i = 0; i < p0; ++i) {
    const double lo = a + w * i;
    const double hi = i + 1 == p0 ? b : a + w * (i + 1);
    Panel p = eval_panel(f, lo, hi);
    total += p.value;
    error += p.error;
    (p.converged ? done.push_back(p) : open.push(p));
  }
  int count = p0;
  while (!open.empty() && count < max_intervals &&
         error > std::max(abs_tol, rel_tol * std::abs(total))) {
    const Panel worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = eval_panel(f, worst.a, mid);
    const Panel right = eval_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    for (const Panel& p : {left, right}) (p.converged ? done.push_back(p) : open.push(p));
    ++count;
  }
  while (!open.empty()) {
    done.push_back(open.top());
    open.pop();
  }
  // Deterministic final sum, ordered by position.
  std::sort(done.begin(), done.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
  Estimate out;
  for (const Panel& p : done) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

Estimate ray_second_difference_integral(const ScalarField& u, std::span<const double> x,
                                        std::span<const double> e, double s,
                                        const QuadratureSpec& q) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("ray integral: s must lie in (0,1)");
  RayProbe probe(u, x, e);
  const double u0 = probe.at(0.0);
  auto F = [&](double r) { return 2.0 * u0 - probe.at(r) - probe.at(-r); };

  const double eps = q.inner_radius;
  const double r0 = q.near_radius;
  const double p = 2.0 - 2.0 * s;
  const double scale =
      std::max({std::abs(u0), std::abs(probe.at(r0)), std::abs(probe.at(-r0)), 1e-300}) *
      std::pow(r0, -2.0 * s);
  const double abs_tol = q.rel_tol * scale;

  Estimate out;

  // Inner stub: F(r) = F(eps) r^2/eps^2 + O(r^4).
  {
    const double q1 = F(eps) / (eps * eps);
    const double q2 = F(2.0 * eps) / (4.0 * eps * eps);
    const double mass = std::pow(eps, p) / p;
    const double roundoff = 8.0 * kEps * std::max(std::abs(u0), 1e-300) / (eps * eps);
    out += Estimate{q1 * mass, (std::abs(q1 - q2) + roundoff) * mass};
  }

  // Near field in w = r^{2-2s}: int F r^{-1-2s} dr = (1/p) int F(r)/r^2 dw.
  {
    const double w_lo = std::pow(eps, p), w_hi = std::pow(r0, p);
    auto g = [&](double wv) {
      const double r = std::pow(wv, 1.0 / p);
      return F(r) / (r * r * p);
    };
    out += integrate_adaptive(g, w_lo, w_hi, abs_tol, q.rel_tol, panels_for(q.radial_nodes),
                              q.max_intervals);
  }

  const auto exit = analytic_tail_start(u, x, e, q);
  const double R = exit ? std::max(r0, *exit) : std::max(r0, q.far_cutoff);
  auto kernel_f = [&](double r) { return F(r) * std::pow(r, -1.0 - 2.0 * s); };
  if (R > r0)
    out += integrate_adaptive(kernel_f, r0, R, abs_tol, q.rel_tol, panels_for(q.radial_nodes),
                              q.max_intervals);

  if (exit) {
    // F is constant on [R, inf).
    out += Estimate{F(R) * std::pow(R, -2.0 * s) / (2.0 * s), 0.0};
  } else {
    // r = R v^{-1/(2s)}: int_R^inf F r^{-1-2s} dr = R^{-2s}/(2s) int_0^1 F(r(v)) dv.
    auto h = [&](double v) {
      if (v <= 0.0) v = std::numeric_limits<double>::min();
      return F(R * std::pow(v, -1.0 / (2.0 * s)));
    };
    const double pref = std::pow(R, -2.0 * s) / (2.0 * s);
    out += pref * integrate_adaptive(h, 0.0, 1.0, abs_tol / pref, q.rel_tol, 4, q.max_intervals);
  }
  return out;
}

Estimate ray_tail_integral(const ScalarField& u, std::span<const double> x,
                           std::span<const double> e, double s, double rho,
                           const QuadratureSpec& q) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("ray integral: s must lie in (0,1)");
  if (!(rho > 0.0)) throw std::invalid_argument("ray tail integral: rho must be positive");
  RayProbe probe(u, x, e);
  auto G = [&](double r) { return probe.at(r) + probe.at(-r); };
  const double scale =
      std::max({std::abs(G(rho)), std::abs(probe.at(0.0)), 1e-300}) * std::pow(rho, -2.0 * s);
  const double abs_tol = q.rel_tol * scale;

  Estimate out;
  const auto exit = analytic_tail_start(u, x, e, q);
  const double R = exit ? std::max(rho, *exit) : std::max(rho, q.far_cutoff);
  if (R > rho) {
    auto f = [&](double r) { return G(r) * std::pow(r, -1.0 - 2.0 * s); };
    out += integrate_adaptive(f, rho, R, abs_tol, q.rel_tol, panels_for(q.radial_nodes),
                              q.max_intervals);
  }
  if (exit) {
    out += Estimate{G(R) * std::pow(R, -2.0 * s) / (2.0 * s), 0.0};
  } else {
    auto h = [&](double v) {
      if (v <= 0.0) v = std::numeric_limits<double>::min();
      return G(R * std::pow(v, -1.0 / (2.0 * s)));
    };
    const double pref = std::pow(R, -2.0 * s) / (2.0 * s);
    out += pref * integrate_adaptive(h, 0.0, 1.0, abs_tol / pref, q.rel_tol, 4, q.max_intervals);
  }
  return out;
}

Estimate integrate_directions(int n, int offset, int N, int angular_nodes,
                              const std::function<Estimate(std::span<const double>)>& ray) {
  std::vector<double> e(n, 0.0);
  if (N == 1) {
    e[offset] = 1.0;
    return 2.0 * ray(e);
  }
  if (N != 2)
    throw std::invalid_argument("sectional quadrature supports group dimensions 1 and 2, got " +
                                std::to_string(N));
  // Trapezoid on [0, pi) for the pi-periodic I; the even-index subset gives
  // the half-resolution rule used for the error.
  const int M = angular_nodes + (angular_nodes % 2);
  double full = 0.0, half = 0.0, ray_err = 0.0;
  for (int k = 0; k < M; ++k) {
    const double theta = std::numbers::pi * k / M;
    e[offset] = std::cos(theta);
    e[offset + 1] = std::sin(theta);
    const Estimate I = ray(e);
    full += I.value;
    if (k % 2 == 0) half += I.value;
    ray_err += I.error;
  }
  const double h = std::numbers::pi / M;
  const double t_full = h * full;
  const double t_half = 2.0 * h * half;
  return Estimate{2.0 * t_full, 2.0 * (std::abs(t_full - t_half) + h * ray_err)};
}

}  // namespace anisofrac
