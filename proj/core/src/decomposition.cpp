#include "anisofrac/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace anisofrac {

CoordinateDecomposition::CoordinateDecomposition(std::vector<int> dims,
                                                 std::vector<double> orders,
                                                 std::vector<double> weights)
    : dims_(std::move(dims)), orders_(std::move(orders)), weights_(std::move(weights)) {
  if (dims_.empty()) throw std::invalid_argument("decomposition needs at least one group");
  if (dims_.back() != 1)
    throw std::invalid_argument("the last (local) group must have dimension 1");
  const std::size_t nonlocal = dims_.size() - 1;
  if (orders_.size() != nonlocal)
    throw std::invalid_argument("expected " + std::to_string(nonlocal) + " orders, got " +
                                std::to_string(orders_.size()));
  if (weights_.size() != nonlocal)
    throw std::invalid_argument("expected " + std::to_string(nonlocal) + " weights, got " +
                                std::to_string(weights_.size()));
  prefix_.assign(dims_.size() + 1, 0);
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 1) throw std::invalid_argument("group dimensions must be positive");
    prefix_[i + 1] = prefix_[i] + dims_[i];
  }
  for (std::size_t i = 0; i < nonlocal; ++i) {
    if (!(orders_[i] > 0.0 && orders_[i] <= 1.0))
      throw std::invalid_argument("group " + std::to_string(i + 1) + ": s must lie in (0,1]");
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
      throw std::invalid_argument("group " + std::to_string(i + 1) + ": a must be >= 0");
  }
}

void CoordinateDecomposition::check_group(int i) const {
  if (i < 0 || i >= groups())
    throw std::out_of_range("group index " + std::to_string(i) + " out of range [0," +
                            std::to_string(groups()) + ")");
}

int CoordinateDecomposition::group_dim(int i) const {
  check_group(i);
  return dims_[i];
}

int CoordinateDecomposition::offset(int i) const {
  check_group(i);
  return prefix_[i];
}

double CoordinateDecomposition::order(int i) const {
  check_group(i);
  return i == groups() - 1 ? 1.0 : orders_[i];
}

double CoordinateDecomposition::weight(int i) const {
  check_group(i);
  return i == groups() - 1 ? 1.0 : weights_[i];
}

double CoordinateDecomposition::group_norm(int i, std::span<const double> x) const {
  check_group(i);
  double acc = 0.0;
  for (int k = prefix_[i]; k < prefix_[i + 1]; ++k) acc += x[k] * x[k];
  return std::sqrt(acc);
}

std::vector<double> CoordinateDecomposition::embed_increment(int i,
                                                             std::span<const double> y) const {
  check_group(i);
  if (static_cast<int>(y.size()) != dims_[i])
    throw std::invalid_argument("increment has length " + std::to_string(y.size()) +
                                ", group " + std::to_string(i) + " has dimension " +
                                std::to_string(dims_[i]));
  std::vector<double> out(dimension(), 0.0);
  std::copy(y.begin(), y.end(), out.begin() + prefix_[i]);
  return out;
}

std::vector<double> CoordinateDecomposition::project_group(int i,
                                                           std::span<const double> x) const {
  check_group(i);
  if (static_cast<int>(x.size()) != dimension())
    throw std::invalid_argument("point has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(dimension()));
  return {x.begin() + prefix_[i], x.begin() + prefix_[i + 1]};
}

CoordinateDecomposition CoordinateDecomposition::with_weights(std::vector<double> weights) const {
  return CoordinateDecomposition(dims_, orders_, std::move(weights));
}

void BoxDomain::validate(const CoordinateDecomposition& decomp) const {
  if (static_cast<int>(radii.size()) != decomp.groups())
    throw std::invalid_argument("expected " + std::to_string(decomp.groups()) + " radii, got " +
                                std::to_string(radii.size()));
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("radii must be positive");
  if (!(dilation > 0.0)) throw std::invalid_argument("dilation must be positive");
}

bool BoxDomain::contains(const CoordinateDecomposition& decomp,
                         std::span<const double> x) const {
  const int m = decomp.groups();
  for (int i = 0; i + 1 < m; ++i)
    if (!(decomp.group_norm(i, x) < radii[i])) return false;
  return std::abs(x[decomp.local_axis()]) < dilation * radii[m - 1];
}

double BoxDomain::min_radius() const { return *std::min_element(radii.begin(), radii.end()); }
double BoxDomain::max_radius() const { return *std::max_element(radii.begin(), radii.end()); }

std::vector<double> ExtendedPoint::packed() const {
  std::vector<double> p(x_prime);
  p.push_back(y);
  p.push_back(z);
  return p;
}

ExtendedPoint ExtendedPoint::unpack(std::span<const double> p) {
  if (p.size() < 2) throw std::invalid_argument("extended point needs at least (y, z)");
  ExtendedPoint e;
  e.x_prime.assign(p.begin(), p.end() - 2);
  e.y = p[p.size() - 2];
  e.z = p[p.size() - 1];
  return e;
}

bool in_extended_domain(const BoxDomain& domain, const CoordinateDecomposition& decomp,
                        const ExtendedPoint& p) {
  const int m = decomp.groups();
  if (static_cast<int>(p.x_prime.size()) != decomp.dimension() - 1)
    throw std::invalid_argument("extended point has the wrong X' length");
  const std::vector<double> x = with_local(p.x_prime, 0.0);
  for (int i = 0; i + 1 < m; ++i)
    if (!(decomp.group_norm(i, x) < domain.radii[i])) return false;
  const double quarter = domain.radii[m - 1] / 4.0;
  return p.y > 0.0 && p.y < quarter && p.z > 0.0 && p.z < quarter;
}

std::vector<double> with_local(std::span<const double> x_prime, double t) {
  std::vector<double> x(x_prime.begin(), x_prime.end());
  x.push_back(t);
  return x;
}

}  // namespace anisofrac
