#pragma once

#include <span>
#include <vector>

namespace anisofrac {

/// Grouped coordinate system x = (X_1, ..., X_m) of R^n.
///
/// Group indices are 0-based in the C++ API; group m-1 is always the single
/// local variable x_n carrying the classical second derivative with unit
/// weight. Groups 0..m-2 carry an order s_i in (0,1] and a weight a_i >= 0.
class CoordinateDecomposition {
 public:
  /// `dims` has m entries with dims.back() == 1. `orders` and `weights` have
  /// m-1 entries (one per nonlocal group).
  CoordinateDecomposition(std::vector<int> dims, std::vector<double> orders,
                          std::vector<double> weights);

  int groups() const { return static_cast<int>(dims_.size()); }
  int dimension() const { return prefix_.back(); }
  int local_axis() const { return dimension() - 1; }

  int group_dim(int i) const;
  /// First axis of group i, i.e. N'_{i-1}.
  int offset(int i) const;
  /// s_i, with the local group reporting 1.
  double order(int i) const;
  /// a_i, with the local group reporting 1.
  double weight(int i) const;
  bool is_fractional(int i) const { return order(i) < 1.0; }

  /// Euclidean norm of the X_i block of x.
  double group_norm(int i, std::span<const double> x) const;

  /// The increment y^(i): y placed in the X_i slots of an otherwise zero n-vector.
  std::vector<double> embed_increment(int i, std::span<const double> y) const;
  std::vector<double> project_group(int i, std::span<const double> x) const;

  /// Same decomposition with the nonlocal weights replaced.
  CoordinateDecomposition with_weights(std::vector<double> weights) const;

 private:
  void check_group(int i) const;

  std::vector<int> dims_;
  std::vector<int> prefix_;  // prefix_[i] = N'_i, prefix_[0] = 0
  std::vector<double> orders_;
  std::vector<double> weights_;
};

/// Q_{d,kappa} = B_{d_1} x ... x B_{d_{m-1}} x (-kappa d_m, kappa d_m). Open set.
struct BoxDomain {
  std::vector<double> radii;
  double dilation = 1.0;

  void validate(const CoordinateDecomposition& decomp) const;
  bool contains(const CoordinateDecomposition& decomp, std::span<const double> x) const;
  double min_radius() const;
  double max_radius() const;
};

/// A point (X', y, z) of R^{n+1}.
struct ExtendedPoint {
  std::vector<double> x_prime;
  double y = 0.0;
  double z = 0.0;

  /// (X', y, z) laid out as a single (n+1)-vector.
  std::vector<double> packed() const;
  static ExtendedPoint unpack(std::span<const double> p);
};

/// Membership in Q' = {X' in prod B_{d_i}, y in (0, d_m/4), z in (0, d_m/4)}.
bool in_extended_domain(const BoxDomain& domain, const CoordinateDecomposition& decomp,
                        const ExtendedPoint& p);

/// The point (X', t) of R^n.
std::vector<double> with_local(std::span<const double> x_prime, double t);

}  // namespace anisofrac
