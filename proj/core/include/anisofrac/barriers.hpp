#pragma once

#include <cstdint>

#include "anisofrac/constants.hpp"
#include "anisofrac/decomposition.hpp"
#include "anisofrac/field.hpp"
#include "anisofrac/quadrature.hpp"
#include "anisofrac/report.hpp"

namespace anisofrac {

/// phi(X', y, z) = 1/4 [u(X', y+ + z+) - u(X', y+ - z+) - u(X', -y+ + z+) + u(X', -y+ - z+)]
/// on R^{n+1}, laid out as (X', y, z).
class BarrierPhi final : public ScalarField {
 public:
  explicit BarrierPhi(FieldPtr u);

  int dimension() const override { return n_ + 1; }
  double value(std::span<const double> p) const override;
  std::optional<double> second_partial(int axis, std::span<const double> p) const override;
  std::optional<double> ray_exit_radius(std::span<const double> p,
                                        std::span<const double> e) const override;
  std::optional<double> sup_bound() const override { return u_->sup_bound(); }

  const FieldPtr& base() const { return u_; }

 private:
  FieldPtr u_;
  int n_;
};

/// sum_{i<m} A_i (1 - (1 - |X_i|^2/d_i^2)_+^{s_i}) + 4 sup_dnu y+ z+ / d_m
///   + kappa y+ z+ |log(2 d_m / (y+ + z+))|,  A_i = sup_u / (1 - (3/4)^{s_i}).
class BarrierPsi final : public ScalarField {
 public:
  BarrierPsi(const CoordinateDecomposition& decomp, const BoxDomain& domain, double sup_u,
             double sup_dnu, double kappa);

  int dimension() const override { return n_ + 1; }
  double value(std::span<const double> p) const override;
  std::optional<double> second_partial(int axis, std::span<const double> p) const override;
  std::optional<double> ray_exit_radius(std::span<const double> p,
                                        std::span<const double> e) const override;

  double sup_u() const { return sup_u_; }
  double sup_dnu() const { return sup_dnu_; }
  double kappa() const { return kappa_; }
  /// The X' sum alone.
  double group_part(std::span<const double> p) const;

 private:
  CoordinateDecomposition decomp_;
  std::vector<double> radii_;
  double dm_;
  double sup_u_, sup_dnu_, kappa_;
  int n_;
  FieldPtr x_part_;
};

/// h(t) = t / (1+t)^2.
double h_ratio(double t);
/// y z log(2 d / (y+z)).
double yz_log(double y, double z, double d);
/// (d_y^2 + d_z^2) of yz_log, i.e. -2 + 2yz/(y+z)^2.
double yz_log_laplacian(double y, double z);

struct BarrierOptions {
  std::uint64_t seed = 1;
  int threads = 1;
  int identity_probes = 50;
  int lipschitz_samples = 1000;
  int psi_probes = 200;
  int exterior_samples = 500;
  int hessian_points = 100;
  double hessian_step = 1e-4;
  double hessian_tol = 1e-6;
  double h_scan_step = 1e-4;
  double h_scan_max = 100.0;
  QuadratureSpec quad;
};

/// Field data shared by both lemmas.
struct BarrierInput {
  FieldPtr u;
  double sup_u = 0.0;
  double sup_dnu = 0.0;
  /// Upper estimate of ||Lu||_{L^inf(Q_d)}.
  double sup_Lu = 0.0;
};

/// Checks the four properties of phi: the L phi identity, ||L phi|| <= ||Lu||,
/// vanishing and symmetry, and the Lipschitz bound.
CheckSuite check_phi_lemma(const BarrierInput& in, const CoordinateDecomposition& decomp,
                           const BoxDomain& domain, const BarrierOptions& opt);

/// Checks psi +- phi >= 0 on P_1..P_5, the supersolution inequality inside Q'
/// (as stated and with the reverse orientation), the Hessian-trace identity
/// and sup h = h(1).
CheckSuite check_psi_supersolution(const BarrierInput& in, const CoordinateDecomposition& decomp,
                                   const BoxDomain& domain, const EstimateParameters& kappa,
                                   const BarrierOptions& opt);

}  // namespace anisofrac
