#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anisofrac/constants.hpp"
#include "anisofrac/decomposition.hpp"
#include "anisofrac/field.hpp"
#include "anisofrac/quadrature.hpp"
#include "anisofrac/report.hpp"

namespace anisofrac {

/// A field on R^n with its sup norms, over a problem geometry.
struct Instance {
  std::string label;
  CoordinateDecomposition decomp;
  BoxDomain domain;
  FieldPtr u;
  double sup_u = 0.0;
  double sup_dnu = 0.0;
  std::string provenance = "manufactured";
};

/// Upper estimate of sup |Lu| over Q_d from cell-centred samples:
/// sampled max + largest quadrature error + largest neighbour difference.
struct SupEstimate {
  double value = 0.0;
  double sampled_max = 0.0;
  double quadrature_error = 0.0;
  double neighbor_gap = 0.0;
  std::vector<double> argmax;
  std::size_t samples = 0;
};

SupEstimate estimate_sup_Lu(const ScalarField& u, const CoordinateDecomposition& decomp,
                            const BoxDomain& domain, int per_axis, const QuadratureSpec& q,
                            int threads = 1);

/// Decides the c~ convention by quadrature of the fractional-bump identity for
/// every fractional (N_i, s_i) of the decomposition. Throws when the groups
/// disagree or no variant matches. Results are cached per (N, s).
CTildeVariant select_c_tilde_variant(const CoordinateDecomposition& decomp);

/// Values of d_axis u with an error estimate: exact partials when present,
/// otherwise Richardson-corrected central differences with step h.
Estimate partial_derivative(const ScalarField& u, int axis, std::span<const double> x, double h);

struct TheoremOptions {
  std::vector<double> ys;  ///< defaults to 20 log-spaced points in [1e-3, 0.24] d_m
  int sup_samples_per_axis = 36;
  QuadratureSpec quad;
  int threads = 1;
  std::optional<CTildeVariant> variant;
};

struct TheoremResult {
  CheckReport report;
  EstimateParameters kappa;
  SupEstimate sup_Lu;
};

/// |d_n u(0, y) - d_n u(0, -y)| <= 8 sup_dnu |y| / d_m + 2 kappa |y| log(2 d_m / |y|).
TheoremResult verify_theorem_main(const Instance& inst, const TheoremOptions& opt);

std::vector<double> log_spaced(double lo, double hi, int count);

/// u^(tau)(x) = (u(x + tau e_n) - u(x)) / tau.
FieldPtr difference_quotient(const FieldPtr& u, int local_axis, double tau);

/// Partial derivative d_axis u as a field (exact for closed forms).
FieldPtr derivative_field(const FieldPtr& u, int axis, double h = 1e-5);

struct HolderEstimate {
  double seminorm = 0.0;
  double sup = 0.0;
  double norm() const { return seminorm + sup; }
  std::vector<double> x, x2;  ///< pair attaining the seminorm
  std::size_t pairs = 0;
};

/// Sampled sup_{x != x'} |g(x) - g(x')| / |x - x'|^alpha over Q (half uniform
/// pairs, half at distances h 2^k), and sampled sup |g|.
HolderEstimate holder_seminorm(const ScalarField& g, double alpha,
                               const CoordinateDecomposition& decomp, const BoxDomain& region,
                               std::size_t sample_pairs, std::uint64_t seed, int levels = 16);

struct CorollaryOptions {
  double alpha = 0.5;
  /// Per level r: sup grid base_grid 2^r per axis, pairs base_pairs 2^r.
  int levels = 3;
  int base_grid = 8;
  std::size_t base_pairs = 25000;
  std::uint64_t seed = 1;
  QuadratureSpec quad;
  int threads = 1;
  double max_variation = 0.2;
};

struct CorollaryLevel {
  int level = 0;
  double holder_norm = 0.0;
  double sup_f = 0.0;
  double sup_u = 0.0;
  double ratio = 0.0;
};

struct CorollaryInstanceResult {
  std::string label;
  std::vector<CorollaryLevel> levels;
  double variation = 0.0;  ///< |rho_L - rho_{L-1}| / rho_L over the two finest levels
};

/// rho = ||d_n u||_{C^alpha(Q_{d/2})} / (||f||_{L^inf(Q_d)} + ||u||_{L^inf}) across resolutions.
struct CorollaryResult {
  CheckReport report;
  std::vector<CorollaryInstanceResult> instances;
};

CorollaryResult probe_corollary_here(const std::vector<Instance>& family,
                                     const CorollaryOptions& opt);

/// Compute one rho at a given level (exposed for the scaling check).
CorollaryLevel corollary_ratio(const Instance& inst, int level, const CorollaryOptions& opt);

/// tau(x) = prod_i tau_0(|X_i|) with tau_0 = 1 on [0, 3/4], 0 on [4/5, inf).
struct CutoffField {
  FieldPtr base;
  FieldPtr tau;
  FieldPtr v;         ///< tau u
  FieldPtr remainder; ///< (1 - tau) u
};

CutoffField make_cutoff(const FieldPtr& u, const CoordinateDecomposition& decomp);

/// One-sided tail g_i(x) = int_{|y| >= 1/10} (1 - tau) u(x + y^(i)) |y|^{-N_i - 2 s_i} dy.
Estimate tail_term(const CutoffField& c, const CoordinateDecomposition& decomp, int group,
                   std::span<const double> x, const QuadratureSpec& q);

/// int_{|y| >= 1/10} |y|^{-N-2s} dy.
double tail_constant(int N, double s);

/// Both sides of Lv = f + sum_i b_i g_i at one x in Q_{1/2}; throws outside it.
struct LocalizationPoint {
  std::vector<double> x;
  Estimate Lv;
  Estimate f;
  std::vector<Estimate> g;  ///< one per nonlocal group, zero for classical groups
  double rhs(const CoordinateDecomposition& decomp, double b_factor) const;
  double rhs_error(const CoordinateDecomposition& decomp, double b_factor) const;
};

LocalizationPoint evaluate_localization(const Instance& inst, const CutoffField& c,
                                        std::span<const double> x, const QuadratureSpec& q);

struct LocalizeOptions {
  int points = 10;
  std::uint64_t seed = 1;
  QuadratureSpec quad;
  int threads = 1;
};

struct LocalizeResult {
  CutoffField cutoff;
  CheckSuite suite;
};

/// Lv = f + sum_i b_i g_i on B_{1/2}, checked with b_i = a_i c_i and b_i = 2 a_i c_i,
/// and |g_i| <= C ||u||.
LocalizeResult localize(const Instance& inst, const LocalizeOptions& opt);

}  // namespace anisofrac
