#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "anisofrac/decomposition.hpp"
#include "anisofrac/field.hpp"

namespace anisofrac {

/// A closed-form test field with known (upper bounds on) sup|u| and sup|d_n u|.
struct Preset {
  std::string name;
  FieldPtr field;
  double sup_u = 0.0;
  double sup_dnu = 0.0;
  /// true when sup_u and sup_dnu are the exact suprema, false for upper bounds.
  bool exact_sups = false;
};

/// (1 - |X_i|^2/d^2)_+^p as a field on R^n.
FieldPtr fractional_bump(const CoordinateDecomposition& decomp, int group, double d, double p);

/// (c + b x_n) times a C^2 cut-off in x_n, flat for |x_n| <= 1.25 d_m kappa.
Preset affine_preset(const CoordinateDecomposition& decomp, const BoxDomain& domain,
                     double c = 0.5, double b = 1.0);

/// x_n^2 times the same cut-off.
Preset quadratic_taper_preset(const CoordinateDecomposition& decomp, const BoxDomain& domain);

/// prod_i (1 - |X_i|^2/r_i^2)_+^k; radii default to the box radii.
Preset separable_bump_preset(const CoordinateDecomposition& decomp, const BoxDomain& domain,
                             int power = 4, std::vector<double> radii = {});

/// (1 - |X_1|^2/d_1^2)_+^{s_1}.
Preset fractional_bump_preset(const CoordinateDecomposition& decomp, const BoxDomain& domain);

Preset make_preset(std::string_view name, const CoordinateDecomposition& decomp,
                   const BoxDomain& domain);

std::vector<std::string> preset_names();

/// max_t |d/dt (1 - t^2/r^2)_+^k|.
double bump_slope_max(int power, double radius);

}  // namespace anisofrac
