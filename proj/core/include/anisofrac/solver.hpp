#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "anisofrac/decomposition.hpp"
#include "anisofrac/field.hpp"
#include "anisofrac/quadrature.hpp"

namespace anisofrac {

/// Exterior-data Dirichlet problem L u = f in Q_d, u = g outside Q_d, on a
/// uniform lattice with spacing h_k per axis.
struct CollocationProblem {
  CoordinateDecomposition decomp;
  BoxDomain domain;
  FieldPtr rhs;
  FieldPtr exterior;
  /// One spacing per axis; must divide the box diameter along that axis and be
  /// equal across the axes of a group.
  std::vector<double> spacing;
  std::size_t node_cap = 5000;
  /// Far-field quadrature of the exterior contribution.
  std::optional<QuadratureSpec> quadrature;
  int threads = 1;
};

/// Lattice underlying a problem: nodes x_j = -R_k + j h_k, j = 0..cells_k.
struct CollocationGrid {
  std::vector<double> lo;
  std::vector<double> spacing;
  std::vector<int> cells;
  /// Lattice index (row-major, last axis fastest) of every unknown.
  std::vector<std::size_t> unknown_lattice_index;
  /// Unknown id per lattice index, -1 for nodes outside Q_d.
  std::vector<long> unknown_of;

  std::size_t lattice_size() const { return unknown_of.size(); }
  std::size_t unknowns() const { return unknown_lattice_index.size(); }
  std::vector<int> multi_index(std::size_t lattice) const;
  std::size_t lattice_of(const std::vector<int>& index) const;
  std::vector<double> point(std::size_t lattice) const;
};

CollocationGrid make_grid(const CollocationProblem& problem);

struct LinearSystem {
  CollocationGrid grid;
  std::size_t size = 0;
  std::vector<double> matrix;  // row-major size x size
  std::vector<double> rhs;
  double at(std::size_t r, std::size_t c) const { return matrix[r * size + c]; }
};

struct DiscreteSolution {
  CollocationGrid grid;
  std::vector<std::vector<double>> nodes;
  std::vector<double> values;
  LinearSystem system;
  double residual = 0.0;       ///< ||A u - b|| / max(||b||, tiny)
  double inverse_rcond = 0.0;  ///< LU reciprocal condition estimate, inverted
  std::vector<std::string> warnings;
  /// The solution on R^n: lattice interpolant inside the grid box, g outside.
  FieldPtr field;
};

/// Far-field weights W(o) = int_{|y| >= rho} [hat(y - o h) + hat(y + o h)] |y|^{-N-2s} dy
/// for offsets o in [0, max_offset]^N with unit multilinear hats of width h.
std::vector<double> far_weight_table(int N, double s, double h, double rho, int max_offset);

LinearSystem assemble(const CollocationProblem& problem);
DiscreteSolution solve(const CollocationProblem& problem);

struct MaxPrincipleReport {
  double min_value = 0.0;
  std::vector<double> argmin;
  double max_value = 0.0;
  std::vector<double> argmax;
  bool pass = false;
  double tol = 0.0;
};

/// For f >= 0 and g >= 0: asserts u >= -tol at all nodes (f <= 0, g <= 0: u <= tol).
MaxPrincipleReport check_max_principle(const DiscreteSolution& solution, bool nonnegative_data,
                                       double tol = 1e-8);

/// For f_lower <= f_upper and g_lower <= g_upper on the same grid: u_lower <= u_upper + tol.
struct ComparisonReport {
  double min_gap = 0.0;  ///< min over nodes of u_upper - u_lower
  std::vector<double> argmin;
  bool pass = false;
  double tol = 0.0;
};

ComparisonReport check_comparison(const DiscreteSolution& lower, const DiscreteSolution& upper,
                                  double tol = 1e-8);

/// f := L u* as a field, exterior := u*.
CollocationProblem manufactured_problem(const CoordinateDecomposition& decomp,
                                        const BoxDomain& domain, FieldPtr exact,
                                        std::vector<double> spacing,
                                        const QuadratureSpec& quadrature);

}  // namespace anisofrac
