#include "anisofrac/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "anisofrac/constants.hpp"
#include "anisofrac/operator.hpp"
#include "anisofrac/parallel.hpp"

namespace anisofrac {
namespace {

// Integral of g over [lo, hi] minus (-b, b), split at the breakpoints.
double integrate_outside(const std::function<double(double)>& g, double lo, double hi,
                         double b, std::vector<double> breaks, double rel) {
  std::vector<double> pts{lo, hi};
  for (double p : breaks)
    if (p > lo && p < hi) pts.push_back(p);
  if (b > 0.0) {
    if (-b > lo && -b < hi) pts.push_back(-b);
    if (b > lo && b < hi) pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k], c = pts[k + 1];
    if (c - a <= 0.0) continue;
    const double mid = 0.5 * (a + c);
    if (b > 0.0 && std::abs(mid) < b) continue;
    acc += integrate_adaptive(g, a, c, 0.0, rel, 1, 200).value;
  }
  return acc;
}

double hat(double t, double h) { return std::max(0.0, 1.0 - std::abs(t) / h); }

}  // namespace

std::vector<double> far_weight_table(int N, double s, double h, double rho, int max_offset) {
  if (!(h > 0.0 && rho > 0.0) || max_offset < 0)
    throw std::invalid_argument("far_weight_table: invalid arguments");
  if (N == 1) {
    std::vector<double> w(max_offset + 1);
    for (int o = 0; o <= max_offset; ++o) {
      const double c = o * h;
      const double v = integrate_outside(
          [&](double y) { return hat(y - c, h) * std::pow(std::abs(y), -1.0 - 2.0 * s); },
          c - h, c + h, rho, {c, 0.0}, 1e-13);
      w[o] = 2.0 * v;
    }
    return w;
  }
  if (N != 2) throw std::invalid_argument("far_weight_table supports N in {1, 2}");
  const int K = max_offset + 1;
  std::vector<double> w(static_cast<std::size_t>(K) * K, 0.0);
  for (int o1 = 0; o1 <= max_offset; ++o1) {
    for (int o2 = 0; o2 <= o1; ++o2) {
      const double c1 = o1 * h, c2 = o2 * h;
      auto outer = [&](double y1) {
        const double b2 = rho * rho - y1 * y1;
        const double b = b2 > 0.0 ? std::sqrt(b2) : 0.0;
        auto inner = [&](double y2) {
          return hat(y2 - c2, h) * std::pow(y1 * y1 + y2 * y2, -1.0 - s);
        };
        return hat(y1 - c1, h) * integrate_outside(inner, c2 - h, c2 + h, b, {c2, 0.0}, 1e-12);
      };
      std::vector<double> pts{c1 - h, c1 + h};
      for (double p : {c1, -rho, rho, 0.0})
        if (p > c1 - h && p < c1 + h) pts.push_back(p);
      std::sort(pts.begin(), pts.end());
      double acc = 0.0;
      for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        acc += integrate_adaptive(outer, pts[k], pts[k + 1], 0.0, 1e-11, 1, 200).value;
      w[o1 * K + o2] = w[o2 * K + o1] = 2.0 * acc;
    }
  }
  return w;
}

std::vector<int> CollocationGrid::multi_index(std::size_t lattice) const {
  std::vector<int> idx(cells.size());
  for (std::size_t k = cells.size(); k-- > 0;) {
    const std::size_t m = static_cast<std::size_t>(cells[k]) + 1;
    idx[k] = static_cast<int>(lattice % m);
    lattice /= m;
  }
  return idx;
}

std::size_t CollocationGrid::lattice_of(const std::vector<int>& index) const {
  std::size_t l = 0;
  for (std::size_t k = 0; k < cells.size(); ++k) l = l * (cells[k] + 1) + index[k];
  return l;
}

std::vector<double> CollocationGrid::point(std::size_t lattice) const {
  const auto idx = multi_index(lattice);
  std::vector<double> x(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) x[k] = lo[k] + idx[k] * spacing[k];
  return x;
}

CollocationGrid make_grid(const CollocationProblem& p) {
  const auto& dec = p.decomp;
  p.domain.validate(dec);
  const int n = dec.dimension();
  if (static_cast<int>(p.spacing.size()) != n)
    throw std::invalid_argument("spacing needs one entry per axis");
  if (!p.rhs || !p.exterior) throw std::invalid_argument("problem needs rhs and exterior fields");
  CollocationGrid g;
  g.lo.resize(n);
  g.spacing = p.spacing;
  g.cells.resize(n);
  for (int i = 0; i < dec.groups(); ++i) {
    const double R = i + 1 == dec.groups() ? p.domain.radii[i] * p.domain.dilation
                                           : p.domain.radii[i];
    for (int k = dec.offset(i); k < dec.offset(i) + dec.group_dim(i); ++k) {
      const double h = p.spacing[k];
      if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
      if (h != p.spacing[dec.offset(i)])
        throw std::invalid_argument("grid spacing must be equal within a group");
      const double c = 2.0 * R / h;
      const long cells = std::lround(c);
      if (std::abs(c - cells) > 1e-9 * c || cells < 2)
        throw std::invalid_argument("grid spacing must divide the box diameter");
      g.lo[k] = -R;
      g.cells[k] = static_cast<int>(cells);
    }
  }
  std::size_t total = 1;
  for (int c : g.cells) total *= static_cast<std::size_t>(c) + 1;
  g.unknown_of.assign(total, -1);
  for (std::size_t l = 0; l < total; ++l) {
    const auto idx = g.multi_index(l);
    bool inside = true;
    for (int k = 0; k < n; ++k) inside = inside && idx[k] > 0 && idx[k] < g.cells[k];
    if (inside) inside = p.domain.contains(dec, g.point(l));
    if (inside) {
      g.unknown_of[l] = static_cast<long>(g.unknown_lattice_index.size());
      g.unknown_lattice_index.push_back(l);
    }
  }
  if (g.unknowns() == 0) throw std::invalid_argument("grid has no interior nodes");
  if (g.unknowns() > p.node_cap)
    throw std::length_error("interior node count " + std::to_string(g.unknowns()) +
                            " exceeds the cap " + std::to_string(p.node_cap));
  return g;
}

namespace {

struct GroupStencil {
  int group;
  bool fractional;
  double a;
  double c;        // c_{N,s}
  double h;
  double k_near;   // |S| rho^{2-2s} / (N (2-2s))
  double diag;     // 2 M(rho) - W(0)
  std::vector<double> weights;
  int max_offset;
};

// Lattice field carrying g at known nodes and 0 at unknowns, g outside the box.
FieldPtr known_data_field(const CollocationGrid& g, const ScalarField& exterior,
                          const FieldPtr& exterior_ptr) {
  std::vector<int> counts(g.cells.size());
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] = g.cells[k] + 1;
  std::vector<double> values(g.lattice_size(), 0.0);
  for (std::size_t l = 0; l < values.size(); ++l)
    if (g.unknown_of[l] < 0) values[l] = exterior.value(g.point(l));
  return std::make_shared<GridField>(g.lo, g.spacing, counts, std::move(values), exterior_ptr);
}

}  // namespace

LinearSystem assemble(const CollocationProblem& p) {
  LinearSystem sys;
  sys.grid = make_grid(p);
  const CollocationGrid& g = sys.grid;
  const auto& dec = p.decomp;
  const std::size_t U = g.unknowns();
  sys.size = U;
  sys.matrix.assign(U * U, 0.0);
  sys.rhs.assign(U, 0.0);

  std::vector<GroupStencil> groups;
  for (int i = 0; i < dec.groups(); ++i) {
    const double a = dec.weight(i);
    if (a == 0.0) continue;
    GroupStencil st{i, dec.is_fractional(i), a, 0.0, p.spacing[dec.offset(i)], 0.0, 0.0, {}, 0};
    if (st.fractional) {
      const int N = dec.group_dim(i);
      const double s = dec.order(i);
      const double rho = st.h;
      st.c = c_ns(N, s);
      st.k_near = sphere_measure(N) * std::pow(rho, 2.0 - 2.0 * s) / (N * (2.0 - 2.0 * s));
      st.max_offset = g.cells[dec.offset(i)];
      st.weights = far_weight_table(N, s, st.h, rho, st.max_offset);
      st.diag = 2.0 * kernel_tail_mass(N, s, rho) - st.weights[0];
    }
    groups.push_back(std::move(st));
  }

  FieldPtr known;
  if (std::any_of(groups.begin(), groups.end(), [](const GroupStencil& s) { return s.fractional; }))
    known = known_data_field(g, *p.exterior, p.exterior);
  const QuadratureSpec q =
      p.quadrature.value_or(QuadratureSpec::for_length_scale(p.domain.min_radius()));

  parallel_for(U, p.threads, [&](std::size_t row) {
    const std::size_t l = g.unknown_lattice_index[row];
    const auto idx = g.multi_index(l);
    const auto x = g.point(l);
    double* A = &sys.matrix[row * U];
    double b = p.rhs->value(x);

    // Classical 3-point stencil with weight `w` along axis k.
    auto stencil = [&](int k, double w) {
      const double hk = g.spacing[k];
      const double coef = w / (hk * hk);
      A[row] += 2.0 * coef;
      for (int dir : {-1, 1}) {
        auto nb = idx;
        nb[k] += dir;
        const std::size_t ln = g.lattice_of(nb);
        const long id = g.unknown_of[ln];
        if (id >= 0)
          A[id] -= coef;
        else
          b += coef * p.exterior->value(g.point(ln));
      }
    };

    for (const GroupStencil& st : groups) {
      const int off = dec.offset(st.group), N = dec.group_dim(st.group);
      if (!st.fractional) {
        for (int k = off; k < off + N; ++k) stencil(k, st.a);
        continue;
      }
      const double ac = st.a * st.c;
      for (int k = off; k < off + N; ++k) stencil(k, ac * st.k_near);
      A[row] += ac * st.diag;
      // Unknown nodes sharing all coordinates outside the group.
      auto nb = idx;
      const int K = st.max_offset;
      const int span = N == 1 ? K + 1 : (K + 1) * (K + 1);
      for (int t = 0; t < span; ++t) {
        const int j1 = N == 1 ? t : t / (K + 1);
        const int j2 = N == 1 ? 0 : t % (K + 1);
        nb[off] = j1;
        if (N == 2) nb[off + 1] = j2;
        const std::size_t ln = g.lattice_of(nb);
        const long id = g.unknown_of[ln];
        if (id < 0 || static_cast<std::size_t>(id) == row) continue;
        const int o1 = std::abs(j1 - idx[off]);
        const int o2 = N == 1 ? 0 : std::abs(j2 - idx[off + 1]);
        A[id] -= ac * (N == 1 ? st.weights[o1] : st.weights[o1 * (K + 1) + o2]);
      }
      b += ac * far_field_integral(*known, dec, st.group, x, st.h, q).value;
    }
    sys.rhs[row] = b;
  });
  return sys;
}

DiscreteSolution solve(const CollocationProblem& p) {
  DiscreteSolution out;
  out.system = assemble(p);
  const auto& sys = out.system;
  const auto U = static_cast<Eigen::Index>(sys.size);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      A(sys.matrix.data(), U, U);
  const Eigen::Map<const Eigen::VectorXd> b(sys.rhs.data(), U);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || !std::isfinite(rcond))
    throw std::runtime_error("collocation matrix is singular");
  const Eigen::VectorXd u = lu.solve(b);
  out.inverse_rcond = 1.0 / rcond;
  if (out.inverse_rcond > 1e12)
    out.warnings.push_back("ill-conditioned collocation matrix (1/rcond = " +
                           std::to_string(out.inverse_rcond) + ")");
  const double bn = b.norm();
  out.residual = (A * u - b).norm() / (bn > 0.0 ? bn : 1.0);
  out.grid = sys.grid;
  out.values.assign(u.data(), u.data() + U);
  for (std::size_t l : out.grid.unknown_lattice_index) out.nodes.push_back(out.grid.point(l));

  std::vector<int> counts(out.grid.cells.size());
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] = out.grid.cells[k] + 1;
  std::vector<double> lattice(out.grid.lattice_size());
  for (std::size_t l = 0; l < lattice.size(); ++l) {
    const long id = out.grid.unknown_of[l];
    lattice[l] = id >= 0 ? out.values[id] : p.exterior->value(out.grid.point(l));
  }
  out.field = std::make_shared<GridField>(out.grid.lo, out.grid.spacing, counts,
                                          std::move(lattice), p.exterior);
  return out;
}

MaxPrincipleReport check_max_principle(const DiscreteSolution& sol, bool nonnegative_data,
                                       double tol) {
  MaxPrincipleReport r;
  r.tol = tol;
  if (sol.values.empty()) return r;
  const auto [mn, mx] = std::minmax_element(sol.values.begin(), sol.values.end());
  r.min_value = *mn;
  r.max_value = *mx;
  r.argmin = sol.nodes[mn - sol.values.begin()];
  r.argmax = sol.nodes[mx - sol.values.begin()];
  r.pass = nonnegative_data ? r.min_value >= -tol : r.max_value <= tol;
  return r;
}

ComparisonReport check_comparison(const DiscreteSolution& lower, const DiscreteSolution& upper,
                                  double tol) {
  if (lower.nodes != upper.nodes)
    throw std::invalid_argument("comparison needs solutions on the same nodes");
  ComparisonReport r;
  r.tol = tol;
  r.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lower.values.size(); ++k) {
    const double gap = upper.values[k] - lower.values[k];
    if (gap < r.min_gap) {
      r.min_gap = gap;
      r.argmin = lower.nodes[k];
    }
  }
  r.pass = r.min_gap >= -tol;
  return r;
}

CollocationProblem manufactured_problem(const CoordinateDecomposition& decomp,
                                        const BoxDomain& domain, FieldPtr exact,
                                        std::vector<double> spacing,
                                        const QuadratureSpec& quadrature) {
  auto f = std::make_shared<FunctionField>(
      decomp.dimension(), [decomp, exact, quadrature](std::span<const double> x) {
        return apply_L(*exact, decomp, x, quadrature).value;
      });
  return CollocationProblem{decomp, domain, f, exact, std::move(spacing), 5000, quadrature, 1};
}

}  // namespace anisofrac
