#include <doctest.h>

#include <cmath>

#include "anisofrac/presets.hpp"
#include "anisofrac/sampling.hpp"
#include "anisofrac/solver.hpp"

using namespace anisofrac;

namespace {

const CoordinateDecomposition d11({1, 1}, {0.5}, {1.0});
const BoxDomain Q{{1.0, 1.0}, 1.0};

FieldPtr constant(double c) { return make_closed_form(Expr(c), 2); }

CollocationProblem problem(const CoordinateDecomposition& d, FieldPtr f, FieldPtr g, double h) {
  return CollocationProblem{d, Q, std::move(f), std::move(g), {h, h}, 5000,
                            QuadratureSpec::for_length_scale(1.0), 1};
}

// Smooth positive-ish forcing with random coefficients.
FieldPtr random_field(Rng& rng, double shift) {
  const Expr x = Expr::coord(0), y = Expr::coord(1);
  const Expr e = Expr(rng.uniform(-1, 1)) * sin(Expr(rng.uniform(1, 3)) * x) +
                 Expr(rng.uniform(-1, 1)) * cos(Expr(rng.uniform(1, 3)) * y) +
                 Expr(rng.uniform(-1, 1)) * x * y + Expr(shift);
  return make_closed_form(e, 2);
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("grid construction") {
    const auto g = make_grid(problem(d11, constant(0), constant(0), 0.25));
    CHECK(g.unknowns() == 49);
    CHECK(g.cells == std::vector<int>{8, 8});
    for (std::size_t u = 0; u < g.unknowns(); ++u) {
      const auto p = g.point(g.unknown_lattice_index[u]);
      CHECK(Q.contains(d11, p));
    }
    CHECK_THROWS(make_grid(problem(d11, constant(0), constant(0), 0.3)));
    auto big = problem(d11, constant(0), constant(0), 0.01);
    CHECK_THROWS_AS(make_grid(big), std::length_error);
  }

  TEST_CASE("without nonlocal weight each row is the 1D stencil") {
    const double h = 0.25;
    const auto sys = assemble(problem(d11.with_weights({0.0}), constant(0), constant(0), h));
    const auto& g = sys.grid;
    for (std::size_t r = 0; r < sys.size; ++r) {
      const auto ir = g.multi_index(g.unknown_lattice_index[r]);
      for (std::size_t c = 0; c < sys.size; ++c) {
        const auto ic = g.multi_index(g.unknown_lattice_index[c]);
        double want = 0.0;
        if (ir == ic) want = 2.0 / (h * h);
        else if (ir[0] == ic[0] && std::abs(ir[1] - ic[1]) == 1) want = -1.0 / (h * h);
        CHECK(sys.at(r, c) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("the fractional system is an M-matrix") {
    for (double s : {0.25, 0.5, 0.75}) {
      const CoordinateDecomposition d({1, 1}, {s}, {1.0});
      const auto sys = assemble(problem(d, constant(0), constant(0), 0.25));
      for (std::size_t r = 0; r < sys.size; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < sys.size; ++c) {
          row += sys.at(r, c);
          if (c != r) CHECK(sys.at(r, c) <= 0.0);
        }
        CHECK(sys.at(r, r) > 0.0);
        CHECK(row > 0.0);
      }
    }
  }

  TEST_CASE("far weights match the closed form away from the origin") {
    const double h = 0.25;
    const auto w = far_weight_table(1, 0.5, h, h, 4);
    REQUIRE(w.size() == 5);
    for (int o = 2; o <= 4; ++o)
      CHECK(w[o] == doctest::Approx(2.0 * std::log(double(o * o) / (o * o - 1)) / h).epsilon(1e-9));
  }

  TEST_CASE("zero data gives the zero solution") {
    const auto sol = solve(problem(d11, constant(0), constant(0), 0.125));
    for (double v : sol.values) CHECK(std::abs(v) < 1e-10);
    const auto mp = check_max_principle(sol, true);
    CHECK(mp.pass);
    CHECK(mp.min_value == doctest::Approx(0.0));
  }

  TEST_CASE("local model recovers the parabola") {
    // -u'' = 1 on (-1, 1) with zero exterior: u = (1 - t^2) / 2 >= 0
    const auto sol = solve(problem(d11.with_weights({0.0}), constant(1), constant(0), 0.25));
    for (std::size_t k = 0; k < sol.nodes.size(); ++k) {
      const double t = sol.nodes[k][1];
      CHECK(sol.values[k] == doctest::Approx(0.5 * (1 - t * t)).epsilon(1e-10));
    }
    CHECK(check_max_principle(sol, true).pass);
    const auto neg = solve(problem(d11, constant(-1), constant(0), 0.25));
    CHECK(check_max_principle(neg, false).pass);
    CHECK_FALSE(check_max_principle(neg, true).pass);
  }

  TEST_CASE("comparison principle on ordered data") {
    Rng rng(2024);
    const double h = 2.0 / 13.0;  // 12 x 12 interior nodes
    for (int t = 0; t < 3; ++t) {
      const auto f1 = random_field(rng, 0.0);
      const auto bump = random_field(rng, 3.5);  // stays positive on the box
      const auto f2 = linear_combination(1.0, f1, 1.0, bump);
      const auto g = random_field(rng, 0.0);
      const auto lo = solve(problem(d11, f1, g, h));
      const auto hi = solve(problem(d11, f2, g, h));
      REQUIRE(lo.values.size() == 144);
      const auto c = check_comparison(lo, hi);
      CHECK(c.pass);
      CHECK(c.min_gap > 0.0);
      CHECK_FALSE(check_comparison(hi, lo).pass);
    }
  }

  TEST_CASE("manufactured solutions converge") {
    const auto p = separable_bump_preset(d11, Q);
    double prev = 1e300;
    for (int K : {4, 8, 16}) {
      const auto prob = manufactured_problem(d11, Q, p.field, {2.0 / K, 2.0 / K},
                                             QuadratureSpec::for_length_scale(1.0));
      const auto sol = solve(prob);
      double err = 0.0;
      for (std::size_t k = 0; k < sol.nodes.size(); ++k)
        err = std::max(err, std::abs(sol.values[k] - p.field->value(sol.nodes[k])));
      CHECK(err < prev);
      prev = err;
      CHECK(sol.residual < 1e-10);
    }
    CHECK(prev < 0.05);
  }
}
