#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "anisofrac/operator.hpp"
#include "anisofrac/presets.hpp"

using namespace anisofrac;

namespace {

const CoordinateDecomposition d11({1, 1}, {0.5}, {1.0});
const QuadratureSpec q;

double ct4(int N, double s) {
  return std::pow(4.0, s) * boost::math::tgamma(s + 1) * boost::math::tgamma(0.5 * N + s) /
         boost::math::tgamma(0.5 * N);
}

}  // namespace

TEST_SUITE("operator") {
  TEST_CASE("constants are annihilated") {
    const auto one = make_closed_form(Expr(1.0), 2);
    for (double x0 : {0.0, 0.4, -3.0}) {
      const std::vector<double> x{x0, 0.2};
      CHECK(sectional_integral(*one, d11, 0, x, q).value == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(apply_L(*one, d11, x, q).value == doctest::Approx(0.0).epsilon(1e-14));
    }
  }

  TEST_CASE("classical part of L") {
    const Expr t = Expr::coord(1);
    const auto sq = make_closed_form(ipow(t, 2), 2);
    const auto sn = make_closed_form(sin(t), 2);
    const auto d0 = d11.with_weights({0.0});
    for (double x0 : {-0.5, 0.0, 0.7}) {
      const std::vector<double> x{x0, 0.3};
      CHECK(apply_L(*sq, d0, x, q).value == doctest::Approx(-2.0));
      CHECK(classical_second_derivative(*sq, d11, 1, x, 1e-3).value == doctest::Approx(-2.0));
    }
    const std::vector<double> o{0.0, 0.0};
    CHECK(apply_L(*sn, d0, o, q).value == doctest::Approx(0.0));
  }

  TEST_CASE("bump identity is constant inside the ball") {
    for (double s : {0.25, 0.5, 0.75}) {
      const CoordinateDecomposition d({1, 1}, {s}, {1.0});
      const auto u = fractional_bump(d, 0, 1.0, s);
      std::vector<double> vals;
      for (double x0 : {0.0, 0.3, -0.3, 0.6, -0.6}) {
        const std::vector<double> x{x0, 0.0};
        vals.push_back(frac_laplacian_point(*u, d, 0, x, q).value);
      }
      for (double v : vals) CHECK(v == doctest::Approx(ct4(1, s)).epsilon(1e-7));
    }
  }

  TEST_CASE("validate_c_tilde decides the convention") {
    const auto v = validate_c_tilde(1, 0.5, 2.0, {0.0, 0.4, 0.8, 1.2, 1.6}, QuadratureSpec::for_length_scale(2.0));
    CHECK(v.relative_spread < 1e-6);
    REQUIRE(v.matching.size() == 1);
    CHECK(v.matching[0] == CTildeVariant::pow4s);
    // value c~/d^{2s} with d = 2
    CHECK(v.mean == doctest::Approx(0.5).epsilon(1e-7));
  }

  TEST_CASE("separable manufactured value") {
    // u = (1 - x1^2)_+^{1/2} (1 - x2^2): c~(1,1/2) * 1 + 2 * 1 at the origin
    const Expr x = Expr::coord(0), y = Expr::coord(1);
    const auto u = make_closed_form(pow_pos(Expr(1.0) - x * x, 0.5) * (Expr(1.0) - y * y), 2);
    const std::vector<double> o{0.0, 0.0};
    CHECK(apply_L(*u, d11, o, q).value == doctest::Approx(ct4(1, 0.5) + 2.0).epsilon(1e-7));
  }

  TEST_CASE("order near one approaches the classical Laplacian") {
    const CoordinateDecomposition d({1, 1}, {0.99}, {1.0});
    const auto u = make_closed_form(exp(-squared_norm(0, 1)), 2);
    const std::vector<double> o{0.0, 0.0};
    const double frac = frac_laplacian_point(*u, d, 0, o, q).value;
    const double classical = 2.0;  // -u'' at 0
    CHECK(std::abs(frac - classical) / classical < 0.05);
    CHECK_THROWS(frac_laplacian_point(*u, d, 1, o, q));
  }

  TEST_CASE("far field integral of a constant is twice the tail mass") {
    const auto one = make_closed_form(Expr(1.0), 2);
    const std::vector<double> x{0.1, 0.0};
    for (double s : {0.25, 0.5}) {
      const CoordinateDecomposition d({1, 1}, {s}, {1.0});
      const auto e = far_field_integral(*one, d, 0, x, 0.1, q);
      CHECK(e.value == doctest::Approx(2.0 * kernel_tail_mass(1, s, 0.1)).epsilon(1e-9));
    }
  }

  TEST_CASE("extended operator examples") {
    const auto flat = make_closed_form(Expr(3.0), 3);
    const auto yz = std::make_shared<FunctionField>(3, [](std::span<const double> p) {
      return p[1] * p[2] * std::log(2.0 / (p[1] + p[2]));
    });
    const std::vector<double> p{0.0, 0.1, 0.1};
    CHECK(apply_extended(*flat, d11, p, q).value == doctest::Approx(0.0).epsilon(1e-14));
    const auto sq = make_closed_form(ipow(Expr::coord(1), 2) + ipow(Expr::coord(2), 2), 3);
    CHECK(apply_extended(*sq, d11, p, q).value == doctest::Approx(-2.0));
    CHECK(apply_extended(*yz, d11, p, q).value == doctest::Approx(0.75).epsilon(1e-6));
  }
}
