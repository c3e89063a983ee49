#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <cmath>
#include <numbers>

#include "anisofrac/operator.hpp"
#include "anisofrac/quadrature.hpp"

using namespace anisofrac;
using std::numbers::pi;

namespace {

// (-Delta)^s e^{-|x|^2} on R^N: 4^s Gamma(N/2+s)/Gamma(N/2) 1F1(N/2+s; N/2; -|x|^2).
double gaussian_oracle(int N, double s, double r) {
  return std::pow(4.0, s) * boost::math::tgamma(0.5 * N + s) / boost::math::tgamma(0.5 * N) *
         boost::math::hypergeometric_1F1(0.5 * N + s, 0.5 * N, -r * r);
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("adaptive Gauss-Kronrod on smooth and singular integrands") {
    const auto a = integrate_adaptive([](double t) { return std::sin(t); }, 0.0, pi, 1e-14, 1e-13, 4, 200);
    CHECK(a.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(a.error < 1e-10);
    const auto b = integrate_adaptive([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, 1e-12, 1e-10, 4, 200);
    CHECK(b.value == doctest::Approx(2.0).epsilon(1e-8));
    const auto c = integrate_adaptive([](double t) { return std::exp(-t * t); }, -6.0, 6.0, 1e-14, 1e-13, 2, 200);
    CHECK(c.value == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
  }

  TEST_CASE("settings validation") {
    QuadratureSpec q;
    CHECK_NOTHROW(q.validate());
    q.near_radius = q.inner_radius / 2;
    CHECK_THROWS(q.validate());
    const auto s = QuadratureSpec::for_length_scale(2.0);
    CHECK(s.near_radius == doctest::Approx(0.2));
    CHECK(s.far_cutoff == doctest::Approx(8.0));
  }

  TEST_CASE("fractional Laplacian of a Gaussian in 1D and 2D") {
    for (int N : {1, 2}) {
      const std::vector<int> dims = N == 1 ? std::vector<int>{1, 1} : std::vector<int>{2, 1};
      const Expr g = exp(-squared_norm(0, N));
      const auto u = make_closed_form(g, N + 1);
      const QuadratureSpec q;
      for (double s : {0.25, 0.5, 0.75}) {
        const CoordinateDecomposition ds(dims, {s}, {1.0});
        for (double r : {0.0, 0.4, 1.1}) {
          std::vector<double> x(N + 1, 0.0);
          x[0] = r;
          const Estimate e = frac_laplacian_point(*u, ds, 0, x, q);
          const double want = gaussian_oracle(N, s, r);
          CHECK(e.value == doctest::Approx(want).epsilon(N == 1 ? 1e-8 : 1e-6));
          CHECK(std::abs(e.value - want) <= 10.0 * e.error + 1e-7);
        }
      }
    }
  }

  TEST_CASE("numeric and analytic tails agree") {
    const CoordinateDecomposition d({1, 1}, {0.5}, {1.0});
    const Expr x = Expr::coord(0);
    const Support box{{-1.0, -1e300}, {1.0, 1e300}, 0.0};
    const auto u = make_closed_form(ipow(pow_pos(Expr(1.0) - x * x, 1.0), 3), 2, box);
    QuadratureSpec qa, qn;
    qn.tail_mode = TailMode::numeric;
    const std::vector<double> p{0.3, 0.0};
    const Estimate a = frac_laplacian_point(*u, d, 0, p, qa);
    const Estimate n = frac_laplacian_point(*u, d, 0, p, qn);
    CHECK(a.value == doctest::Approx(n.value).epsilon(1e-8));
  }
}
