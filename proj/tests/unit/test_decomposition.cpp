#include <doctest.h>

#include "anisofrac/decomposition.hpp"
#include "anisofrac/sampling.hpp"

using namespace anisofrac;

TEST_SUITE("decomposition") {
  TEST_CASE("embed places the increment in its group") {
    const CoordinateDecomposition d11({1, 1}, {0.5}, {1.0});
    const std::vector<double> y3{3.0};
    CHECK(d11.embed_increment(0, y3) == std::vector<double>{3.0, 0.0});

    const CoordinateDecomposition d21({2, 1}, {0.5}, {1.0});
    const std::vector<double> y12{1.0, 2.0};
    CHECK(d21.embed_increment(0, y12) == std::vector<double>{1.0, 2.0, 0.0});

    const CoordinateDecomposition d111({1, 1, 1}, {0.3, 0.7}, {1.0, 2.0});
    const std::vector<double> y5{5.0};
    CHECK(d111.embed_increment(1, y5) == std::vector<double>{0.0, 5.0, 0.0});
  }

  TEST_CASE("project picks a group") {
    const CoordinateDecomposition d11({1, 1}, {0.5}, {1.0});
    const std::vector<double> x{3.0, 7.0};
    CHECK(d11.project_group(1, x) == std::vector<double>{7.0});

    const CoordinateDecomposition d21({2, 1}, {0.5}, {1.0});
    const std::vector<double> x3{1.0, 2.0, 9.0};
    CHECK(d21.project_group(0, x3) == std::vector<double>{1.0, 2.0});
  }

  TEST_CASE("project inverts embed") {
    const CoordinateDecomposition d({2, 1, 1}, {0.4, 0.9}, {1.0, 0.5});
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
      const int i = rng.index(d.groups());
      std::vector<double> y(d.group_dim(i));
      for (double& v : y) v = rng.uniform(-5, 5);
      CHECK(d.project_group(i, d.embed_increment(i, y)) == y);
    }
  }

  TEST_CASE("accessors") {
    const CoordinateDecomposition d({2, 1, 1}, {0.4, 1.0}, {1.0, 0.5});
    CHECK(d.dimension() == 4);
    CHECK(d.local_axis() == 3);
    CHECK(d.offset(1) == 2);
    CHECK(d.order(2) == 1.0);
    CHECK(d.weight(2) == 1.0);
    CHECK(d.is_fractional(0));
    CHECK_FALSE(d.is_fractional(1));
    const std::vector<double> x{3.0, 4.0, 1.0, 2.0};
    CHECK(d.group_norm(0, x) == doctest::Approx(5.0));
  }

  TEST_CASE("invalid decompositions are rejected") {
    CHECK_THROWS(CoordinateDecomposition({1, 2}, {0.5}, {1.0}));
    CHECK_THROWS(CoordinateDecomposition({1, 1}, {0.0}, {1.0}));
    CHECK_THROWS(CoordinateDecomposition({1, 1}, {1.5}, {1.0}));
    CHECK_THROWS(CoordinateDecomposition({1, 1}, {0.5}, {-1.0}));
    CHECK_THROWS(CoordinateDecomposition({1, 1}, {0.5, 0.5}, {1.0}));
  }

  TEST_CASE("box membership is open") {
    const CoordinateDecomposition d({1, 1}, {0.5}, {1.0});
    const BoxDomain Q{{1.0, 1.0}, 1.0};
    const std::vector<double> c{0.0, 0.0}, b{0.0, 1.0}, dil{0.0, 1.5};
    CHECK(Q.contains(d, c));
    CHECK_FALSE(Q.contains(d, b));
    const BoxDomain Q2{{1.0, 1.0}, 2.0};
    CHECK(Q2.contains(d, dil));
  }

  TEST_CASE("extended domain caps y and z at d_m / 4") {
    const CoordinateDecomposition d({1, 1}, {0.5}, {1.0});
    const BoxDomain Q{{1.0, 1.0}, 1.0};
    CHECK_FALSE(in_extended_domain(Q, d, ExtendedPoint{{0.0}, 0.3, 0.1}));
    CHECK(in_extended_domain(Q, d, ExtendedPoint{{0.0}, 0.2, 0.1}));
    CHECK_FALSE(in_extended_domain(Q, d, ExtendedPoint{{0.0}, 0.0, 0.1}));
    const ExtendedPoint p{{0.5}, 0.1, 0.2};
    const auto q = ExtendedPoint::unpack(p.packed());
    CHECK(q.x_prime == p.x_prime);
    CHECK(q.y == p.y);
    CHECK(q.z == p.z);
  }
}
