#include <doctest.h>

#include <cmath>

#include "anisofrac/barriers.hpp"
#include "anisofrac/presets.hpp"
#include "anisofrac/sampling.hpp"
#include "anisofrac/verification.hpp"

using namespace anisofrac;

namespace {

const CoordinateDecomposition d11({1, 1}, {0.5}, {1.0});
const BoxDomain Q{{1.0, 1.0}, 1.0};

}  // namespace

TEST_SUITE("barriers") {
  TEST_CASE("phi of affine and quadratic fields") {
    const Expr t = Expr::coord(1);
    const BarrierPhi affine(make_closed_form(Expr(0.3) + Expr(2.0) * t, 2));
    const BarrierPhi quad(make_closed_form(ipow(t, 2), 2));
    Rng rng(9);
    for (int k = 0; k < 200; ++k) {
      const std::vector<double> p{rng.uniform(-1, 1), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
      CHECK(affine.value(p) == doctest::Approx(0.0).epsilon(1e-15));
      const double yp = std::max(p[1], 0.0), zp = std::max(p[2], 0.0);
      CHECK(quad.value(p) == doctest::Approx(2.0 * yp * zp).epsilon(1e-14));
    }
    CHECK(quad.value(std::vector<double>{0.0, -0.1, 0.2}) == 0.0);
    CHECK(quad.value(std::vector<double>{0.0, 0.2, -0.1}) == 0.0);
  }

  TEST_CASE("psi examples") {
    const BarrierPsi psi0(d11, Q, 0.0, 0.0, 1.0);
    const std::vector<double> p{0.0, 0.125, 0.125};
    CHECK(psi0.value(p) == doctest::Approx(std::log(8.0) / 64.0).epsilon(1e-14));
    CHECK(psi0.value(p) == doctest::Approx(0.03249132).epsilon(1e-6));

    const BarrierPsi psi(d11, Q, 2.0, 1.5, 7.0);
    const std::vector<double> neg{0.4, -0.1, 0.2};
    CHECK(psi.value(neg) == doctest::Approx(psi.group_part(neg)));
    const double A = 2.0 / (1.0 - std::sqrt(0.75));
    for (double x : {1.0, 1.3, -2.0}) {
      const std::vector<double> far{x, -0.1, -0.1};
      CHECK(psi.value(far) == doctest::Approx(A).epsilon(1e-14));
    }
  }

  TEST_CASE("h ratio and the yz log identity") {
    CHECK(h_ratio(1.0) == 0.25);
    for (double t : {0.1, 0.5, 2.0, 10.0}) CHECK(h_ratio(t) < 0.25);
    CHECK(yz_log_laplacian(0.2, 0.3) == doctest::Approx(-1.52).epsilon(1e-14));
    const double h = 1e-4;
    const double y = 0.2, z = 0.3;
    const double fd = (yz_log(y + h, z, 1) - 2 * yz_log(y, z, 1) + yz_log(y - h, z, 1)) / (h * h) +
                      (yz_log(y, z + h, 1) - 2 * yz_log(y, z, 1) + yz_log(y, z - h, 1)) / (h * h);
    CHECK(std::abs(fd - (-1.52)) < 1e-6);
  }

  TEST_CASE("lemma suites on the separable bump") {
    const auto p = separable_bump_preset(d11, Q);
    const QuadratureSpec q = QuadratureSpec::for_length_scale(1.0);
    const SupEstimate sLu = estimate_sup_Lu(*p.field, d11, Q, 24, q);
    const BarrierInput in{p.field, p.sup_u, p.sup_dnu, sLu.value};
    BarrierOptions bo;
    bo.quad = q;
    bo.identity_probes = 10;
    bo.psi_probes = 40;
    bo.exterior_samples = 200;
    const auto phi = check_phi_lemma(in, d11, Q, bo);
    CHECK(phi.pass());
    CHECK(phi.find("phi_vanishing").worst_margin() == 0.0);
    CHECK(phi.find("phi_symmetry").worst_margin() == 0.0);

    const auto kappa = compute_kappa(sLu.value, p.sup_u, p.sup_dnu, d11, Q, CTildeVariant::pow4s);
    const auto psi = check_psi_supersolution(in, d11, Q, kappa, bo);
    CHECK(psi.find("psi_pm_phi_exterior").pass());
    CHECK(psi.find("L_psi_ge_norm_Lu").pass());
    CHECK(psi.find("L_psi_pm_phi_ge_0").pass());
    CHECK(psi.find("yz_log_hessian_trace").pass());
    CHECK(psi.find("h_sup_at_one").pass());
    // with L' = ... - (1/2) d_y^2 - (1/2) d_z^2 the barrier sits above ||Lu||
    CHECK_FALSE(psi.find("L_psi_le_norm_Lu").pass());
  }
}
