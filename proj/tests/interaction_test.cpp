#include <doctest/doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "trapbose/interaction.hpp"

using trapbose::InteractionMatrix;
using trapbose::matrix_elements;
using trapbose::Potential;
using trapbose::ProjectedPotential;
using trapbose::RadialBasis;
using trapbose::TrapModel;

namespace {
const TrapModel osc = TrapModel::oscillator_units();
const double pi = std::acos(-1.0);
}

TEST_CASE("radial projection of central shapes") {
    const ProjectedPotential g = trapbose::project_radial(Potential::gaussian(0.3, 0.8), 2);
    CHECK(g(0.5) == doctest::Approx(0.3 * std::exp(-0.25 / 0.64)).epsilon(1e-15));
    CHECK(g(0.0) == 0.3);

    const ProjectedPotential w = trapbose::project_radial(Potential::square_well(-0.4, 1.2), 0);
    CHECK(w(1.0) == -0.4);
    CHECK(w(1.3) == 0.0);

    const ProjectedPotential z = trapbose::project_radial(Potential::zero(), 1);
    CHECK(z(0.7) == 0.0);

    CHECK_THROWS_AS(trapbose::project_radial(Potential::contact(0.1), 0),
                    std::invalid_argument);
}

TEST_CASE("zero potential gives the exact zero matrix") {
    const RadialBasis b(osc, 0, 6, 26);
    const InteractionMatrix v = matrix_elements(b, Potential::zero());
    CHECK(v.is_zero());
    CHECK(v.entries.cwiseAbs().maxCoeff() == 0.0);
    CHECK(v.quadrature_adequate);
    const InteractionMatrix w = matrix_elements(b, Potential::square_well(0.0, 1.0));
    CHECK(w.is_zero());
}

TEST_CASE("gaussian entries against frozen anchors and live adaptive oracle") {
    const RadialBasis b(osc, 0, 8, 28);
    const Potential p = Potential::gaussian(0.1, 1.0);
    const InteractionMatrix v = matrix_elements(b, p);
    CHECK(v.l == 0);
    CHECK(v.size == 8);
    CHECK(v.quadrature_order == 28);

    CHECK(v.entries(0, 0) == doctest::Approx(oracle::frozen::gauss_v00).epsilon(1e-10));
    CHECK(v.entries(0, 1) == doctest::Approx(oracle::frozen::gauss_v01).epsilon(1e-10));
    CHECK(v.entries(0, 7) == doctest::Approx(oracle::frozen::gauss_v07).epsilon(1e-10));
    CHECK(v.entries(7, 7) == doctest::Approx(oracle::frozen::gauss_v77).epsilon(1e-10));

    // closed form for sigma = b: V00 = g / (2 sqrt 2)
    CHECK(v.entries(0, 0) == doctest::Approx(0.1 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));

    for (int m = 0; m < 8; m += 3) {
        for (int n = m; n < 8; n += 2) {
            const double ref = oracle::integrate(
                [&](double r) {
                    return oracle::radial(m, 0, 1.0, r) * 0.1 * std::exp(-r * r) *
                           oracle::radial(n, 0, 1.0, r);
                },
                0.0, 12.0);
            CHECK(v.entries(m, n) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("symmetry is exact and linearity holds to rounding") {
    const RadialBasis b(osc, 1, 7, 27);
    const Potential p = Potential::gaussian(-0.23, 0.9);
    const InteractionMatrix v = matrix_elements(b, p);
    for (int m = 0; m < 7; ++m)
        for (int n = 0; n < 7; ++n)
            CHECK(v.entries(m, n) == v.entries(n, m));

    const InteractionMatrix v4 = matrix_elements(b, Potential::gaussian(4.0 * -0.23, 0.9));
    for (int m = 0; m < 7; ++m)
        for (int n = 0; n < 7; ++n)
            CHECK(v4.entries(m, n) == doctest::Approx(4.0 * v.entries(m, n)).epsilon(1e-15));
}

TEST_CASE("wide gaussian approaches g times identity") {
    const RadialBasis b(osc, 0, 4, 24);
    double prev_off = 1e9, prev_diag_err = 1e9;
    for (double sigma : {2.0, 5.0, 10.0, 20.0}) {
        const InteractionMatrix v = matrix_elements(b, Potential::gaussian(0.1, sigma));
        double off = 0.0, diag_err = 0.0;
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) {
                if (m == n) diag_err = std::max(diag_err, std::abs(v.entries(m, n) / 0.1 - 1.0));
                else off = std::max(off, std::abs(v.entries(m, n) / 0.1));
            }
        CHECK(off < prev_off);
        CHECK(diag_err < prev_diag_err);
        prev_off = off;
        prev_diag_err = diag_err;
    }
    // leading deviation is -<R_m|r^2|R_n>/sigma^2; at sigma=20 and n<4 the
    // largest such moment is about 7.5, so bounds sit just above 7.5/400
    CHECK(prev_off < 1e-2);
    CHECK(prev_diag_err < 2e-2);
}

TEST_CASE("square well entries on the dedicated interval rule") {
    const RadialBasis b(osc, 0, 6, 26);
    const Potential p = Potential::square_well(-0.3, 1.0);
    const InteractionMatrix v = matrix_elements(b, p);
    CHECK(v.entries(0, 0) == doctest::Approx(oracle::frozen::well_v00).epsilon(1e-9));
    CHECK(v.entries(2, 2) == doctest::Approx(oracle::frozen::well_v22).epsilon(1e-9));
    for (int m = 0; m < 6; ++m) {
        for (int n = m; n < 6; ++n) {
            const double ref = -0.3 * oracle::integrate(
                [&](double r) {
                    return oracle::radial(m, 0, 1.0, r) * oracle::radial(n, 0, 1.0, r);
                },
                0.0, 1.0);
            CHECK(v.entries(m, n) == doctest::Approx(ref).epsilon(1e-9));
        }
    }
    CHECK(v.quadrature_adequate);
}

TEST_CASE("contact entries are the analytic rank-one form") {
    const RadialBasis b(osc, 0, 3, 23);
    const double gc = 0.25;
    const InteractionMatrix v = matrix_elements(b, Potential::contact(gc));
    const double c = gc / (4.0 * pi);
    using namespace oracle::frozen;
    CHECK(v.entries(0, 0) == doctest::Approx(c * contact_d0 * contact_d0).epsilon(1e-13));
    CHECK(v.entries(0, 1) == doctest::Approx(c * contact_d0 * contact_d1).epsilon(1e-13));
    CHECK(v.entries(2, 2) == doctest::Approx(c * contact_d2 * contact_d2).epsilon(1e-13));
    CHECK(v.quadrature_order == 0);  // no quadrature involved
    // rank one: every 2x2 minor vanishes
    const double minor = v.entries(0, 0) * v.entries(1, 1) - v.entries(0, 1) * v.entries(1, 0);
    CHECK(std::abs(minor) < 1e-16);

    const RadialBasis bl(osc, 1, 3, 23);
    CHECK_THROWS_AS(matrix_elements(bl, Potential::contact(gc)), std::invalid_argument);
}

TEST_CASE("order-doubling adequacy flag") {
    // narrow gaussian on a short rule: flagged; plain case: clean
    const RadialBasis ok(osc, 0, 8, 28);
    const InteractionMatrix good = matrix_elements(ok, Potential::gaussian(0.1, 1.0));
    CHECK(good.quadrature_adequate);
    CHECK(good.refinement_delta < 1e-9);

    const InteractionMatrix bad = matrix_elements(ok, Potential::gaussian(0.1, 0.5));
    CHECK_FALSE(bad.quadrature_adequate);
    CHECK(bad.refinement_delta > 1e-9);

    // the same narrow shape on a much longer rule becomes adequate
    const RadialBasis deep(osc, 0, 8, 120);
    const InteractionMatrix fixed = matrix_elements(deep, Potential::gaussian(0.1, 0.5));
    CHECK(fixed.quadrature_adequate);
}

TEST_CASE("potential parameter validation") {
    CHECK_THROWS_AS(Potential::gaussian(0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Potential::gaussian(0.1, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(Potential::square_well(0.1, 0.0), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Potential::gaussian(inf, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Potential::contact(inf), std::invalid_argument);
}
