#include <doctest/doctest.h>

#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "trapbose/wavefunction.hpp"

using trapbose::assemble;
using trapbose::find_levels;
using trapbose::matrix_elements;
using trapbose::Potential;
using trapbose::RadialBasis;
using trapbose::reconstruct;
using trapbose::TrapModel;
using trapbose::uniform_grid;

namespace {

const TrapModel osc = TrapModel::oscillator_units();

trapbose::RadialFunction solve_and_sample(const Potential& p, int l, int size, int level,
                                          int points = 600, double rmax = 8.0) {
    const RadialBasis b(osc, l, size, size + 20);
    const auto sols = find_levels(assemble(b, matrix_elements(b, p)), level + 1);
    return reconstruct(sols[level], b, uniform_grid(points, rmax));
}

} // namespace

TEST_CASE("uniform grid endpoints and spacing") {
    const auto g = uniform_grid(5, 2.0);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 2.0);
    CHECK(g[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(uniform_grid(1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(uniform_grid(5, 0.0), std::invalid_argument);
}

TEST_CASE("zero interaction reproduces the bare mode pointwise") {
    const auto f = solve_and_sample(Potential::zero(), 0, 8, 0);
    CHECK(f.samples[0] == 0.0);
    CHECK(f.n1 == 0);
    CHECK(f.energy == 1.5);
    for (int i = 0; i < f.grid.size(); ++i) {
        const double expect = oracle::radial(0, 0, 1.0, f.grid[i]);
        CHECK(std::abs(f.samples[i] - expect) < 1e-13);
    }
}

TEST_CASE("node counts follow the dominant label") {
    CHECK(trapbose::count_nodes(solve_and_sample(Potential::zero(), 0, 6, 0)) == 0);
    CHECK(trapbose::count_nodes(solve_and_sample(Potential::zero(), 0, 6, 2)) == 2);
    CHECK(trapbose::count_nodes(solve_and_sample(Potential::zero(), 1, 6, 3)) == 3);
    // weak coupling only: stronger mixing drags high-n tail components above
    // the 1e-10 crossing floor, and those wiggles count by design
    CHECK(trapbose::count_nodes(solve_and_sample(Potential::gaussian(0.01, 1.0), 0, 20, 0)) == 0);
    CHECK(trapbose::count_nodes(solve_and_sample(Potential::gaussian(0.01, 1.0), 0, 20, 4)) == 4);
}

TEST_CASE("normalization holds on the default sampling window") {
    // [0, 8b] at 600 points: endpoint contributions are Gaussian-suppressed, so
    // trapezoid error is set by the interior O(h^2) term
    for (int level : {0, 1, 3}) {
        const auto f = solve_and_sample(Potential::gaussian(0.2, 1.0), 0, 20, level);
        CHECK(trapbose::normalization_defect(f) < 1e-6);
    }
}

TEST_CASE("size moment reacts to the interaction sign") {
    const auto bare = solve_and_sample(Potential::zero(), 0, 20, 0);
    const auto r2_bare = trapbose::observable_moments(bare, {2});
    CHECK(r2_bare.values[0] == doctest::Approx(1.5).epsilon(1e-6));

    const auto rep = solve_and_sample(Potential::gaussian(0.2, 1.0), 0, 20, 0);
    const auto att = solve_and_sample(Potential::gaussian(-0.2, 1.0), 0, 20, 0);
    CHECK(trapbose::observable_moments(rep, {2}).values[0] > 1.5);  // pushed outward
    CHECK(trapbose::observable_moments(att, {2}).values[0] < 1.5);  // pulled inward
}

TEST_CASE("moment bookkeeping: powers, tails, validation") {
    const auto wide = solve_and_sample(Potential::zero(), 0, 6, 0, 600, 8.0);
    const auto m = trapbose::observable_moments(wide, {0, 1, 2, 4});
    REQUIRE(m.values.size() == 4);
    CHECK(m.values[0] == doctest::Approx(1.0).epsilon(1e-6));  // p=0 is the norm
    CHECK_FALSE(m.truncated);

    const auto narrow = solve_and_sample(Potential::zero(), 0, 6, 0, 600, 3.0);
    CHECK(trapbose::observable_moments(narrow, {2}).truncated);  // tail cut at 3b

    CHECK_THROWS_AS(trapbose::observable_moments(wide, {-1}), std::invalid_argument);
}

TEST_CASE("reconstruct validates its grid") {
    const RadialBasis b(osc, 0, 4, 24);
    const auto sols = find_levels(assemble(b, matrix_elements(b, Potential::zero())), 1);
    CHECK_THROWS_AS(reconstruct(sols[0], b, {}), std::invalid_argument);
    CHECK_THROWS_AS(reconstruct(sols[0], b, {0.5, 1.0}), std::invalid_argument);   // no origin
    CHECK_THROWS_AS(reconstruct(sols[0], b, {0.0, 1.0, 0.5}), std::invalid_argument);

    const RadialBasis other(osc, 0, 5, 25);
    CHECK_THROWS_AS(reconstruct(sols[0], other, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("sampled level satisfies the radial equation") {
    // five-point second derivative on the CSV grid; residual floor is set by
    // FD truncation, well under the 1e-4 hbar-omega contract
    const auto f = solve_and_sample(Potential::gaussian(0.2, 1.0), 0, 20, 0);
    const RadialBasis b(osc, 0, 20, 40);
    const auto v = trapbose::project_radial(Potential::gaussian(0.2, 1.0), 0);

    const auto sols = find_levels(assemble(b, matrix_elements(b, Potential::gaussian(0.2, 1.0))), 1);
    auto u = [&](double r) {
        double s = 0.0;
        for (int n = 0; n < 20; ++n) s += sols[0].coefficients[n] * b.eval_radial(n, r);
        return s;
    };

    const double h = 5e-3;
    double umax = f.samples.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (double r : {0.3, 0.7, 1.1, 1.6, 2.2, 3.0}) {
        const double d2 = (-u(r + 2 * h) + 16 * u(r + h) - 30 * u(r) + 16 * u(r - h) -
                           u(r - 2 * h)) / (12 * h * h);
        // h_rel u = -(1/m) u'' + (k r^2) u with m = 2, k = 1/2 in trap units
        const double lhs = -d2 / 2.0 + 0.5 * r * r * u(r) + v(r) * u(r);
        worst = std::max(worst, std::abs(lhs - f.energy * u(r)));
    }
    CHECK(worst < 1e-4 * umax);
}

TEST_CASE("CSV export format") {
    const auto f = solve_and_sample(Potential::zero(), 0, 4, 0, 7, 3.0);
    std::ostringstream os;
    trapbose::export_csv(f, os);
    const std::string text = os.str();
    CHECK(text.rfind("r,u\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 7);
    CHECK(text.find("\n0,0\n") != std::string::npos);  // origin row is exact

    std::ostringstream again;
    trapbose::export_csv(f, again);
    CHECK(again.str() == text);
}
