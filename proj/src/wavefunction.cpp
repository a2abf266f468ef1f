#include "trapbose/wavefunction.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "trapbose/format.hpp"

namespace trapbose {

std::vector<double> uniform_grid(int points, double rmax) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    if (!(rmax > 0.0)) throw std::invalid_argument("uniform_grid: rmax must be positive");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = rmax * i / (points - 1);
    return g;
}

RadialFunction reconstruct(const SpectralSolution& sol, const RadialBasis& basis,
                           const std::vector<double>& grid) {
    if (sol.coefficients.size() != basis.size())
        throw std::invalid_argument("reconstruct: coefficient vector does not match basis size");
    if (sol.l != basis.angular_momentum())
        throw std::invalid_argument("reconstruct: solution channel does not match basis");
    if (grid.size() < 2 || grid.front() != 0.0)
        throw std::invalid_argument("reconstruct: grid must start at r=0 with at least 2 points");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("reconstruct: grid must be strictly ascending");

    RadialFunction f;
    f.grid = Eigen::Map<const Eigen::VectorXd>(grid.data(), static_cast<long>(grid.size()));
    f.samples.setZero(f.grid.size());
    f.n1 = sol.n1;
    f.l = sol.l;
    f.energy = sol.energy;
    f.gaussian_exponent = basis.nu();
    for (long i = 0; i < f.grid.size(); ++i) {
        double u = 0.0;
        for (int n = 0; n < basis.size(); ++n) {
            const double k = sol.coefficients[n];
            if (k != 0.0) u += k * basis.eval_radial(n, f.grid[i]);
        }
        f.samples[i] = u;
    }
    return f;
}

int count_nodes(const RadialFunction& f, double tol) {
    int nodes = 0;
    int prev = 0;
    for (long i = 1; i < f.grid.size(); ++i) {
        const double u = f.samples[i];
        if (std::abs(u) <= tol) continue;
        const int s = u > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) ++nodes;
        prev = s;
    }
    return nodes;
}

namespace {

double trapezoid_moment(const RadialFunction& f, int p) {
    double sum = 0.0;
    for (long i = 1; i < f.grid.size(); ++i) {
        const double h = f.grid[i] - f.grid[i - 1];
        const double fa = f.samples[i - 1] * f.samples[i - 1] * std::pow(f.grid[i - 1], p);
        const double fb = f.samples[i] * f.samples[i] * std::pow(f.grid[i], p);
        sum += 0.5 * h * (fa + fb);
    }
    return sum;
}

// Gaussian-decay bound on the lost tail: with u^2 ~ C e^{-nu r^2} past the
// grid edge, int_R^inf u^2 r^p dr <~ u(R)^2 R^{p-1} / nu. Safety factor 2.
double tail_estimate(const RadialFunction& f, int p) {
    const long g = f.grid.size();
    const double rend = f.grid[g - 1];
    double uend = 0.0;
    for (long i = std::max<long>(0, g - 4); i < g; ++i)
        uend = std::max(uend, std::abs(f.samples[i]));
    const double nu = f.gaussian_exponent > 0.0 ? f.gaussian_exponent : 1.0;
    return 2.0 * uend * uend * std::pow(rend, p - 1) / nu;
}

} // namespace

MomentResult observable_moments(const RadialFunction& f, const std::vector<int>& powers) {
    MomentResult m;
    m.values.reserve(powers.size());
    m.tail_bound.reserve(powers.size());
    for (int p : powers) {
        if (p < 0)
            throw std::invalid_argument("observable_moments: negative powers are not integrable at r=0 "
                                        "on a uniform grid");
        m.values.push_back(trapezoid_moment(f, p));
        m.tail_bound.push_back(tail_estimate(f, p));
        if (m.tail_bound.back() > 1e-8) m.truncated = true;
    }
    return m;
}

double normalization_defect(const RadialFunction& f) {
    return std::abs(trapezoid_moment(f, 0) - 1.0);
}

void export_csv(const RadialFunction& f, std::ostream& os) {
    os << "r,u\n";
    for (long i = 0; i < f.grid.size(); ++i)
        os << fmt17(f.grid[i]) << ',' << fmt17(f.samples[i]) << '\n';
}

} // namespace trapbose
