#include "trapbose/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trapbose {

namespace {

// Orthonormal polynomial value p_Q(x) together with its derivative and the
// Christoffel sum s = sum_{k<Q} p_k(x)^2. Values are rescaled on the fly so
// the running pair never overflows; the returned scale exponent applies to
// p and dp only (the sum is accumulated in absolute scale while it fits).
struct RecurrenceState {
    double p;      // p_Q(x) * 2^{-shift}
    double dp;     // p_Q'(x) * 2^{-shift}
    double sum;    // sum_{k<Q} p_k(x)^2, saturates at huge values
    int shift;     // power-of-two exponent carried out of p, dp
};

RecurrenceState evaluate(int order, double x,
                         const std::function<double(int)>& diag,
                         const std::function<double(int)>& offdiag,
                         double total_mass) {
    constexpr double rescale_by = 0x1p-512;
    constexpr int rescale_shift = 512;

    double pm = 0.0, dpm = 0.0;
    double p = 1.0 / std::sqrt(total_mass);
    double dp = 0.0;
    double sum = p * p;
    int shift = 0;
    for (int k = 0; k < order; ++k) {
        const double bk = (k > 0) ? offdiag(k) : 0.0;
        const double bk1 = offdiag(k + 1);
        const double pn = ((x - diag(k)) * p - bk * pm) / bk1;
        const double dpn = ((x - diag(k)) * dp + p - bk * dpm) / bk1;
        pm = p; dpm = dp;
        p = pn; dp = dpn;
        if (k + 1 < order) {
            const double term = std::ldexp(p, shift);
            sum += term * term; // saturates to inf past the representable range
        }
        if (std::abs(p) > 1e150) {
            pm *= rescale_by; dpm *= rescale_by;
            p *= rescale_by; dp *= rescale_by;
            shift += rescale_shift;
        }
    }
    return {p, dp, sum, shift};
}

} // namespace

GaussRule golub_welsch(int order,
                       const std::function<double(int)>& diag,
                       const std::function<double(int)>& offdiag,
                       double total_mass) {
    if (order < 1)
        throw std::invalid_argument("golub_welsch: order must be >= 1");

    Eigen::VectorXd d(order), e(order > 1 ? order - 1 : 1);
    for (int k = 0; k < order; ++k) d[k] = diag(k);
    for (int k = 1; k < order; ++k) e[k - 1] = offdiag(k);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e.head(std::max(order - 1, 0)),
                                  Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("golub_welsch: tridiagonal eigensolve failed at order " +
                                 std::to_string(order));

    GaussRule rule;
    rule.nodes = solver.eigenvalues();
    rule.weights.resize(order);

    for (int i = 0; i < order; ++i) {
        double x = rule.nodes[i];
        // Newton polish on p_Q; the eigenvalue is already close so two to
        // three steps reach the limiting accuracy of the recurrence.
        for (int it = 0; it < 3; ++it) {
            const auto st = evaluate(order, x, diag, offdiag, total_mass);
            if (st.dp == 0.0) break;
            const double step = st.p / st.dp;
            if (!std::isfinite(step)) break;
            x -= step;
            if (std::abs(step) <= 1e-15 * (std::abs(x) + 1.0)) break;
        }
        const auto st = evaluate(order, x, diag, offdiag, total_mass);
        const double residual = std::abs(st.p) /
            (std::abs(st.dp) > 0 ? std::abs(st.dp) : 1.0);
        if (!(residual <= 1e-10 * (std::abs(x) + 1.0)))
            throw std::runtime_error("golub_welsch: node refinement did not converge at index " +
                                     std::to_string(i));
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / st.sum;
    }
    return rule;
}

GaussRule gauss_generalized_laguerre(int order, double alpha) {
    if (alpha <= -1.0)
        throw std::invalid_argument("gauss_generalized_laguerre: alpha must exceed -1");
    const double mu0 = std::tgamma(alpha + 1.0);
    return golub_welsch(
        order,
        [alpha](int k) { return 2.0 * k + alpha + 1.0; },
        [alpha](int k) { return std::sqrt(k * (k + alpha)); },
        mu0);
}

GaussRule gauss_legendre(int order) {
    return golub_welsch(
        order,
        [](int) { return 0.0; },
        [](int k) { return k / std::sqrt(4.0 * k * k - 1.0); },
        2.0);
}

GaussRule gauss_legendre_on(int order, double a, double b) {
    if (!(b > a))
        throw std::invalid_argument("gauss_legendre_on: need b > a");
    GaussRule rule = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    rule.nodes = (rule.nodes.array() * half + mid).matrix();
    rule.weights *= half;
    return rule;
}

} // namespace trapbose
