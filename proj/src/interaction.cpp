#include "trapbose/interaction.hpp"

#include <cmath>
#include <stdexcept>

namespace trapbose {

namespace {

constexpr double pi = 3.14159265358979323846;

// Pair sums over an arbitrary rule on x = nu r^2 with weight x^{l+1/2}e^{-x}.
// f is the unit-strength shape as a function of x.
Eigen::MatrixXd pair_sums_laguerre(const RadialBasis& basis, const GaussRule& rule,
                                   const std::function<double(double)>& f_of_x) {
    const int n_states = basis.size();
    const int q = static_cast<int>(rule.nodes.size());
    const double alpha = basis.angular_momentum() + 0.5;
    const double scale = 1.0 / (2.0 * std::pow(basis.nu(), basis.angular_momentum() + 1.5));

    Eigen::MatrixXd samples(n_states, q);
    for (int i = 0; i < q; ++i) {
        const double x = rule.nodes[i];
        double pm = 0.0, p = 1.0;
        samples(0, i) = basis.norm_constant(0);
        for (int n = 0; n + 1 < n_states; ++n) {
            const double pn = ((2.0 * n + 1.0 + alpha - x) * p - (n + alpha) * pm) / (n + 1.0);
            pm = p;
            p = pn;
            samples(n + 1, i) = basis.norm_constant(n + 1) * p;
        }
    }

    Eigen::VectorXd fw(q);
    for (int i = 0; i < q; ++i)
        fw[i] = rule.weights[i] * scale * f_of_x(rule.nodes[i]);

    Eigen::MatrixXd v(n_states, n_states);
    for (int m = 0; m < n_states; ++m)
        for (int n = 0; n <= m; ++n) {
            double acc = 0.0;
            for (int i = 0; i < q; ++i)
                acc += fw[i] * samples(m, i) * samples(n, i);
            v(m, n) = v(n, m) = acc;
        }
    return v;
}

// Pair sums over a finite-interval rule in r; used where the potential has
// compact support and the half-line rule cannot resolve the edge.
Eigen::MatrixXd pair_sums_interval(const RadialBasis& basis, const GaussRule& rule) {
    const int n_states = basis.size();
    const int q = static_cast<int>(rule.nodes.size());
    const int l = basis.angular_momentum();
    const double alpha = l + 0.5;
    const double nu = basis.nu();

    Eigen::MatrixXd samples(n_states, q);  // R_n(r_j)
    for (int j = 0; j < q; ++j) {
        const double r = rule.nodes[j];
        const double x = nu * r * r;
        const double envelope = std::exp(-0.5 * x) * std::pow(r, l + 1);
        double pm = 0.0, p = 1.0;
        samples(0, j) = basis.norm_constant(0) * envelope;
        for (int n = 0; n + 1 < n_states; ++n) {
            const double pn = ((2.0 * n + 1.0 + alpha - x) * p - (n + alpha) * pm) / (n + 1.0);
            pm = p;
            p = pn;
            samples(n + 1, j) = basis.norm_constant(n + 1) * envelope * p;
        }
    }

    Eigen::MatrixXd v(n_states, n_states);
    for (int m = 0; m < n_states; ++m)
        for (int n = 0; n <= m; ++n) {
            double acc = 0.0;
            for (int j = 0; j < q; ++j)
                acc += rule.weights[j] * samples(m, j) * samples(n, j);
            v(m, n) = v(n, m) = acc;
        }
    return v;
}

double matrix_delta(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

} // namespace

InteractionMatrix matrix_elements(const RadialBasis& basis, const Potential& p,
                                  const MatrixElementOptions& opts) {
    p.validate();

    InteractionMatrix out;
    out.l = basis.angular_momentum();
    out.size = basis.size();
    out.potential = p;
    out.quadrature_order = basis.quadrature_order();

    if (p.is_zero()) {
        out.entries = Eigen::MatrixXd::Zero(basis.size(), basis.size());
        return out;
    }

    const double hw = basis.energy_quantum();

    switch (p.shape) {
    case PotentialShape::gaussian: {
        // exp(-r^2/(sigma b)^2) = exp(-x/sigma^2) on the rule's own variable
        const double inv_s2 = 1.0 / (p.range * p.range);
        const auto shape = [inv_s2](double x) { return std::exp(-x * inv_s2); };

        const GaussRule base = gauss_generalized_laguerre(
            basis.quadrature_order(), basis.angular_momentum() + 0.5);
        const GaussRule fine = gauss_generalized_laguerre(
            2 * basis.quadrature_order(), basis.angular_momentum() + 0.5);
        const Eigen::MatrixXd v0 = pair_sums_laguerre(basis, base, shape);
        const Eigen::MatrixXd v1 = pair_sums_laguerre(basis, fine, shape);

        out.entries = (p.strength * hw) * v0;
        out.refinement_delta = matrix_delta(v1, v0);
        out.quadrature_adequate = out.refinement_delta <= opts.adequacy_tol;
        break;
    }
    case PotentialShape::square_well: {
        const double edge = p.radius * basis.length_scale();
        const int order = std::max(48, 2 * basis.size() + basis.angular_momentum() + 40);
        const Eigen::MatrixXd v0 =
            pair_sums_interval(basis, gauss_legendre_on(order, 0.0, edge));
        const Eigen::MatrixXd v1 =
            pair_sums_interval(basis, gauss_legendre_on(2 * order, 0.0, edge));

        out.entries = (p.depth * hw) * v0;
        out.quadrature_order = order;
        out.refinement_delta = matrix_delta(v1, v0);
        out.quadrature_adequate = out.refinement_delta <= opts.adequacy_tol;
        break;
    }
    case PotentialShape::contact: {
        if (basis.angular_momentum() != 0)
            throw std::invalid_argument(
                "matrix_elements: contact potential requires the l = 0 channel");
        const double b = basis.length_scale();
        const double gc = p.coupling * hw * b * b * b;
        Eigen::VectorXd d(basis.size());
        for (int n = 0; n < basis.size(); ++n)
            d[n] = basis.radial_derivative_origin(n);
        out.entries = (gc / (4.0 * pi)) * (d * d.transpose());
        out.quadrature_order = 0;  // closed form
        break;
    }
    }
    return out;
}

} // namespace trapbose
