#include "trapbose/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trapbose {

namespace {

// L_n^{(alpha)}(x) by upward recurrence; exact at n = 0, 1.
double laguerre(int n, double alpha, double x) {
    if (n == 0) return 1.0;
    double pm = 1.0;
    double p = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double pn = ((2.0 * k + 1.0 + alpha - x) * p - (k + alpha) * pm) / (k + 1.0);
        pm = p;
        p = pn;
    }
    return p;
}

} // namespace

RadialBasis::RadialBasis(const TrapModel& trap, int angular_momentum, int size,
                         int quadrature_order)
    : l_(angular_momentum), size_(size), order_(quadrature_order),
      nu_(trap.gaussian_width()), hbar_omega_(trap.energy_quantum()) {
    if (l_ < 0)
        throw std::invalid_argument("RadialBasis: angular momentum must be >= 0");
    if (size_ < 1)
        throw std::invalid_argument("RadialBasis: size must be >= 1");
    if (order_ < size_)
        throw std::invalid_argument("RadialBasis: quadrature order " + std::to_string(order_) +
                                    " is below the basis size " + std::to_string(size_));

    const double alpha = l_ + 0.5;
    GaussRule rule = gauss_generalized_laguerre(order_, alpha);
    x_ = rule.nodes;
    r_ = (x_.array() / nu_).sqrt().matrix();
    pair_w_ = rule.weights / (2.0 * std::pow(nu_, l_ + 1.5));

    // N_n^2 = 2 nu^{l+3/2} n! / Gamma(n + l + 3/2), built by ratio so large
    // n never overflows the gamma function.
    norm_.resize(size_);
    norm_[0] = std::sqrt(2.0 * std::pow(nu_, l_ + 1.5) / std::tgamma(l_ + 1.5));
    for (int n = 1; n < size_; ++n)
        norm_[n] = norm_[n - 1] * std::sqrt(n / (n + alpha));

    samples_.resize(size_, order_);
    for (int i = 0; i < order_; ++i) {
        double pm = 0.0, p = 1.0;
        samples_(0, i) = norm_[0];
        for (int n = 0; n + 1 < size_; ++n) {
            const double pn =
                ((2.0 * n + 1.0 + alpha - x_[i]) * p - (n + alpha) * pm) / (n + 1.0);
            pm = p;
            p = pn;
            samples_(n + 1, i) = norm_[n + 1] * p;
        }
    }
}

void RadialBasis::check_index(int n) const {
    if (n < 0 || n >= size_)
        throw std::out_of_range("RadialBasis: radial quantum number " + std::to_string(n) +
                                " outside [0, " + std::to_string(size_ - 1) + "]");
}

double RadialBasis::unperturbed_energy(int n) const {
    check_index(n);
    return hbar_omega_ * (2.0 * n + l_ + 1.5);
}

Eigen::VectorXd RadialBasis::unperturbed_energies() const {
    Eigen::VectorXd e(size_);
    for (int n = 0; n < size_; ++n)
        e[n] = hbar_omega_ * (2.0 * n + l_ + 1.5);
    return e;
}

double RadialBasis::eval_radial(int n, double r) const {
    check_index(n);
    if (r < 0.0)
        throw std::invalid_argument("RadialBasis: r must be >= 0");
    if (r == 0.0) return 0.0;
    const double x = nu_ * r * r;
    return norm_[n] * std::exp(-0.5 * x) * std::pow(r, l_ + 1) *
           laguerre(n, l_ + 0.5, x);
}

double RadialBasis::radial_derivative_origin(int n) const {
    check_index(n);
    if (l_ != 0) return 0.0;
    // L_n^{1/2}(0) = Gamma(n + 3/2) / (n! Gamma(3/2)), by ratio
    double lag0 = 1.0;
    for (int k = 1; k <= n; ++k)
        lag0 *= (k + 0.5) / k;
    return norm_[n] * lag0;
}

double RadialBasis::pair_integral(int m, int n,
                                  const std::function<double(double)>& f) const {
    check_index(m);
    check_index(n);
    double acc = 0.0;
    for (int i = 0; i < order_; ++i)
        acc += pair_w_[i] * samples_(m, i) * samples_(n, i) * f(r_[i]);
    return acc;
}

Eigen::MatrixXd RadialBasis::overlap_matrix() const {
    Eigen::MatrixXd g(size_, size_);
    for (int m = 0; m < size_; ++m)
        for (int n = 0; n <= m; ++n) {
            double acc = 0.0;
            for (int i = 0; i < order_; ++i)
                acc += pair_w_[i] * samples_(m, i) * samples_(n, i);
            g(m, n) = g(n, m) = acc;
        }
    return g;
}

} // namespace trapbose
