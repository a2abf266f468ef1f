#pragma once

#include <functional>

#include <Eigen/Dense>

#include "trapbose/quadrature.hpp"
#include "trapbose/trap.hpp"

namespace trapbose {

// Reduced radial oscillator functions for one angular-momentum channel,
//
//   R_nl(r) = N_nl exp(-nu r^2/2) r^{l+1} L_n^{(l+1/2)}(nu r^2),
//   E0_nl   = hbar omega (2n + l + 3/2),
//
// normalized in dr and positive near the origin. The attached quadrature
// rule lives on x = nu r^2 with weight x^{l+1/2} e^{-x}, which integrates
// pair products R_m R_n times a polynomial in x exactly.
//
// Immutable after construction; safe for shared concurrent reads.
class RadialBasis {
public:
    static constexpr int default_margin = 20;

    RadialBasis(const TrapModel& trap, int angular_momentum, int size,
                int quadrature_order);

    static RadialBasis with_default_rule(const TrapModel& trap, int l, int size) {
        return RadialBasis(trap, l, size, size + default_margin);
    }

    int angular_momentum() const { return l_; }
    int size() const { return size_; }
    int quadrature_order() const { return order_; }

    double nu() const { return nu_; }
    double length_scale() const { return 1.0 / std::sqrt(nu_); }
    double energy_quantum() const { return hbar_omega_; }

    // hbar omega (2n + l + 3/2), exact to one fused multiply-add
    double unperturbed_energy(int n) const;
    Eigen::VectorXd unperturbed_energies() const;

    // R_nl(r) by the three-term Laguerre recurrence
    double eval_radial(int n, double r) const;

    // R'_nl(0); nonzero only for l = 0, where it equals N_n L_n^{1/2}(0)
    double radial_derivative_origin(int n) const;

    double norm_constant(int n) const { return norm_[n]; }

    // quadrature rule on x = nu r^2
    const Eigen::VectorXd& nodes_x() const { return x_; }
    const Eigen::VectorXd& nodes_r() const { return r_; }
    // weight such that  int R_m R_n f dr = sum_i pair_weight[i] P_m(i) P_n(i) f(r_i)
    const Eigen::VectorXd& pair_weights() const { return pair_w_; }
    // P_n(i) = N_n L_n^{(l+1/2)}(x_i)
    const Eigen::MatrixXd& poly_samples() const { return samples_; }

    // int_0^inf R_m R_n f dr by the attached rule
    double pair_integral(int m, int n, const std::function<double(double)>& f) const;

    // Gram matrix by the attached rule; identity up to quadrature rounding
    Eigen::MatrixXd overlap_matrix() const;

private:
    void check_index(int n) const;

    int l_;
    int size_;
    int order_;
    double nu_;
    double hbar_omega_;
    Eigen::VectorXd norm_;      // N_n
    Eigen::VectorXd x_, r_;
    Eigen::VectorXd pair_w_;    // w_i / (2 nu^{l+3/2})
    Eigen::MatrixXd samples_;   // size x order
};

inline RadialBasis build_basis(const TrapModel& trap, int l, int size, int order) {
    return RadialBasis(trap, l, size, order);
}

} // namespace trapbose
