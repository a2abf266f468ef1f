#include "trapbose/greens.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "trapbose/format.hpp"

namespace trapbose {

GreensPartialSum::GreensPartialSum(const RadialBasis& basis, double energy, int terms)
    : basis_(basis), energy_(energy), terms_(terms) {
    if (terms < 1 || terms > basis.size())
        throw std::invalid_argument("greens partial sum: term count " + std::to_string(terms) +
                                    " outside [1, N=" + std::to_string(basis.size()) + "]");
    const double guard = 1e-6 * basis.energy_quantum();
    for (int n = 0; n < basis.size(); ++n)
        if (std::abs(energy - basis.unperturbed_energy(n)) < guard)
            throw std::domain_error("greens partial sum: energy sits on the unperturbed level n=" +
                                    std::to_string(n));
}

double GreensPartialSum::eval(double r, double rp) const {
    double sum = 0.0;
    for (int n = 0; n < terms_; ++n)
        sum += basis_.eval_radial(n, r) * basis_.eval_radial(n, rp) /
               (energy_ - basis_.unperturbed_energy(n));
    return sum;
}

Eigen::MatrixXd GreensPartialSum::resolvent_residual() const {
    // (E - H0) kills the denominators term by term, leaving the projector
    // sum_{n2<T} |R_n2><R_n2|; its matrix elements reduce to overlap products.
    const Eigen::MatrixXd s = basis_.overlap_matrix();
    Eigen::MatrixXd d = s.leftCols(terms_) * s.topRows(terms_);
    d.diagonal().array() -= 1.0;
    return d;
}

double fixed_point_residual(const SpectralSolution& sol, const RadialBasis& basis,
                            const InteractionMatrix& v) {
    if (v.l != sol.l || v.size != basis.size() || sol.coefficients.size() != basis.size())
        throw std::invalid_argument("fixed_point_residual: mismatched basis/interaction/solution");
    if (v.is_zero()) return 0.0;  // K_n (E - E0_n) = (V K)_n holds identically
    const double guard = 1e-6 * basis.energy_quantum();
    double worst = 0.0;
    for (int n = 0; n < basis.size(); ++n) {
        const double denom = sol.energy - basis.unperturbed_energy(n);
        if (std::abs(denom) < guard)
            throw std::domain_error("fixed_point_residual: solution energy within the pole guard of level n=" +
                                    std::to_string(n));
        const double vk = v.entries.row(n).dot(sol.coefficients);
        worst = std::max(worst, std::abs(sol.coefficients[n] - vk / denom));
    }
    return worst;
}

double fixed_point_residual(const SpectralSolution& sol, const GreensPartialSum& kernel,
                            const RadialBasis& basis, const InteractionMatrix& v) {
    if (kernel.terms() != basis.size())
        throw std::invalid_argument("fixed_point_residual: kernel truncation must equal the basis size");
    if (std::abs(kernel.energy() - sol.energy) >
        1e-12 * std::max(1.0, std::abs(sol.energy)))
        throw std::invalid_argument("fixed_point_residual: kernel energy does not match the solution");
    return fixed_point_residual(sol, basis, v);
}

void export_kernel_csv(const GreensPartialSum& kernel, std::ostream& os, int points,
                       double rmax) {
    if (points < 2) throw std::invalid_argument("export_kernel_csv: need at least 2 grid points");
    if (!(rmax > 0.0)) throw std::invalid_argument("export_kernel_csv: rmax must be positive");
    os << "r,rp,g\n";
    for (int i = 0; i < points; ++i) {
        const double r = rmax * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            const double rp = rmax * j / (points - 1);
            os << fmt17(r) << ',' << fmt17(rp) << ',' << fmt17(kernel.eval(r, rp)) << '\n';
        }
    }
}

} // namespace trapbose
