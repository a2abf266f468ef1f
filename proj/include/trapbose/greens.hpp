#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "trapbose/basis.hpp"
#include "trapbose/interaction.hpp"
#include "trapbose/secular.hpp"

namespace trapbose {

// Partial-sum trap Green's function over the first T radial modes,
//
//   g_E(r, r') = sum_{n < T} R_n(r) R_n(r') / (E - E0_n),
//
// defined for E off the unperturbed grid. Used as a resolvent diagnostic,
// not on the solve path.
class GreensPartialSum {
public:
    GreensPartialSum(const RadialBasis& basis, double energy, int terms);

    double energy() const { return energy_; }
    int terms() const { return terms_; }
    const RadialBasis& basis() const { return basis_; }

    double eval(double r, double rp) const;

    // Coefficient-space identity check: [(E - H0) g]_{mn} - delta_{mn}
    // restricted to the first T modes; exact zero there with exact overlaps.
    Eigen::MatrixXd resolvent_residual() const;

private:
    RadialBasis basis_;
    double energy_;
    int terms_;
};

// ||K_n - (V K)_n / (E - E0_n)||_inf over n < N: how well the solved level
// satisfies the integral-equation fixed point. Zero interaction is exact.
double fixed_point_residual(const SpectralSolution& sol, const RadialBasis& basis,
                            const InteractionMatrix& v);
double fixed_point_residual(const SpectralSolution& sol, const GreensPartialSum& kernel,
                            const RadialBasis& basis, const InteractionMatrix& v);

// Grid dump of the kernel on [0, rmax]^2, CSV header "r,rp,g".
void export_kernel_csv(const GreensPartialSum& kernel, std::ostream& os, int points,
                       double rmax);

} // namespace trapbose
