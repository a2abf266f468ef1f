#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "trapbose/basis.hpp"
#include "trapbose/interaction.hpp"

namespace trapbose {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Signed determinant in log magnitude, immune to under/overflow across the
// pole structure.
struct DetValue {
    double sign = 0.0;     // -1, 0, +1
    double log_abs = 0.0;  // ln |det|, -inf at an exact zero
    double value() const { return sign * std::exp(log_abs); }
};

// Truncation of the homogeneous coefficient system to n2, n3 < N:
//
//   M(E)_{n2 n3} = delta_{n2 n3} - V_{n2 n3} / (E - E0_{n2})
//
// Perturbed energies are the E where det M(E) vanishes; they coincide with
// the eigenvalues of diag(E0) + V, which is the independent cross-check.
class SecularSystem {
public:
    SecularSystem(const RadialBasis& basis, const InteractionMatrix& v);

    int size() const { return static_cast<int>(e0_.size()); }
    int channel() const { return l_; }
    double energy_quantum() const { return hbar_omega_; }
    const Eigen::VectorXd& unperturbed_energies() const { return e0_; }
    const Eigen::MatrixXd& interaction() const { return v_; }
    bool interaction_is_zero() const { return v_zero_; }

    double pole_guard() const { return 1e-6 * hbar_omega_; }
    double distance_to_pole(double energy) const;

    Eigen::MatrixXd kernel_matrix(double energy) const;

    // det M(E) by pivoted LU; throws std::domain_error inside a guard band
    DetValue determinant(double energy) const;

private:
    int l_;
    double hbar_omega_;
    Eigen::VectorXd e0_;
    Eigen::MatrixXd v_;
    bool v_zero_;
};

inline SecularSystem assemble(const RadialBasis& basis, const InteractionMatrix& v) {
    return SecularSystem(basis, v);
}

struct SpectralSolution {
    int n1 = 0;                    // unperturbed label, by dominant |K_n|
    int l = 0;
    double energy = 0.0;
    double unperturbed_energy = 0.0;
    Eigen::VectorXd coefficients;  // K, ||K||_2 = 1, first nonzero entry > 0
    int truncation = 0;

    double det_residual = 0.0;     // |det M(E)| at the returned energy
    double oracle_gap = 0.0;       // |E - matching eigenvalue of diag(E0)+V|
    double eq24_gap = 0.0;         // shift-quotient consistency at the dominant index
    double eigen_residual = 0.0;   // ||(diag(E0)+V)K - E K||_inf
    bool degenerate_cluster = false;
};

struct FindLevelsOptions {
    int scan_segments = 24;   // sign-scan resolution per inter-pole interval
    int rescan_segments = 512;
    double cluster_tol = 1e-8;  // in units of hbar omega
};

// Lowest `count` roots of det M(E) = 0, each bracketed by sign scan between
// adjacent poles and refined by bisection then secant steps. Coefficient
// vectors come from the eigen-decomposition of diag(E0) + V, matched root by
// root. A zero interaction short-circuits to the unperturbed levels.
std::vector<SpectralSolution> find_levels(const SecularSystem& sys, int count,
                                          const FindLevelsOptions& opts = {});

// (V K)_n / K_n, the coefficient-space form of the shift quotient
//   int R_n v u dr / int R_n u dr  =  E - E0_n.
// Throws std::domain_error when K_n is too small to divide by.
double energy_shift_quotient(const SpectralSolution& sol, const RadialBasis& basis,
                             const InteractionMatrix& v, int n);

using BasisFactory = std::function<RadialBasis(int)>;

// Factory whose rungs share one quadrature rule, so a ladder's interaction
// matrices are nested principal submatrices and interlacing is exact.
BasisFactory shared_rule_factory(const TrapModel& trap, int l, int max_size);

struct ConvergenceTable {
    std::vector<int> sizes;
    Eigen::MatrixXd energies;  // row per rung, column per level
    Eigen::MatrixXd deltas;    // successive differences; NaN on the first rung
    std::vector<bool> converged;
    double epsilon = 1e-8;
};

ConvergenceTable convergence_sweep(const BasisFactory& make_basis, const Potential& p,
                                   const std::vector<int>& sizes, int levels,
                                   double epsilon = 1e-8);

} // namespace trapbose
