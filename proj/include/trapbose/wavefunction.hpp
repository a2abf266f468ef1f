#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "trapbose/basis.hpp"
#include "trapbose/secular.hpp"

namespace trapbose {

// Sampled radial function u(r) = sum_n K_n R_nl(r); unit L2 norm because the
// coefficient vector is unit and the basis orthonormal.
struct RadialFunction {
    Eigen::VectorXd grid;     // ascending, grid[0] = 0
    Eigen::VectorXd samples;  // u at grid points
    int n1 = 0;
    int l = 0;
    double energy = 0.0;
    double gaussian_exponent = 0.0;  // nu of the generating basis, for tail estimates
};

struct MomentResult {
    std::vector<double> values;     // <r^p> per requested power
    std::vector<double> tail_bound; // crude Gaussian-decay estimate of the truncated tail
    bool truncated = false;         // any tail bound above 1e-8
};

std::vector<double> uniform_grid(int points, double rmax);

RadialFunction reconstruct(const SpectralSolution& sol, const RadialBasis& basis,
                           const std::vector<double>& grid);

// Sign changes on (0, rmax); |u| below `tol` is treated as zero so tail noise
// never counts.
int count_nodes(const RadialFunction& f, double tol = 1e-10);

// Trapezoid moments <r^p> = int u^2 r^p dr on the stored grid.
MomentResult observable_moments(const RadialFunction& f, const std::vector<int>& powers);

// |int u^2 dr - 1| by trapezoid on the stored grid.
double normalization_defect(const RadialFunction& f);

// CSV with header "r,u", 17 significant digits.
void export_csv(const RadialFunction& f, std::ostream& os);

} // namespace trapbose
