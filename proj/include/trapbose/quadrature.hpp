#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace trapbose {

// Gauss rule for a weight function with known Jacobi recurrence
//   b_{k+1} p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x)
// (orthonormal form). Nodes are eigenvalues of the symmetric tridiagonal
// Jacobi matrix, polished by Newton iteration on p_Q; weights come from
// the Christoffel function w_i = 1 / sum_{k<Q} p_k(x_i)^2, which stays
// accurate at tail nodes where eigenvector components underflow.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

GaussRule golub_welsch(int order,
                       const std::function<double(int)>& diag,
                       const std::function<double(int)>& offdiag,
                       double total_mass);

// weight x^alpha e^{-x} on [0, inf)
GaussRule gauss_generalized_laguerre(int order, double alpha);

// weight 1 on [-1, 1]
GaussRule gauss_legendre(int order);

// same rule mapped to [a, b]
GaussRule gauss_legendre_on(int order, double a, double b);

} // namespace trapbose
