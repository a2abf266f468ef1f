#pragma once

#include <Eigen/Dense>

#include "trapbose/basis.hpp"
#include "trapbose/potential.hpp"

namespace trapbose {

// V_mn = int_0^inf R_ml(r) v(r) R_nl(r) dr, in the energy units of the
// basis. Exactly symmetric: each unordered pair is computed once.
struct InteractionMatrix {
    int l = 0;
    int size = 0;
    Eigen::MatrixXd entries;
    Potential potential;
    int quadrature_order = 0;    // order of the rule actually used
    double refinement_delta = 0; // max relative entry change on order doubling
    bool quadrature_adequate = true;

    bool is_zero() const {
        return size == 0 || (entries.minCoeff() == 0.0 && entries.maxCoeff() == 0.0);
    }
};

struct MatrixElementOptions {
    double adequacy_tol = 1e-9;  // relative, flag when doubling moves more
};

// Smooth shapes integrate on the basis rule (doubling the order once to
// measure adequacy). The square well integrates on a Gauss-Legendre rule
// over its support, where the integrand is entire. The contact shape with
// l = 0 uses the closed form (g_c/4pi) R'_m(0) R'_n(0) and no quadrature.
InteractionMatrix matrix_elements(const RadialBasis& basis, const Potential& p,
                                  const MatrixElementOptions& opts = {});

} // namespace trapbose
