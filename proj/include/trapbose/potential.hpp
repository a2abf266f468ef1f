#pragma once

#include <optional>
#include <string>

namespace trapbose {

enum class PotentialShape { gaussian, square_well, contact };

// Central effective two-body interaction v(r). Parameters are expressed in
// trap units: energies in hbar omega, lengths in b = 1/sqrt(nu). Conversion
// happens where a potential meets a basis.
struct Potential {
    PotentialShape shape = PotentialShape::gaussian;

    double strength = 0.0;  // gaussian height g  [hbar omega]
    double range = 1.0;     // gaussian width sigma  [b]
    double depth = 0.0;     // square well V0, signed  [hbar omega]
    double radius = 1.0;    // square well edge a  [b]
    double coupling = 0.0;  // contact g_c  [hbar omega b^3]

    std::optional<double> scattering_length;  // informational only  [b]

    static Potential gaussian(double g, double sigma);
    static Potential square_well(double v0, double a);
    static Potential contact(double gc);
    static Potential zero() { return gaussian(0.0, 1.0); }

    bool is_zero() const;
    std::string shape_name() const;
    void validate() const;  // throws std::invalid_argument
};

// v_{l}(r): the radial projection of a central v is v(r) itself, for every
// l, because the angular integral of |Y_lm|^2 is one. Evaluable at any
// r >= 0, both in trap units.
class ProjectedPotential {
public:
    ProjectedPotential(const Potential& p, int l);

    double operator()(double r) const;
    int channel() const { return l_; }

private:
    Potential p_;
    int l_;
};

// throws for the contact shape, which has no pointwise projection
ProjectedPotential project_radial(const Potential& p, int l);

} // namespace trapbose
