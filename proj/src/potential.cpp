#include "trapbose/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace trapbose {

Potential Potential::gaussian(double g, double sigma) {
    Potential p;
    p.shape = PotentialShape::gaussian;
    p.strength = g;
    p.range = sigma;
    p.validate();
    return p;
}

Potential Potential::square_well(double v0, double a) {
    Potential p;
    p.shape = PotentialShape::square_well;
    p.depth = v0;
    p.radius = a;
    p.validate();
    return p;
}

Potential Potential::contact(double gc) {
    Potential p;
    p.shape = PotentialShape::contact;
    p.coupling = gc;
    p.validate();
    return p;
}

bool Potential::is_zero() const {
    switch (shape) {
    case PotentialShape::gaussian: return strength == 0.0;
    case PotentialShape::square_well: return depth == 0.0;
    case PotentialShape::contact: return coupling == 0.0;
    }
    return false;
}

std::string Potential::shape_name() const {
    switch (shape) {
    case PotentialShape::gaussian: return "gaussian";
    case PotentialShape::square_well: return "square_well";
    case PotentialShape::contact: return "contact";
    }
    return "?";
}

void Potential::validate() const {
    switch (shape) {
    case PotentialShape::gaussian:
        if (!std::isfinite(strength))
            throw std::invalid_argument("potential: gaussian strength must be finite");
        if (!(range > 0.0) || !std::isfinite(range))
            throw std::invalid_argument("potential: gaussian range must be positive");
        break;
    case PotentialShape::square_well:
        if (!std::isfinite(depth))
            throw std::invalid_argument("potential: square well depth must be finite");
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw std::invalid_argument("potential: square well radius must be positive");
        break;
    case PotentialShape::contact:
        if (!std::isfinite(coupling))
            throw std::invalid_argument("potential: contact coupling must be finite");
        break;
    }
}

ProjectedPotential::ProjectedPotential(const Potential& p, int l) : p_(p), l_(l) {
    if (p.shape == PotentialShape::contact)
        throw std::invalid_argument(
            "project_radial: contact potential has no pointwise radial form");
    p_.validate();
}

double ProjectedPotential::operator()(double r) const {
    switch (p_.shape) {
    case PotentialShape::gaussian:
        return p_.strength * std::exp(-(r * r) / (p_.range * p_.range));
    case PotentialShape::square_well:
        return r < p_.radius ? p_.depth : 0.0;
    case PotentialShape::contact:
        break;
    }
    return 0.0;
}

ProjectedPotential project_radial(const Potential& p, int l) {
    return ProjectedPotential(p, l);
}

} // namespace trapbose
