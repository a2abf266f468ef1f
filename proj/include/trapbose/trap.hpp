#pragma once

#include <cmath>
#include <stdexcept>

namespace trapbose {

// Two identical bosons of mass m in a common isotropic trap of frequency
// omega, hbar = 1 throughout. After separating off the center of mass the
// relative motion is an oscillator with reduced mass mu = m/2.
class TrapModel {
public:
    TrapModel(double atom_mass, double trap_frequency)
        : m_(atom_mass), omega_(trap_frequency) {
        if (!(m_ > 0.0) || !std::isfinite(m_))
            throw std::invalid_argument("TrapModel: atom mass must be positive");
        if (!(omega_ > 0.0) || !std::isfinite(omega_))
            throw std::invalid_argument("TrapModel: trap frequency must be positive");
    }

    // mu = omega = 1, the internal working system (nu = 1, b = 1).
    static TrapModel oscillator_units() { return TrapModel(2.0, 1.0); }

    double atom_mass() const { return m_; }
    double trap_frequency() const { return omega_; }

    double reduced_mass() const { return m_ / 2.0; }
    double total_mass() const { return 2.0 * m_; }

    // k = mu omega^2 / 2 = m omega^2 / 4
    double spring_constant() const { return reduced_mass() * omega_ * omega_ / 2.0; }

    // nu = mu omega; Gaussian width parameter of the relative-motion states
    double gaussian_width() const { return reduced_mass() * omega_; }

    // b = 1/sqrt(nu)
    double length_scale() const { return 1.0 / std::sqrt(gaussian_width()); }

    // hbar omega
    double energy_quantum() const { return omega_; }

private:
    double m_;
    double omega_;
};

} // namespace trapbose
