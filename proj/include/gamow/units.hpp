#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "gamow/error.hpp"

// Internal units throughout: energy in eV, length in nm, time in fs.

namespace gamow {

using cplx = std::complex<double>;

inline constexpr double hbar_eV_fs = 0.6582119569;
/// hbar^2 / (2 m_e) in eV nm^2.
inline constexpr double hbar2_over_2me = 0.0380998;

class PhysicalSetup {
public:
    /// `mass` in units of the bare electron mass.
    explicit PhysicalSetup(double mass, double bare_kinetic_scale = hbar2_over_2me)
        : effective_mass_(mass), kinetic_scale_(bare_kinetic_scale / mass) {
        if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidSpec("effective mass must be positive");
        if (!(bare_kinetic_scale > 0.0)) throw InvalidSpec("kinetic scale must be positive");
    }

    double effective_mass() const noexcept { return effective_mass_; }
    double hbar() const noexcept { return hbar_eV_fs; }
    /// hbar^2 / (2m) in eV nm^2.
    double kinetic_scale() const noexcept { return kinetic_scale_; }
    /// hbar / (2m) in nm^2 / fs; the diffusion-like constant of the free propagator.
    double hbar_over_2m() const noexcept { return kinetic_scale_ / hbar_eV_fs; }

private:
    double effective_mass_;
    double kinetic_scale_;
};

/// E = hbar^2 k^2 / 2m split as (epsilon, Gamma) with E = epsilon - i Gamma / 2.
/// This is the only place the pole-to-energy map is written down.
struct ComplexEnergy {
    double epsilon;
    double gamma;
};

inline ComplexEnergy complex_energy(cplx k, const PhysicalSetup& setup) {
    const double a = k.real();
    const double b = -k.imag();
    return {setup.kinetic_scale() * (a * a - b * b), setup.kinetic_scale() * 4.0 * a * b};
}

}  // namespace gamow
