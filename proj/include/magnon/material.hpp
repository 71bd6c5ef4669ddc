// material.hpp - Lorentz-oscillator permeability of the antiferromagnetic slab

#pragma once

#include <stdexcept>
#include <utility>

#include "magnon/units.hpp"

namespace magnon {

/// Resonance energy fixed by the 1.117 mm MnF2 antiferromagnetic resonance line.
inline constexpr double default_resonance_mev = units::mev_from_wavelength_mm(1.117);
/// Energy at which the lossless Re mu_x crosses -1 (surface polariton condition).
inline constexpr double default_polariton_mev = 1.114;
inline constexpr double default_damping_mev = 8.7e-5;

/// Returns the Lorentz numerator (rad^2/us^2) making the lossless permeability equal
/// to -1 at hbar_omegaM. Throws std::invalid_argument unless hbar_omegaM > hbar_omega0 > 0.
double calibrate_strength(double hbar_omega0_mev, double hbar_omegaM_mev);

/// Permeability model of the slab plus the cladding constants.
///
/// `strength` lumps 2 mu0 g B_A M_S into one scalar; the individual microscopic
/// fields never enter the model separately.
struct MagnetParams {
    double omega0{units::omega_from_mev(default_resonance_mev)};
    double gamma{units::omega_from_mev(default_damping_mev)};
    double strength{calibrate_strength(default_resonance_mev, default_polariton_mev)};
    double eps2{1.0};
    double mu1{1.0};
    double eps1{1.0};

    /// Throws std::invalid_argument on violated invariants.
    void validate() const;

    double omega0_mev() const { return units::mev_from_omega(omega0); }
    double gamma_mev() const { return units::mev_from_omega(gamma); }
    /// strength in meV^2 (i.e. (hbar)^2 * strength).
    double strength_mev2() const { return strength * units::hbar_mev_us * units::hbar_mev_us; }

    /// Same material with the magnetic response switched off.
    MagnetParams vacuum() const {
        MagnetParams p = *this;
        p.strength = 0.0;
        return p;
    }
};

/// In-plane diagonal permeability mu_x = mu_y = 1 + strength / (omega0^2 - (omega + i gamma)^2).
cplx permeability_xx(const MagnetParams& p, double omega);

/// Out-of-plane permeability; the uniaxial axis carries no magnetic response.
constexpr cplx permeability_zz() { return {1.0, 0.0}; }

/// Interval (omega_lo, omega_hi) on which Re mu_x < 0, located by bisection.
/// Returns {0, 0} when the band is empty (e.g. strength = 0).
std::pair<double, double> negative_mu_band(const MagnetParams& p);

}  // namespace magnon
