// units.hpp - internal unit system and physical constants
//
// Energies in meV, angular frequencies in rad/us, lengths in nm, time in us,
// rates in MHz (1/us). Every conversion between the quoted energies and the
// working frequencies goes through hbar below.

#pragma once

#include <complex>
#include <numbers>

namespace magnon {

using cplx = std::complex<double>;

namespace units {

inline constexpr double pi = std::numbers::pi;

/// Reduced Planck constant, meV * us.
inline constexpr double hbar_mev_us = 6.582119569e-7;
/// Speed of light, nm / us.
inline constexpr double c_nm_per_us = 2.99792458e11;
/// Fine-structure constant (CODATA 2018).
inline constexpr double alpha = 7.2973525693e-3;
/// Electron rest energy, meV.
inline constexpr double electron_rest_mev = 510998.95000e3;
/// hbar * c in meV * nm.
inline constexpr double hbar_c_mev_nm = hbar_mev_us * c_nm_per_us;

constexpr double omega_from_mev(double energy_mev) { return energy_mev / hbar_mev_us; }
constexpr double mev_from_omega(double omega) { return omega * hbar_mev_us; }

/// Photon energy (meV) of a vacuum wavelength given in mm.
constexpr double mev_from_wavelength_mm(double lambda_mm) {
    return 2.0 * pi * hbar_c_mev_nm / (lambda_mm * 1e6);
}

/// Vacuum wavenumber k0 = omega / c in 1/nm.
constexpr double vacuum_wavenumber(double omega) { return omega / c_nm_per_us; }

}  // namespace units
}  // namespace magnon
