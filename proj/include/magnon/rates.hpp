// rates.hpp - spin-flip and exchange rate spectra of in-plane magnetic dipoles above the slab
//
// Rates are returned normalized to the free-space rate Gamma_B (Purcell factors);
// multiply by gamma_free() for MHz. Only x-oriented transition dipoles are modelled.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "magnon/layered.hpp"
#include "magnon/material.hpp"
#include "magnon/sommerfeld.hpp"

namespace magnon {

struct SpinDefectParams {
    double hbar_omega1{1.1135};  ///< transition energy, meV
    double spin{0.5};            ///< S
    double g_factor{2.0};        ///< g_s

    void validate() const;
    double omega1() const { return units::omega_from_mev(hbar_omega1); }
};

/// Free-space magnetic-dipole rate mu0 S^2 (mu_B g)^2 omega^3 / (3 pi hbar c^3), in MHz.
double gamma_free(double omega, double spin, double g_factor);
inline double gamma_free(const SpinDefectParams& sd) { return gamma_free(sd.omega1(), sd.spin, sd.g_factor); }

/// Normalized spin-flip rate of one x-dipole at height geom.height above the slab:
/// sqrt(eps1 mu1) plus the reflected-field Sommerfeld integral. Throws NonConvergence.
double spin_flip_rate(double omega, const StackGeometry& geom, const MagnetParams& params,
                      const QuadratureSpec& spec = {});

/// Normalized exchange rate between two x-dipoles at equal height, separated by
/// geom.separation along x. Sign is free. Throws NonConvergence.
double exchange_rate(double omega, const StackGeometry& geom, const MagnetParams& params,
                     const QuadratureSpec& spec = {});

/// J1(x)/x and J2(x), with series expansions below x = 1e-4.
double bessel_j1_over_x(double x);
double bessel_j2(double x);

enum class RateKind { spin_flip, exchange };
std::string to_string(RateKind kind);

/// Tabulated rate on an ascending angular-frequency grid.
struct RateSpectrum {
    RateKind kind{RateKind::spin_flip};
    StackGeometry geometry{};
    std::vector<double> omega;       ///< rad/us, strictly ascending
    std::vector<double> normalized;  ///< Gamma / Gamma_B
    std::vector<double> free_rate;   ///< Gamma_B(omega), MHz
    std::vector<bool> converged;     ///< false where the quadrature hit its panel budget
    double vacuum_term{0.0};         ///< sqrt(eps1 mu1) for spin_flip, 0 for exchange

    std::size_t size() const { return omega.size(); }
    double physical(std::size_t i) const { return free_rate[i] * normalized[i]; }
    /// Physical rate with the flat free-space part removed.
    double scattered(std::size_t i) const { return free_rate[i] * (normalized[i] - vacuum_term); }
    bool all_converged() const;

    /// Wraps an already-physical spectrum (MHz) with no vacuum background.
    static RateSpectrum from_physical(RateKind kind, std::vector<double> omega, std::vector<double> mhz);
};

/// Uniform angular-frequency grid spanning [e_min, e_max] meV with `points` samples.
std::vector<double> energy_grid(double e_min_mev, double e_max_mev, std::size_t points);

/// Evaluates one spectrum over `omega` as a parallel map. Non-converged cells keep the
/// quadrature's best estimate and are flagged in `converged`.
RateSpectrum compute_spectrum(RateKind kind, const std::vector<double>& omega, const StackGeometry& geom,
                              const MagnetParams& params, const SpinDefectParams& sd,
                              const QuadratureSpec& spec = {}, unsigned workers = 1);

struct SweepAxes {
    std::vector<double> energy_mev;
    std::vector<double> height;
    std::vector<double> separation;
    std::vector<double> thickness;

    void validate() const;
    std::size_t cells() const { return energy_mev.size() * height.size() * separation.size() * thickness.size(); }
};

struct SweepRow {
    double energy_mev{};
    double height{};
    double separation{};
    double thickness{};
    double spin_flip{};  ///< normalized
    double exchange{};   ///< normalized
    double free_rate{};  ///< MHz
    bool converged{true};
};

/// Dense sweep; rows in lexicographic (energy, height, separation, thickness) order.
std::vector<SweepRow> sweep_rates(const SweepAxes& axes, const MagnetParams& params, const SpinDefectParams& sd,
                                  const QuadratureSpec& spec = {}, unsigned workers = 1);

}  // namespace magnon
