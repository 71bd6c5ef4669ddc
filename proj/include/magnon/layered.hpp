// layered.hpp - plane-wave response of the cladding / AF slab / cladding stack
//
// Layer 1 is the cladding holding the emitters, layer 2 the AF slab of thickness D,
// layer 3 the cladding below (same constants as layer 1). The slab is treated as
// magnetically isotropic with mu = mu_x when forming propagation constants.

#pragma once

#include <vector>

#include "magnon/material.hpp"
#include "magnon/units.hpp"

namespace magnon {

/// Emitter/slab geometry; all lengths in nm.
struct StackGeometry {
    double thickness{10.0};   ///< D, slab thickness
    double height{10.0};      ///< z_SD, emitter height above the top interface
    double separation{0.0};   ///< rho, in-plane emitter separation (pair case)

    void validate() const;
};

/// M: transverse-electric wave functions (mu contrast); N: transverse-magnetic (eps contrast).
enum class Polarization { M, N };

/// Propagation constants of one in-plane wave vector at one frequency.
struct PlaneWaveState {
    double omega{};
    double k_rho{};
    double k1{};   ///< cladding wavenumber sqrt(eps1 mu1) omega / c
    cplx kz1{};
    cplx kz2{};
};

/// sqrt(eps mu omega^2/c^2 - k_rho^2) on the decaying branch: Im >= 0, and Re >= 0 when Im == 0.
cplx kz(double omega, cplx k_rho, cplx eps, cplx mu);
inline cplx kz(double omega, double k_rho, cplx eps, cplx mu) { return kz(omega, cplx{k_rho, 0.0}, eps, mu); }

/// Cladding wavenumber k1 in 1/nm.
double cladding_wavenumber(const MagnetParams& p, double omega);

PlaneWaveState plane_wave_state(const MagnetParams& p, double omega, double k_rho);

/// Single-interface reflection r12 from the cladding onto the slab.
cplx fresnel(const MagnetParams& p, double omega, cplx k_rho, Polarization pol);
inline cplx fresnel(const MagnetParams& p, double omega, double k_rho, Polarization pol) {
    return fresnel(p, omega, cplx{k_rho, 0.0}, pol);
}

struct Reflection {
    cplx value{};
    bool on_pole{false};  ///< |multiple-reflection denominator| < 1e-12
};

/// Generalized slab reflection R = r12 + t12 r23 t21 e / (1 - r21 r23 e), e = exp(2 i kz2 D).
Reflection generalized_reflection(const MagnetParams& p, double omega, cplx k_rho, double thickness,
                                  Polarization pol);
inline Reflection generalized_reflection(const MagnetParams& p, double omega, double k_rho,
                                         double thickness, Polarization pol) {
    return generalized_reflection(p, omega, cplx{k_rho, 0.0}, thickness, pol);
}

/// Both polarizations of the generalized reflection at one (omega, k_rho), sharing
/// the propagation constants.
struct SlabReflection {
    cplx kz1{};
    cplx r_m{};
    cplx r_n{};
};
SlabReflection slab_reflection(const MagnetParams& p, double omega, double k_rho, double thickness);

/// Slab response at one fixed frequency, caching mu_x and the wavenumbers for
/// repeated evaluation along k_rho.
class SlabAtFrequency {
public:
    SlabAtFrequency(const MagnetParams& p, double omega, double thickness);

    SlabReflection reflection(double k_rho) const;
    /// Same, with the cladding kz1 supplied by the caller (branch Im >= 0).
    SlabReflection reflection(double k_rho, cplx kz1) const;
    double k1() const { return k1_; }
    double omega() const { return omega_; }
    cplx mu2() const { return mu2_; }

private:
    MagnetParams params_;
    double omega_;
    double thickness_;
    double k1_;
    cplx k1_sq_;
    cplx k2_sq_;
    cplx mu2_;
};

/// Multiple-reflection denominator 1 - r^2 exp(2 i kz2 D) of the symmetric stack (pol M).
cplx slab_denominator(const MagnetParams& p, double omega, cplx k_rho, double thickness);

/// Single AF / cladding interface polariton k_MP = (omega/c) sqrt(mu1 mu_x / (mu1 + mu_x)), Re >= 0.
cplx single_interface_dispersion(const MagnetParams& p, double omega);

/// Sign of r_M exp(i kz2 D) at a slab pole. `plus` is the branch with mu_x < -mu1
/// (below the single-interface resonance), `minus` the branch with -mu1 < mu_x < 0.
enum class ModeParity { plus, minus };

struct SlabMode {
    cplx k_rho{};
    ModeParity parity{};
};

struct PoleSearch {
    double k_hi{1.0};          ///< upper end of the real seed scan, 1/nm
    int scan_points{4000};
    int max_iterations{100};
    double tolerance{1e-10};   ///< relative step size at convergence
};

/// Complex in-plane wave vectors of the guided slab modes (pol M), sorted by Re k.
/// Empty when no seed converges, e.g. for a non-magnetic slab.
std::vector<SlabMode> slab_mode_poles(const MagnetParams& p, double omega, double thickness,
                                      const PoleSearch& search = {});

/// Quasistatic 1/e depth of the mode intensity above the slab, 1 / (2 Re k). Re k must be > 0.
double penetration_depth(cplx k_mode);

}  // namespace magnon
