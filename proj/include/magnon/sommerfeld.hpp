// sommerfeld.hpp - adaptive quadrature of Sommerfeld-type integrals over real k_rho
//
// The half line is split into three segments, each with its own substitution:
//   [0, k1]        k = k1 sin(t)   removes the 1/kz1 endpoint singularity from below
//   (k1, 2 k1]     k = k1 cosh(u)  removes it from above (kz1 = i k1 sinh u)
//   [2 k1, k_max]  log-spaced panels, k_max = k_max_factor / (2 z)
// Panels are refined globally by Gauss-Kronrod error until the tolerance is met.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

#include "magnon/layered.hpp"
#include "magnon/units.hpp"

namespace magnon {

struct QuadratureSpec {
    double rel_tol{1e-8};
    double abs_tol{1e-30};
    double k_max_factor{60.0};
    std::size_t max_panels{10000};

    void validate() const;
    /// Evanescent cutoff k_max = k_max_factor / (2 height).
    double k_max(double height) const { return k_max_factor / (2.0 * height); }
};

/// Panel budget exhausted before the requested tolerance was met.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(cplx estimate, double error_bound);

    cplx estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    cplx estimate_;
    double error_bound_;
};

/// Called with k_rho and the matching cladding kz1 = sqrt(k1^2 - k_rho^2) (Im >= 0), which
/// the substitutions supply without cancellation near the light line.
using SommerfeldIntegrand = std::function<cplx(double k_rho, cplx kz1)>;

struct SommerfeldResult {
    cplx value{};
    double error{};
    std::size_t panels{};
};

/// Integral of f over [0, k_max]. `breakpoints` (1/nm) are added as initial panel
/// edges above 2 k1, e.g. the real parts of nearby slab poles. Throws NonConvergence.
SommerfeldResult integrate_sommerfeld(const SommerfeldIntegrand& f, double k1, double height,
                                      const QuadratureSpec& spec,
                                      std::span<const double> breakpoints = {});

/// Combined reflection R = R_N - (kz1^2 / k1^2) R_M seen by an in-plane magnetic dipole.
cplx dipole_reflection(const MagnetParams& p, double omega, double k_rho, double thickness);

/// Im[i (k_rho k1^2 / kz1) R exp(2 i kz1 z)], the k_rho-resolved spin-flip integrand.
double integrand_dispersion_density(const MagnetParams& p, double omega, double k_rho, double thickness,
                                    double height = 1.0);

}  // namespace magnon
