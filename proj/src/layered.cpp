#include "magnon/layered.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace magnon {

void StackGeometry::validate() const {
    if (!(thickness > 0.0)) throw std::invalid_argument("geometry: thickness must be > 0");
    if (!(height > 0.0)) throw std::invalid_argument("geometry: height must be > 0");
    if (!(separation >= 0.0)) throw std::invalid_argument("geometry: separation must be >= 0");
}

cplx kz(double omega, cplx k_rho, cplx eps, cplx mu) {
    const double k0 = units::vacuum_wavenumber(omega);
    cplx q = std::sqrt(eps * mu * (k0 * k0) - k_rho * k_rho);
    if (q.imag() < 0.0 || (q.imag() == 0.0 && q.real() < 0.0)) q = -q;
    return q;
}

double cladding_wavenumber(const MagnetParams& p, double omega) {
    return std::sqrt(p.eps1 * p.mu1) * units::vacuum_wavenumber(omega);
}

PlaneWaveState plane_wave_state(const MagnetParams& p, double omega, double k_rho) {
    const cplx mu2 = permeability_xx(p, omega);
    return {omega, k_rho, cladding_wavenumber(p, omega), kz(omega, k_rho, p.eps1, p.mu1),
            kz(omega, k_rho, p.eps2, mu2)};
}

namespace {

// Reflection at an interface from medium a onto medium b.
cplx interface_reflection(Polarization pol, cplx kz_a, cplx kz_b, cplx eps_a, cplx mu_a, cplx eps_b,
                          cplx mu_b) {
    if (pol == Polarization::M) return (mu_b * kz_a - mu_a * kz_b) / (mu_b * kz_a + mu_a * kz_b);
    return (eps_b * kz_a - eps_a * kz_b) / (eps_b * kz_a + eps_a * kz_b);
}

// exp(z) - 1 without cancellation for small |z|.
cplx expm1(cplx z) {
    const double s = std::sin(0.5 * z.imag());
    return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

// (r12 + r23 e) / (1 + r12 r23 e) with e = 1 + em1; the numerator is grouped so
// that thin slabs (e -> 1, r23 = -r12) keep full relative accuracy.
cplx airy(cplx r12, cplx r23, cplx em1) {
    return ((r12 + r23) + r23 * em1) / (1.0 + r12 * r23 * (1.0 + em1));
}

struct StackCoefficients {
    cplx r12;
    cplx r23;
    cplx em1;  // exp(2 i kz2 D) - 1
};

StackCoefficients stack_coefficients(const MagnetParams& p, double omega, cplx k_rho, double thickness,
                                     Polarization pol) {
    const cplx mu2 = permeability_xx(p, omega);
    const cplx kz1 = kz(omega, k_rho, p.eps1, p.mu1);
    const cplx kz2 = kz(omega, k_rho, p.eps2, mu2);
    // Layer 3 repeats the cladding of layer 1.
    return {interface_reflection(pol, kz1, kz2, p.eps1, p.mu1, p.eps2, mu2),
            interface_reflection(pol, kz2, kz1, p.eps2, mu2, p.eps1, p.mu1),
            expm1(cplx{0.0, 2.0} * kz2 * thickness)};
}

}  // namespace

cplx fresnel(const MagnetParams& p, double omega, cplx k_rho, Polarization pol) {
    const cplx mu2 = permeability_xx(p, omega);
    return interface_reflection(pol, kz(omega, k_rho, p.eps1, p.mu1), kz(omega, k_rho, p.eps2, mu2),
                                p.eps1, p.mu1, p.eps2, mu2);
}

Reflection generalized_reflection(const MagnetParams& p, double omega, cplx k_rho, double thickness,
                                  Polarization pol) {
    const auto [r12, r23, em1] = stack_coefficients(p, omega, k_rho, thickness, pol);
    Reflection out;
    out.on_pole = std::abs(1.0 + r12 * r23 * (1.0 + em1)) < 1e-12;
    out.value = airy(r12, r23, em1);
    return out;
}

SlabAtFrequency::SlabAtFrequency(const MagnetParams& p, double omega, double thickness)
    : params_(p),
      omega_(omega),
      thickness_(thickness),
      k1_(cladding_wavenumber(p, omega)),
      mu2_(permeability_xx(p, omega)) {
    const double k0 = units::vacuum_wavenumber(omega);
    k1_sq_ = p.eps1 * p.mu1 * k0 * k0;
    k2_sq_ = p.eps2 * mu2_ * (k0 * k0);
}

namespace {
cplx decaying(cplx q) { return (q.imag() < 0.0 || (q.imag() == 0.0 && q.real() < 0.0)) ? -q : q; }
}  // namespace

SlabReflection SlabAtFrequency::reflection(double k_rho) const {
    return reflection(k_rho, decaying(std::sqrt(k1_sq_ - k_rho * k_rho)));
}

SlabReflection SlabAtFrequency::reflection(double k_rho, cplx kz1) const {
    const cplx kz2 = decaying(std::sqrt(k2_sq_ - k_rho * k_rho));
    const cplx em1 = expm1(cplx{0.0, 2.0} * kz2 * thickness_);
    const MagnetParams& p = params_;
    auto reflect = [&](Polarization pol) {
        const cplx r12 = interface_reflection(pol, kz1, kz2, p.eps1, p.mu1, p.eps2, mu2_);
        const cplx r23 = interface_reflection(pol, kz2, kz1, p.eps2, mu2_, p.eps1, p.mu1);
        return airy(r12, r23, em1);
    };
    return {kz1, reflect(Polarization::M), reflect(Polarization::N)};
}

SlabReflection slab_reflection(const MagnetParams& p, double omega, double k_rho, double thickness) {
    return SlabAtFrequency(p, omega, thickness).reflection(k_rho);
}

cplx slab_denominator(const MagnetParams& p, double omega, cplx k_rho, double thickness) {
    const auto [r12, r23, em1] = stack_coefficients(p, omega, k_rho, thickness, Polarization::M);
    return 1.0 + r12 * r23 * (1.0 + em1);
}

cplx single_interface_dispersion(const MagnetParams& p, double omega) {
    const cplx mu2 = permeability_xx(p, omega);
    cplx k = units::vacuum_wavenumber(omega) * std::sqrt(p.mu1 * mu2 / (p.mu1 + mu2));
    if (k.real() < 0.0) k = -k;
    return k;
}

namespace {

// r_M exp(i kz2 D); equals +1 or -1 on a guided mode of the symmetric stack.
cplx mode_function(const MagnetParams& p, double omega, cplx k_rho, double thickness) {
    const cplx mu2 = permeability_xx(p, omega);
    const cplx kz1 = kz(omega, k_rho, p.eps1, p.mu1);
    const cplx kz2 = kz(omega, k_rho, p.eps2, mu2);
    const cplx r = interface_reflection(Polarization::M, kz1, kz2, p.eps1, p.mu1, p.eps2, mu2);
    return r * std::exp(cplx{0.0, 1.0} * kz2 * thickness);
}

}  // namespace

std::vector<SlabMode> slab_mode_poles(const MagnetParams& p, double omega, double thickness,
                                      const PoleSearch& search) {
    std::vector<SlabMode> roots;
    if (p.strength <= 0.0) return roots;

    const double k1 = cladding_wavenumber(p, omega);
    if (!(search.k_hi > k1)) return roots;

    std::vector<cplx> seeds;
    const cplx k_sp = single_interface_dispersion(p, omega);
    if (k_sp.real() > k1) seeds.push_back(k_sp);

    // Local minima of |1 - r^2 e| on a log-spaced real scan.
    const int n = std::max(search.scan_points, 3);
    std::vector<double> ks(n), mag(n);
    const double log_lo = std::log(k1 * (1.0 + 1e-9));
    const double log_hi = std::log(search.k_hi);
    for (int i = 0; i < n; ++i) {
        ks[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
        mag[i] = std::abs(slab_denominator(p, omega, ks[i], thickness));
    }
    for (int i = 1; i + 1 < n; ++i) {
        if (mag[i] < mag[i - 1] && mag[i] <= mag[i + 1]) seeds.emplace_back(ks[i], 0.0);
    }

    for (const cplx& seed : seeds) {
        for (const double target : {1.0, -1.0}) {
            cplx k = seed;
            bool converged = false;
            for (int it = 0; it < search.max_iterations; ++it) {
                const cplx g = mode_function(p, omega, k, thickness) - target;
                const cplx h = 1e-7 * std::abs(k);
                const cplx dg = (mode_function(p, omega, k + h, thickness) -
                                 mode_function(p, omega, k - h, thickness)) /
                                (2.0 * h);
                if (!std::isfinite(std::abs(dg)) || std::abs(dg) == 0.0) break;
                cplx step = g / dg;
                // Damp steps that would jump across more than half the current wave vector.
                if (std::abs(step) > 0.5 * std::abs(k)) step *= 0.5 * std::abs(k) / std::abs(step);
                k -= step;
                if (!std::isfinite(std::abs(k))) break;
                if (std::abs(step) < search.tolerance * std::abs(k)) {
                    converged = true;
                    break;
                }
            }
            if (!converged) continue;
            if (k.real() <= k1 || k.imag() < 0.0 || k.real() > 10.0 * search.k_hi) continue;
            if (std::abs(mode_function(p, omega, k, thickness) - target) > 1e-6) continue;
            const bool duplicate = std::any_of(roots.begin(), roots.end(), [&](const SlabMode& m) {
                return std::abs(m.k_rho - k) < 1e-6 * std::abs(k);
            });
            if (!duplicate) roots.push_back({k, target > 0.0 ? ModeParity::plus : ModeParity::minus});
        }
    }
    std::sort(roots.begin(), roots.end(),
              [](const SlabMode& a, const SlabMode& b) { return a.k_rho.real() < b.k_rho.real(); });
    return roots;
}

double penetration_depth(cplx k_mode) {
    if (!(k_mode.real() > 0.0)) throw std::invalid_argument("penetration_depth: Re k must be > 0");
    return 1.0 / (2.0 * k_mode.real());
}

}  // namespace magnon
