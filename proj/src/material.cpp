#include "magnon/material.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magnon {

double calibrate_strength(double hbar_omega0_mev, double hbar_omegaM_mev) {
    if (!(hbar_omega0_mev > 0.0) || !(hbar_omegaM_mev > hbar_omega0_mev)) {
        throw std::invalid_argument("calibrate_strength: need hbar_omegaM > hbar_omega0 > 0, got " +
                                    std::to_string(hbar_omega0_mev) + ", " +
                                    std::to_string(hbar_omegaM_mev));
    }
    const double w0 = units::omega_from_mev(hbar_omega0_mev);
    const double wm = units::omega_from_mev(hbar_omegaM_mev);
    // 1 + s / (w0^2 - wm^2) = -1
    return 2.0 * (wm * wm - w0 * w0);
}

void MagnetParams::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("material: " + what); };
    if (!(omega0 > 0.0)) fail("omega0 must be > 0");
    if (!(gamma > 0.0)) fail("gamma must be > 0");
    if (!(strength >= 0.0)) fail("strength must be >= 0");
    if (!(eps1 >= 1.0)) fail("eps1 must be >= 1");
    if (!(mu1 >= 1.0)) fail("mu1 must be >= 1");
    if (!(eps2 >= 1.0)) fail("eps2 must be >= 1");
}

cplx permeability_xx(const MagnetParams& p, double omega) {
    const cplx w{omega, p.gamma};
    return 1.0 + p.strength / (p.omega0 * p.omega0 - w * w);
}

std::pair<double, double> negative_mu_band(const MagnetParams& p) {
    if (p.strength <= 0.0) return {0.0, 0.0};
    const double lo = std::max(p.omega0 - 50.0 * p.gamma, 0.5 * p.omega0);
    const double hi = std::sqrt(p.omega0 * p.omega0 + p.strength) + 50.0 * p.gamma;
    auto re_mu = [&](double w) { return permeability_xx(p, w).real(); };

    constexpr int samples = 20001;
    double w_min = lo;
    double v_min = re_mu(lo);
    for (int i = 1; i < samples; ++i) {
        const double w = lo + (hi - lo) * i / (samples - 1);
        const double v = re_mu(w);
        if (v < v_min) {
            v_min = v;
            w_min = w;
        }
    }
    if (v_min >= 0.0) return {0.0, 0.0};

    // Re mu is positive at both scan ends and negative at w_min.
    auto bisect = [&](double pos, double neg) {
        for (int it = 0; it < 200 && std::abs(pos - neg) > 1e-13 * neg; ++it) {
            const double mid = 0.5 * (pos + neg);
            (re_mu(mid) < 0.0 ? neg : pos) = mid;
        }
        return 0.5 * (pos + neg);
    };
    return {bisect(lo, w_min), bisect(hi, w_min)};
}

}  // namespace magnon
