#include "magnon/sommerfeld.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "magnon/quadrature.hpp"

namespace magnon {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("quadrature: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw std::invalid_argument("quadrature: abs_tol must be >= 0");
    if (!(k_max_factor >= 10.0)) throw std::invalid_argument("quadrature: k_max_factor must be >= 10");
    if (max_panels < 8) throw std::invalid_argument("quadrature: max_panels must be >= 8");
}

NonConvergence::NonConvergence(cplx estimate, double error_bound)
    : std::runtime_error("Sommerfeld quadrature did not converge (error bound " +
                         std::to_string(error_bound) + ")"),
      estimate_(estimate),
      error_bound_(error_bound) {}

namespace {

enum Segment : int { below_light_line = 0, above_light_line = 1, evanescent = 2 };

constexpr int panels_per_decade = 8;

}  // namespace

SommerfeldResult integrate_sommerfeld(const SommerfeldIntegrand& f, double k1, double height,
                                      const QuadratureSpec& spec, std::span<const double> breakpoints) {
    spec.validate();
    if (!(height > 0.0)) throw std::invalid_argument("integrate_sommerfeld: height must be > 0");
    if (!(k1 > 0.0)) throw std::invalid_argument("integrate_sommerfeld: k1 must be > 0");
    const double k_max = spec.k_max(height);
    if (!(k_max > k1)) throw std::invalid_argument("integrate_sommerfeld: k_max must exceed k1");

    const double k_split = std::min(2.0 * k1, k_max);

    std::vector<quad::Panel> panels;
    panels.push_back({0.0, 0.5 * units::pi, below_light_line});
    panels.push_back({0.0, std::acosh(k_split / k1), above_light_line});

    if (k_max > k_split) {
        std::vector<double> edges;
        const double decades = std::log10(k_max / k_split);
        const int n = std::max(1, static_cast<int>(std::ceil(decades * panels_per_decade)));
        for (int i = 0; i <= n; ++i) edges.push_back(k_split * std::pow(k_max / k_split, double(i) / n));
        edges.back() = k_max;
        for (double bp : breakpoints) {
            if (bp > k_split && bp < k_max) edges.push_back(bp);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end(),
                                [](double a, double b) { return std::abs(b - a) <= 1e-12 * b; }),
                    edges.end());
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) panels.push_back({edges[i], edges[i + 1], evanescent});
    }

    auto eval = [&](int segment, double a, double b) -> quad::PanelEstimate {
        switch (segment) {
            case below_light_line:
                return quad::gauss_kronrod21(
                    [&](double t) { return f(k1 * std::sin(t), cplx{k1 * std::cos(t), 0.0}) * (k1 * std::cos(t)); }, a, b);
            case above_light_line:
                return quad::gauss_kronrod21(
                    [&](double u) { return f(k1 * std::cosh(u), cplx{0.0, k1 * std::sinh(u)}) * (k1 * std::sinh(u)); }, a,
                    b);
            default:
                return quad::gauss_kronrod21(
                    [&](double k) { return f(k, cplx{0.0, std::sqrt((k - k1) * (k + k1))}); }, a, b);
        }
    };

    const auto result = quad::integrate_adaptive(eval, std::move(panels), spec.rel_tol, spec.abs_tol,
                                                 spec.max_panels);
    if (!result.converged) throw NonConvergence(result.value, result.error);
    return {result.value, result.error, result.panels};
}

cplx dipole_reflection(const MagnetParams& p, double omega, double k_rho, double thickness) {
    const double k1 = cladding_wavenumber(p, omega);
    const auto s = slab_reflection(p, omega, k_rho, thickness);
    return s.r_n - (s.kz1 * s.kz1) / (k1 * k1) * s.r_m;
}

double integrand_dispersion_density(const MagnetParams& p, double omega, double k_rho, double thickness,
                                    double height) {
    const SlabAtFrequency slab(p, omega, thickness);
    const double k1 = slab.k1();
    const auto s = slab.reflection(k_rho);
    const cplx kz1 = s.kz1;
    const cplx r = s.r_n - (kz1 * kz1) / (k1 * k1) * s.r_m;
    const cplx i{0.0, 1.0};
    return (i * (k_rho * k1 * k1 / kz1) * r * std::exp(2.0 * i * kz1 * height)).imag();
}

}  // namespace magnon
