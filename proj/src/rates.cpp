#include "magnon/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "magnon/parallel.hpp"

namespace magnon {

void SpinDefectParams::validate() const {
    if (!(hbar_omega1 > 0.0)) throw std::invalid_argument("emitter: energy must be > 0");
    if (spin != 0.5 && spin != 1.0 && spin != 1.5) throw std::invalid_argument("emitter: spin must be 1/2, 1 or 3/2");
    if (!(g_factor > 0.0)) throw std::invalid_argument("emitter: g factor must be > 0");
}

double gamma_free(double omega, double spin, double g_factor) {
    // mu0 mu_B^2 = pi alpha hbar^3 / (m_e^2 c), so the rate reduces to
    // (S g)^2 / 3 * alpha * omega * (hbar omega / m_e c^2)^2.
    const double x = units::mev_from_omega(omega) / units::electron_rest_mev;
    return spin * spin * g_factor * g_factor / 3.0 * units::alpha * omega * x * x;
}

double bessel_j1_over_x(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 0.5 - x2 / 16.0 + x2 * x2 / 384.0;
    }
    return std::cyl_bessel_j(1.0, x) / x;
}

double bessel_j2(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return x2 / 8.0 - x2 * x2 / 96.0;
    }
    return std::cyl_bessel_j(2.0, x);
}

namespace {

// Panel edges around the guided-mode poles so that the adaptive rule starts with
// the narrow resonances already isolated.
std::vector<double> pole_breakpoints(const MagnetParams& params, double omega, double thickness, double k_max) {
    std::vector<double> out;
    PoleSearch search;
    search.k_hi = k_max;
    search.scan_points = 400;
    for (const auto& mode : slab_mode_poles(params, omega, thickness, search)) {
        const double re = mode.k_rho.real();
        const double im = std::max(mode.k_rho.imag(), 1e-6 * re);
        out.push_back(re);
        for (double m : {1.0, 3.0, 10.0}) {
            out.push_back(re - m * im);
            out.push_back(re + m * im);
        }
    }
    return out;
}

enum class Weight { spin_flip, exchange };

double scattering_integral(Weight weight, double omega, const StackGeometry& geom, const MagnetParams& params,
                           const QuadratureSpec& spec) {
    geom.validate();
    if (!(omega > 0.0)) throw std::invalid_argument("rates: omega must be > 0");
    // No contrast anywhere in the stack: R vanishes identically.
    if (params.strength == 0.0 && params.eps2 == params.eps1 && params.mu1 == 1.0) return 0.0;

    const SlabAtFrequency slab(params, omega, geom.thickness);
    const double k1 = slab.k1();
    const double k1_sq = k1 * k1;
    const double z = geom.height;
    const double rho = geom.separation;
    const cplx i{0.0, 1.0};

    SommerfeldIntegrand f = [&](double k, cplx kz1) -> cplx {
        const auto s = slab.reflection(k, kz1);
        const cplx tm_weight = s.kz1 * s.kz1 / k1_sq;
        cplx r;
        if (weight == Weight::spin_flip) {
            r = s.r_n - tm_weight * s.r_m;
        } else {
            const double a = bessel_j1_over_x(k * rho);
            const double b = bessel_j2(k * rho);
            r = (a - b) * s.r_n - a * tm_weight * s.r_m;
        }
        return (k * k1_sq / s.kz1) * r * std::exp(2.0 * i * s.kz1 * z);
    };

    const auto bps = pole_breakpoints(params, omega, geom.thickness, spec.k_max(z));
    const auto result = integrate_sommerfeld(f, k1, z, spec, bps);
    const double k0 = units::vacuum_wavenumber(omega);
    const double prefactor = (weight == Weight::spin_flip ? 3.0 / 4.0 : 3.0 / 2.0) / (k0 * k0 * k0);
    // Im[i I] = Re[I]
    return prefactor * result.value.real();
}

}  // namespace

double spin_flip_rate(double omega, const StackGeometry& geom, const MagnetParams& params,
                      const QuadratureSpec& spec) {
    return std::sqrt(params.eps1 * params.mu1) + scattering_integral(Weight::spin_flip, omega, geom, params, spec);
}

double exchange_rate(double omega, const StackGeometry& geom, const MagnetParams& params,
                     const QuadratureSpec& spec) {
    return scattering_integral(Weight::exchange, omega, geom, params, spec);
}

std::string to_string(RateKind kind) { return kind == RateKind::spin_flip ? "spin_flip" : "exchange"; }

bool RateSpectrum::all_converged() const {
    return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

RateSpectrum RateSpectrum::from_physical(RateKind kind, std::vector<double> omega, std::vector<double> mhz) {
    if (omega.size() != mhz.size()) throw std::invalid_argument("RateSpectrum: size mismatch");
    RateSpectrum s;
    s.kind = kind;
    s.omega = std::move(omega);
    s.normalized = std::move(mhz);
    s.free_rate.assign(s.omega.size(), 1.0);
    s.converged.assign(s.omega.size(), true);
    s.vacuum_term = 0.0;
    return s;
}

std::vector<double> energy_grid(double e_min_mev, double e_max_mev, std::size_t points) {
    if (points == 0) throw std::invalid_argument("energy_grid: need at least one point");
    if (points > 1 && !(e_max_mev > e_min_mev)) throw std::invalid_argument("energy_grid: need e_max > e_min");
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double e = points == 1 ? e_min_mev : e_min_mev + (e_max_mev - e_min_mev) * double(i) / double(points - 1);
        out[i] = units::omega_from_mev(e);
    }
    return out;
}

namespace {

struct Cell {
    double value{};
    bool converged{true};
};

Cell evaluate_cell(RateKind kind, double omega, const StackGeometry& geom, const MagnetParams& params,
                   const QuadratureSpec& spec) {
    try {
        return {kind == RateKind::spin_flip ? spin_flip_rate(omega, geom, params, spec)
                                            : exchange_rate(omega, geom, params, spec),
                true};
    } catch (const NonConvergence& e) {
        const double k0 = units::vacuum_wavenumber(omega);
        const double pref = (kind == RateKind::spin_flip ? 0.75 : 1.5) / (k0 * k0 * k0);
        const double vacuum = kind == RateKind::spin_flip ? std::sqrt(params.eps1 * params.mu1) : 0.0;
        return {vacuum + pref * e.estimate().real(), false};
    }
}

}  // namespace

RateSpectrum compute_spectrum(RateKind kind, const std::vector<double>& omega, const StackGeometry& geom,
                              const MagnetParams& params, const SpinDefectParams& sd, const QuadratureSpec& spec,
                              unsigned workers) {
    geom.validate();
    params.validate();
    sd.validate();
    spec.validate();
    for (std::size_t i = 1; i < omega.size(); ++i) {
        if (!(omega[i] > omega[i - 1])) throw std::invalid_argument("compute_spectrum: grid must be strictly ascending");
    }
    const auto cells = parallel_map(omega.size(), workers,
                                    [&](std::size_t i) { return evaluate_cell(kind, omega[i], geom, params, spec); });
    RateSpectrum s;
    s.kind = kind;
    s.geometry = geom;
    s.omega = omega;
    s.vacuum_term = kind == RateKind::spin_flip ? std::sqrt(params.eps1 * params.mu1) : 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        s.normalized.push_back(cells[i].value);
        s.converged.push_back(cells[i].converged);
        s.free_rate.push_back(gamma_free(omega[i], sd.spin, sd.g_factor));
    }
    return s;
}

void SweepAxes::validate() const {
    auto check = [](const std::vector<double>& axis, const char* name, bool positive) {
        if (axis.empty()) throw std::invalid_argument(std::string("sweep: axis ") + name + " is empty");
        for (std::size_t i = 0; i < axis.size(); ++i) {
            if (positive ? !(axis[i] > 0.0) : !(axis[i] >= 0.0))
                throw std::invalid_argument(std::string("sweep: axis ") + name + " has an out-of-range value");
            if (i > 0 && !(axis[i] > axis[i - 1]))
                throw std::invalid_argument(std::string("sweep: axis ") + name + " must be strictly ascending");
        }
    };
    check(energy_mev, "energy", true);
    check(height, "height", true);
    check(separation, "separation", false);
    check(thickness, "thickness", true);
}

std::vector<SweepRow> sweep_rates(const SweepAxes& axes, const MagnetParams& params, const SpinDefectParams& sd,
                                  const QuadratureSpec& spec, unsigned workers) {
    axes.validate();
    params.validate();
    sd.validate();
    spec.validate();
    const std::size_t ne = axes.energy_mev.size(), nz = axes.height.size(), nr = axes.separation.size(),
                      nd = axes.thickness.size();

    // The spin-flip rate does not depend on the separation: evaluate it once per (energy, height, thickness).
    const auto spin_cells = parallel_map(ne * nz * nd, workers, [&](std::size_t idx) {
        const std::size_t e = idx / (nz * nd), z = (idx / nd) % nz, d = idx % nd;
        const StackGeometry g{axes.thickness[d], axes.height[z], 0.0};
        return evaluate_cell(RateKind::spin_flip, units::omega_from_mev(axes.energy_mev[e]), g, params, spec);
    });

    return parallel_map(axes.cells(), workers, [&](std::size_t idx) {
        const std::size_t e = idx / (nz * nr * nd), z = (idx / (nr * nd)) % nz, r = (idx / nd) % nr, d = idx % nd;
        const double omega = units::omega_from_mev(axes.energy_mev[e]);
        const StackGeometry g{axes.thickness[d], axes.height[z], axes.separation[r]};
        const Cell ex = evaluate_cell(RateKind::exchange, omega, g, params, spec);
        const Cell& sf = spin_cells[(e * nz + z) * nd + d];
        SweepRow row;
        row.energy_mev = axes.energy_mev[e];
        row.height = g.height;
        row.separation = g.separation;
        row.thickness = g.thickness;
        row.spin_flip = sf.value;
        row.exchange = ex.value;
        row.free_rate = gamma_free(omega, sd.spin, sd.g_factor);
        row.converged = sf.converged && ex.converged;
        return row;
    });
}

}  // namespace magnon
