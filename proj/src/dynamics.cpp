#include "magnon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magnon {

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
    if (x.size() == 1 || at <= x.front()) return y.front();
    if (at >= x.back()) return y.back();
    const auto hi = std::size_t(std::upper_bound(x.begin(), x.end(), at) - x.begin());
    const std::size_t lo = hi - 1;
    const double w = (at - x[lo]) / (x[hi] - x[lo]);
    return y[lo] + w * (y[hi] - y[lo]);
}

std::size_t step_count(double t_max, double dt) {
    if (!(dt > 0.0) || !(t_max > 0.0)) throw std::invalid_argument("dynamics: t_max and dt must be > 0");
    const double n = std::round(t_max / dt);
    if (n < 1.0 || std::abs(n * dt - t_max) > 1e-9 * t_max)
        throw std::invalid_argument("dynamics: dt must divide t_max");
    return static_cast<std::size_t>(n);
}

// Kernel stored reversed in split real/imaginary arrays so that the history sum
// walks both the kernel and the amplitudes forwards.
struct Reversed {
    std::vector<double> re, im;
    explicit Reversed(const std::vector<cplx>& k) : re(k.size()), im(k.size()) {
        const std::size_t m = k.size();
        for (std::size_t j = 0; j < m; ++j) {
            re[j] = k[m - 1 - j].real();
            im[j] = k[m - 1 - j].imag();
        }
    }
};

// sum_{m=lo}^{n} K[n+1-m] c[m] with kr/ki reversed kernels of length M.
cplx history_dot(const Reversed& k, const std::vector<double>& cr, const std::vector<double>& ci, std::size_t lo,
                 std::size_t n) {
    const std::size_t m_len = k.re.size();
    const std::size_t off = m_len - 2 - n;  // kernel index = m + off
    double sr0 = 0, sr1 = 0, si0 = 0, si1 = 0;
    std::size_t m = lo;
    for (; m + 1 <= n; m += 2) {
        const std::size_t j = m + off;
        sr0 += k.re[j] * cr[m] - k.im[j] * ci[m];
        si0 += k.re[j] * ci[m] + k.im[j] * cr[m];
        sr1 += k.re[j + 1] * cr[m + 1] - k.im[j + 1] * ci[m + 1];
        si1 += k.re[j + 1] * ci[m + 1] + k.im[j + 1] * cr[m + 1];
    }
    if (m == n) {
        const std::size_t j = m + off;
        sr0 += k.re[j] * cr[m] - k.im[j] * ci[m];
        si0 += k.re[j] * ci[m] + k.im[j] * cr[m];
    }
    return {sr0 + sr1, si0 + si1};
}

void check_kernel(const KernelTable& k, double dt, const char* name) {
    if (k.values.empty()) throw std::invalid_argument(std::string("dynamics: empty kernel ") + name);
    if (std::abs(k.dt - dt) > 1e-12 * dt)
        throw std::invalid_argument(std::string("dynamics: kernel ") + name + " step differs from dt");
}

DynamicsResult solve(const KernelTable& kernel, const KernelTable* kernel12, double gamma_bg, cplx c1_0, cplx c2_0,
                     double t_max, double dt) {
    const std::size_t steps = step_count(t_max, dt);
    check_kernel(kernel, dt, "K");
    if (kernel12) {
        check_kernel(*kernel12, dt, "K12");
        if (kernel12->size() != kernel.size()) throw std::invalid_argument("dynamics: K and K12 lengths differ");
    }
    if (!(gamma_bg >= 0.0)) throw std::invalid_argument("dynamics: gamma_bg must be >= 0");
    if (std::norm(c1_0) + std::norm(c2_0) > 1.0 + 1e-12)
        throw std::invalid_argument("dynamics: initial state norm exceeds 1");

    const std::size_t m_len = kernel.size();
    const std::vector<cplx>& K = kernel.values;
    const std::vector<cplx> zeros(kernel12 ? 0 : m_len, cplx{});
    const std::vector<cplx>& K12 = kernel12 ? kernel12->values : zeros;
    const bool pair = kernel12 != nullptr;
    const Reversed rk(K), rk12(K12);
    const cplx i{0.0, 1.0};
    const double h = 0.5 * dt;

    std::vector<double> r1(steps + 1), i1(steps + 1), r2(steps + 1), i2(steps + 1);
    DynamicsResult out;
    out.t.resize(steps + 1);
    out.c1.resize(steps + 1);
    out.c2.resize(steps + 1);
    auto store = [&](std::size_t n, cplx a, cplx b) {
        out.t[n] = double(n) * dt;
        out.c1[n] = a;
        out.c2[n] = b;
        r1[n] = a.real(), i1[n] = a.imag();
        r2[n] = b.real(), i2[n] = b.imag();
    };
    store(0, c1_0, c2_0);

    // a x1 + b x2 = rhs1, b x1 + a x2 = rhs2 for the implicit self term.
    const cplx a = 1.0 - h * (i * h * K[0] - 0.5 * gamma_bg);
    const cplx b = -h * (i * h * K12[0]);
    const cplx det = a * a - b * b;

    cplx f1 = -0.5 * gamma_bg * c1_0;
    cplx f2 = -0.5 * gamma_bg * c2_0;
    for (std::size_t n = 0; n < steps; ++n) {
        // History part of the trapezoidal memory sum at t_{n+1}.
        const std::size_t np1 = n + 1;
        const std::size_t lo = np1 >= m_len ? np1 - m_len + 1 : 1;
        cplx h1{}, h2{};
        if (lo <= n) {
            h1 = history_dot(rk, r1, i1, lo, n);
            h2 = history_dot(rk, r2, i2, lo, n);
            if (pair) {
                h1 += history_dot(rk12, r2, i2, lo, n);
                h2 += history_dot(rk12, r1, i1, lo, n);
            }
        }
        if (np1 < m_len) {
            h1 += 0.5 * (K[np1] * out.c1[0] + K12[np1] * out.c2[0]);
            h2 += 0.5 * (K12[np1] * out.c1[0] + K[np1] * out.c2[0]);
        }
        h1 *= dt;
        h2 *= dt;

        const cplx rhs1 = out.c1[n] + h * f1 + h * i * h1;
        const cplx rhs2 = out.c2[n] + h * f2 + h * i * h2;
        cplx x1, x2;
        if (b == 0.0) {
            x1 = rhs1 / a;
            x2 = rhs2 / a;
        } else {
            x1 = (a * rhs1 - b * rhs2) / det;
            x2 = (a * rhs2 - b * rhs1) / det;
        }
        store(np1, x1, x2);
        const cplx mem1 = h1 + h * (K[0] * x1 + K12[0] * x2);
        const cplx mem2 = h2 + h * (K12[0] * x1 + K[0] * x2);
        f1 = i * mem1 - 0.5 * gamma_bg * x1;
        f2 = i * mem2 - 0.5 * gamma_bg * x2;
    }
    return out;
}

DynamicsResult decimate(DynamicsResult r, std::size_t stride) {
    if (stride <= 1) return r;
    DynamicsResult out;
    for (std::size_t n = 0; n < r.size(); n += stride) {
        out.t.push_back(r.t[n]);
        out.c1.push_back(r.c1[n]);
        out.c2.push_back(r.c2[n]);
    }
    return out;
}

}  // namespace

KernelTable build_kernel(const RateSpectrum& spectrum, double omega1, double dt, std::size_t count,
                         const KernelOptions& options) {
    const std::size_t n = spectrum.size();
    if (n < 3) throw std::invalid_argument("build_kernel: spectrum needs at least 3 points");
    if (!(dt > 0.0) || count == 0) throw std::invalid_argument("build_kernel: need dt > 0 and count >= 1");
    if (!(omega1 > spectrum.omega.front() && omega1 < spectrum.omega.back()))
        throw std::invalid_argument("build_kernel: omega1 outside the spectral window");

    std::vector<double> gamma(n);
    double peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        gamma[j] = spectrum.scattered(j);
        peak = std::max(peak, std::abs(gamma[j]));
    }
    const double edge = std::max(std::abs(gamma.front()), std::abs(gamma.back()));
    if (peak > 0.0 && edge > options.edge_ratio_limit * peak)
        throw std::invalid_argument("build_kernel: spectrum does not decay at the window edges (edge/peak = " +
                                    std::to_string(edge / peak) + ")");

    // Trapezoid weights on a possibly non-uniform grid, folded with 1/2pi.
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double half = 0.5 * (spectrum.omega[j + 1] - spectrum.omega[j]);
        w[j] += half * gamma[j];
        w[j + 1] += half * gamma[j + 1];
    }
    for (auto& v : w) v /= 2.0 * units::pi;

    KernelTable k;
    k.dt = dt;
    k.omega1 = omega1;
    k.gamma_bg = interpolate(spectrum.omega, spectrum.free_rate, omega1) * spectrum.vacuum_term;
    k.values.assign(count, cplx{});
    if (peak == 0.0) return k;
    for (std::size_t m = 0; m < count; ++m) {
        const double tau = double(m) * dt;
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double phase = (spectrum.omega[j] - omega1) * tau;
            re += w[j] * std::cos(phase);
            im -= w[j] * std::sin(phase);
        }
        // i * (re + i im)
        k.values[m] = {-im, re};
    }
    return k;
}

StepTooLarge::StepTooLarge(double dt, double change, double tolerance)
    : std::runtime_error("dynamics: halving dt = " + std::to_string(dt) + " us changes populations by " +
                         std::to_string(change) + " (limit " + std::to_string(10.0 * tolerance) + ")"),
      change_(change) {}

DynamicsResult solve_single(const KernelTable& kernel, double gamma_bg, double t_max, double dt, cplx c1_0) {
    return solve(kernel, nullptr, gamma_bg, c1_0, 0.0, t_max, dt);
}

DynamicsResult solve_pair(const KernelTable& kernel, const KernelTable& kernel12, double gamma_bg, cplx c1_0,
                          cplx c2_0, double t_max, double dt) {
    return solve(kernel, &kernel12, gamma_bg, c1_0, c2_0, t_max, dt);
}

std::vector<double> concurrence(const DynamicsResult& result) {
    std::vector<double> c(result.size());
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = 2.0 * std::abs(result.c1[n] * std::conj(result.c2[n]));
    return c;
}

void DynamicsSettings::validate() const {
    if (!(omega1 > 0.0)) throw std::invalid_argument("dynamics: omega1 must be > 0");
    step_count(t_max, dt);
    if (!(memory > 0.0)) throw std::invalid_argument("dynamics: memory must be > 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("dynamics: tolerance must be > 0");
    if (stride == 0) throw std::invalid_argument("dynamics: stride must be >= 1");
    if (std::norm(c1_0) + std::norm(c2_0) > 1.0 + 1e-12)
        throw std::invalid_argument("dynamics: initial state norm exceeds 1");
}

namespace {

DynamicsRun run_at(const RateSpectrum& spin_flip, const RateSpectrum* exchange, const DynamicsSettings& s,
                   double dt) {
    const std::size_t steps = step_count(s.t_max, dt);
    const std::size_t count = std::min(steps, static_cast<std::size_t>(std::ceil(s.memory / dt - 1e-9))) + 1;
    const KernelTable k = build_kernel(spin_flip, s.omega1, dt, count, s.kernel);
    DynamicsRun run;
    run.gamma_bg = k.gamma_bg;
    if (exchange) {
        const KernelTable k12 = build_kernel(*exchange, s.omega1, dt, count, s.kernel);
        run.result = solve_pair(k, k12, k.gamma_bg, s.c1_0, s.c2_0, s.t_max, dt);
    } else {
        run.result = solve_single(k, k.gamma_bg, s.t_max, dt, s.c1_0);
    }
    return run;
}

}  // namespace

DynamicsRun run_dynamics(const RateSpectrum& spin_flip, const RateSpectrum* exchange,
                         const DynamicsSettings& settings, bool verify) {
    settings.validate();
    DynamicsRun run = run_at(spin_flip, exchange, settings, settings.dt);
    if (verify) {
        const DynamicsRun fine = run_at(spin_flip, exchange, settings, 0.5 * settings.dt);
        double change = 0.0;
        for (std::size_t n = 0; n < run.result.size(); ++n) {
            change = std::max(change, std::abs(run.result.population1(n) - fine.result.population1(2 * n)));
            change = std::max(change, std::abs(run.result.population2(n) - fine.result.population2(2 * n)));
        }
        run.step_change = change;
        if (change > 10.0 * settings.tolerance) throw StepTooLarge(settings.dt, change, settings.tolerance);
    }
    run.result = decimate(std::move(run.result), settings.stride);
    return run;
}

}  // namespace magnon
