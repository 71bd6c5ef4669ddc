#include <doctest.h>

#include <cmath>
#include <random>

#include "magnon/layered.hpp"

using namespace magnon;

namespace {

double w(double mev) { return units::omega_from_mev(mev); }

// Characteristic-matrix reflection of a single layer between identical half-spaces,
// with q = kz / mu (TE) or kz / eps (TM).
cplx transfer_matrix_reflection(const MagnetParams& p, double omega, double k_rho, double D, Polarization pol) {
    const cplx mu2 = permeability_xx(p, omega);
    const double k0 = omega / units::c_nm_per_us;
    auto root = [&](cplx eps, cplx mu) {
        cplx s = std::sqrt(eps * mu * k0 * k0 - k_rho * k_rho);
        if (s.imag() < 0.0) s = -s;
        return s;
    };
    const cplx kz1 = root(p.eps1, p.mu1);
    const cplx kz2 = root(p.eps2, mu2);
    const cplx q1 = pol == Polarization::M ? kz1 / p.mu1 : kz1 / p.eps1;
    const cplx q2 = pol == Polarization::M ? kz2 / mu2 : kz2 / p.eps2;
    const cplx d = kz2 * D;
    const cplx i{0.0, 1.0};
    const cplx m11 = std::cos(d), m12 = -i * std::sin(d) / q2, m21 = -i * q2 * std::sin(d), m22 = std::cos(d);
    const cplx a = (m11 + m12 * q1) * q1, b = m21 + m22 * q1;
    return (a - b) / (a + b);
}

}  // namespace

TEST_CASE("kz: branch and identity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> e(1.10, 1.12), lk(-7.0, 0.0);
    const MagnetParams p;
    for (int n = 0; n < 300; ++n) {
        const double omega = w(e(rng));
        const double k = std::pow(10.0, lk(rng));
        const cplx mu = permeability_xx(p, omega);
        const cplx z = kz(omega, k, 1.0, mu);
        CHECK(z.imag() >= 0.0);
        const cplx lhs = z * z + k * k;
        const cplx rhs = mu * (omega / units::c_nm_per_us) * (omega / units::c_nm_per_us);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(rhs), k * k));
    }
    // Propagating in vacuum: real and positive.
    const double omega = w(1.1);
    const cplx z = kz(omega, 0.0, 1.0, 1.0);
    CHECK(z.imag() == 0.0);
    CHECK(z.real() == doctest::Approx(omega / units::c_nm_per_us));
}

TEST_CASE("fresnel: no contrast gives no reflection") {
    const MagnetParams p = MagnetParams{}.vacuum();
    for (auto pol : {Polarization::M, Polarization::N}) {
        CHECK(std::abs(fresnel(p, w(1.1), 1e-6, pol)) == 0.0);
        CHECK(std::abs(generalized_reflection(p, w(1.1), 0.05, 10.0, pol).value) == 0.0);
    }
}

TEST_CASE("generalized reflection matches characteristic-matrix oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> e(1.105, 1.125), lk(-6.0, -1.0), ld(0.0, 2.5);
    MagnetParams p;
    p.eps2 = 3.0;
    for (int n = 0; n < 100; ++n) {
        const double omega = w(e(rng)), k = std::pow(10.0, lk(rng)), D = std::pow(10.0, ld(rng));
        for (auto pol : {Polarization::M, Polarization::N}) {
            const cplx oracle = transfer_matrix_reflection(p, omega, k, D, pol);
            const cplx r = generalized_reflection(p, omega, k, D, pol).value;
            CHECK(std::abs(r - oracle) <= 1e-9 * std::max(1.0, std::abs(oracle)));
        }
    }
}

TEST_CASE("property: symmetric-stack closed form") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> e(1.105, 1.125), lk(-6.0, 0.0), ld(0.0, 3.0);
    const MagnetParams p;
    for (int n = 0; n < 100; ++n) {
        const double omega = w(e(rng)), k = std::pow(10.0, lk(rng)), D = std::pow(10.0, ld(rng));
        const cplx r = fresnel(p, omega, k, Polarization::M);
        // 1 - e^{x} as -(e^{x/2}) 2 sinh(x/2) keeps thin slabs accurate.
        const cplx x = cplx{0.0, 2.0} * kz(omega, k, p.eps2, permeability_xx(p, omega)) * D;
        const cplx one_minus = -2.0 * std::exp(0.5 * x) * std::sinh(0.5 * x);
        const cplx closed = r * one_minus / (1.0 - r * r * (1.0 - one_minus));
        const cplx gen = generalized_reflection(p, omega, k, D, Polarization::M).value;
        CHECK(std::abs(gen - closed) <= 1e-12 * std::abs(closed));
    }
}

TEST_CASE("slab_reflection agrees with the per-polarization calls") {
    const MagnetParams p;
    const double omega = w(1.1135);
    const SlabAtFrequency slab(p, omega, 10.0);
    for (double k : {1e-6, 1e-4, 0.01, 0.05, 0.2}) {
        const auto s = slab_reflection(p, omega, k, 10.0);
        const auto c = slab.reflection(k);
        const cplx m = generalized_reflection(p, omega, k, 10.0, Polarization::M).value;
        const cplx nn = generalized_reflection(p, omega, k, 10.0, Polarization::N).value;
        CHECK(std::abs(s.r_m - m) <= 1e-12 * std::abs(m));
        CHECK(std::abs(s.r_n - nn) <= 1e-12 * std::abs(nn) + 1e-300);
        CHECK(std::abs(c.r_m - m) <= 1e-12 * std::abs(m));
    }
}

TEST_CASE("property: passivity below the light line") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> e(1.10, 1.13), f(0.0, 0.999), ld(0.0, 3.0);
    MagnetParams lossless;
    lossless.gamma = 0.0;
    lossless.eps2 = 4.0;
    lossless.strength = 0.0;
    const MagnetParams lossy;
    for (int n = 0; n < 300; ++n) {
        const double omega = w(e(rng));
        const double k = f(rng) * cladding_wavenumber(lossy, omega);
        CHECK(std::abs(fresnel(lossless, omega, k, Polarization::N)) <= 1.0 + 1e-12);
        const auto r = generalized_reflection(lossy, omega, k, std::pow(10.0, ld(rng)), Polarization::M);
        CHECK(std::isfinite(std::abs(r.value)));
        CHECK(std::abs(r.value) <= 1.0 + 1e-12);
    }
}

TEST_CASE("property: thick-slab limit reproduces the single interface") {
    const MagnetParams p;
    for (double e : {1.111, 1.1135, 1.116}) {
        const double omega = w(e);
        for (double k : {1e-3, 0.01, 0.1}) {
            const cplx kz2 = kz(omega, k, p.eps2, permeability_xx(p, omega));
            const double D = std::log(1e10) / (2.0 * kz2.imag()) * 1.5;
            const cplx R = generalized_reflection(p, omega, k, D, Polarization::M).value;
            const cplx r = fresnel(p, omega, k, Polarization::M);
            CHECK(std::abs(R - r) <= 1e-8 * std::abs(r));
        }
    }
}

TEST_CASE("reflection is continuous in thickness and vanishes as D -> 0") {
    const MagnetParams p;
    const double omega = w(1.1135);
    const cplx a = generalized_reflection(p, omega, 0.05, 10.0, Polarization::M).value;
    const cplx b = generalized_reflection(p, omega, 0.05, 10.0 * (1 + 1e-9), Polarization::M).value;
    CHECK(std::abs(a - b) < 1e-6 * std::abs(a));
    CHECK(std::abs(generalized_reflection(p, omega, 0.05, 1e-12, Polarization::M).value) < 1e-9);
}

TEST_CASE("single-interface dispersion") {
    const MagnetParams p;
    double best = 0.0, at = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double e = 1.105 + 0.015 * i / 4000.0;
        const cplx k = single_interface_dispersion(p, w(e));
        CHECK(k.real() >= 0.0);
        const cplx mu = permeability_xx(p, w(e));
        const double k0 = w(e) / units::c_nm_per_us;
        CHECK(std::abs(k * k - k0 * k0 * mu / (1.0 + mu)) <= 1e-10 * std::abs(k * k));
        if (k.real() > best) best = k.real(), at = e;
    }
    CHECK(best == doctest::Approx(2.2e-5).epsilon(0.1));
    CHECK(at == doctest::Approx(1.114).epsilon(1e-3 / 1.114));
}

TEST_CASE("slab poles: roots, ordering, filtering") {
    const MagnetParams p;
    for (double D : {10.0, 100.0}) {
        const double omega = w(1.1135);
        const auto modes = slab_mode_poles(p, omega, D);
        REQUIRE_FALSE(modes.empty());
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const cplx k = modes[i].k_rho;
            CHECK(k.real() > cladding_wavenumber(p, omega));
            CHECK(k.imag() >= 0.0);
            if (i > 0) CHECK(k.real() >= modes[i - 1].k_rho.real());
            // |1 - r^2 e| at the root is tiny compared with its typical size nearby.
            const double at_root = std::abs(slab_denominator(p, omega, k, D));
            const double nearby = std::abs(slab_denominator(p, omega, k * 1.05, D));
            CHECK(at_root < 1e-6 * nearby);
        }
    }
    CHECK(slab_mode_poles(MagnetParams{}.vacuum(), w(1.1135), 10.0).empty());
}

TEST_CASE("property: each slab root is a local maximum of |R_M| along real k") {
    const MagnetParams p;
    for (double D : {10.0, 100.0}) {
        for (double e : {1.1120, 1.1135, 1.1150}) {
            const double omega = w(e);
            for (const auto& m : slab_mode_poles(p, omega, D)) {
                const double k = m.k_rho.real();
                // Grid step of the default dispersion map: 200 log points over [1e-3, 1] per nm.
                const double step = k * (std::pow(1e3, 1.0 / 199.0) - 1.0);
                auto mag = [&](double x) { return std::abs(generalized_reflection(p, omega, x, D, Polarization::M).value); };
                double best = k, best_val = mag(k);
                for (int j = -40; j <= 40; ++j) {
                    const double x = k + j * step / 20.0;
                    if (mag(x) > best_val) best_val = mag(x), best = x;
                }
                CHECK(std::abs(best - k) <= step);
                CHECK(std::abs(best - k) <= 0.25 * m.k_rho.imag());
            }
        }
    }
}

TEST_CASE("penetration depth") {
    CHECK(penetration_depth(cplx{0.05, 1e-4}) == doctest::Approx(10.0));
    CHECK_THROWS_AS(penetration_depth(cplx{0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(penetration_depth(cplx{-0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("geometry validation") {
    CHECK_NOTHROW(StackGeometry{}.validate());
    CHECK_THROWS_AS((StackGeometry{0.0, 10.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((StackGeometry{10.0, -1.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((StackGeometry{10.0, 10.0, -1.0}.validate()), std::invalid_argument);
}
