#include <doctest.h>

#include <cmath>
#include <random>

#include "magnon/quadrature.hpp"
#include "magnon/sommerfeld.hpp"

using namespace magnon;

TEST_CASE("gauss-kronrod 21: exact for polynomials up to degree 31") {
    for (int deg : {0, 1, 7, 20, 31}) {
        const auto r = quad::gauss_kronrod21([deg](double x) { return cplx{std::pow(x, deg), 0.0}; }, 0.0, 1.0);
        CHECK(r.value.real() == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-14));
    }
}

TEST_CASE("adaptive: resolves an interior spike") {
    auto eval = [](int, double a, double b) {
        return quad::gauss_kronrod21([](double x) { return cplx{1e-4 / ((x - 0.3) * (x - 0.3) + 1e-8), 0.0}; }, a, b);
    };
    const auto r = quad::integrate_adaptive(eval, {{0.0, 1.0, 0, {}, 0.0}}, 1e-10, 0.0, 5000);
    const double exact = std::atan(0.7 / 1e-4) + std::atan(0.3 / 1e-4);
    CHECK(r.converged);
    CHECK(r.value.real() == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("sommerfeld: exponential moment oracle") {
    // int_0^inf k exp(-2 k z) dk = 1 / (2z)^2; the tail past k_max is below e^-60.
    for (double z : {1.0, 10.0, 100.0}) {
        const auto r = integrate_sommerfeld([z](double k, cplx) { return cplx{k * std::exp(-2.0 * k * z), 0.0}; }, 5.6e-6,
                                            z, QuadratureSpec{});
        CHECK(r.value.real() == doctest::Approx(1.0 / (4.0 * z * z)).epsilon(1e-8));
    }
}

TEST_CASE("sommerfeld: square-root endpoint singularity (Weyl identity)") {
    // int_0^inf (k / kz) exp(2 i kz z) dk = exp(2 i k1 z) / (2 i z)
    const double k1 = 0.02;
    for (double z : {5.0, 30.0}) {
        auto f = [&](double k, cplx kz) { return k / kz * std::exp(cplx{0.0, 2.0} * kz * z); };
        const cplx exact = std::exp(cplx{0.0, 2.0 * k1 * z}) / cplx{0.0, 2.0 * z};
        const auto r = integrate_sommerfeld(f, k1, z, QuadratureSpec{});
        CHECK(std::abs(r.value - exact) <= 1e-8 * std::abs(exact));
    }
}

TEST_CASE("property: substitution agrees with a plain open rule on smooth integrands") {
    const double k1 = 0.01, z = 4.0;
    auto g = [](double k) { return cplx{std::exp(-k) * std::cos(3.0 * k), k * k * std::exp(-2.0 * k)}; };
    const QuadratureSpec spec;
    const auto with_sub = integrate_sommerfeld([&](double k, cplx) { return g(k); }, k1, z, spec);
    auto eval = [&](int, double a, double b) { return quad::gauss_kronrod21(g, a, b); };
    const auto plain = quad::integrate_adaptive(eval, {{0.0, spec.k_max(z), 0, {}, 0.0}}, 1e-12, 0.0, 5000);
    CHECK(std::abs(with_sub.value - plain.value) <= 1e-6 * std::abs(plain.value));
}

TEST_CASE("property: refinement convergence on the slab integrand") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> e(1.110, 1.118), lz(0.5, 1.7), ld(0.5, 2.3);
    const MagnetParams p;
    for (int n = 0; n < 20; ++n) {
        const double omega = units::omega_from_mev(e(rng));
        const double z = std::pow(10.0, lz(rng)), D = std::pow(10.0, ld(rng));
        const SlabAtFrequency slab(p, omega, D);
        const double k1 = slab.k1();
        auto f = [&](double k, cplx kz1) {
            const auto s = slab.reflection(k, kz1);
            const cplx r = s.r_n - s.kz1 * s.kz1 / (k1 * k1) * s.r_m;
            return (k * k1 * k1 / s.kz1) * r * std::exp(cplx{0.0, 2.0} * s.kz1 * z);
        };
        QuadratureSpec coarse;
        coarse.rel_tol = 1e-6;
        coarse.max_panels = 40000;
        QuadratureSpec fine = coarse;
        fine.rel_tol = 0.5e-6;
        const auto a = integrate_sommerfeld(f, k1, z, coarse);
        const auto b = integrate_sommerfeld(f, k1, z, fine);
        CHECK(std::abs(a.value - b.value) <= a.error);
    }
}

TEST_CASE("property: bit-identical repeat evaluation") {
    const MagnetParams p;
    const double omega = units::omega_from_mev(1.1135);
    const SlabAtFrequency slab(p, omega, 10.0);
    auto f = [&](double k, cplx kz1) {
        const auto s = slab.reflection(k, kz1);
        return k * s.r_m * std::exp(cplx{0.0, 2.0} * s.kz1 * 10.0);
    };
    const auto a = integrate_sommerfeld(f, slab.k1(), 10.0, QuadratureSpec{});
    const auto b = integrate_sommerfeld(f, slab.k1(), 10.0, QuadratureSpec{});
    CHECK(a.value == b.value);
    CHECK(a.panels == b.panels);
}

TEST_CASE("non-convergence carries the best estimate") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-15;
    spec.max_panels = 40;
    auto f = [](double k, cplx) { return cplx{std::sin(1e4 * k), 0.0}; };
    try {
        integrate_sommerfeld(f, 0.01, 1.0, spec);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(std::isfinite(std::abs(e.estimate())));
        CHECK(e.error_bound() > 0.0);
    }
}

TEST_CASE("quadrature spec validation") {
    CHECK_NOTHROW(QuadratureSpec{}.validate());
    QuadratureSpec s;
    s.rel_tol = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = QuadratureSpec{};
    s.k_max_factor = 5.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK(QuadratureSpec{}.k_max(10.0) == doctest::Approx(3.0));
}

TEST_CASE("dipole reflection vanishes without contrast") {
    const MagnetParams p = MagnetParams{}.vacuum();
    CHECK(std::abs(dipole_reflection(p, units::omega_from_mev(1.1), 0.05, 10.0)) == 0.0);
    CHECK(integrand_dispersion_density(p, units::omega_from_mev(1.1), 0.05, 10.0) == 0.0);
}
