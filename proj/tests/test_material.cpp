#include <doctest.h>

#include <cmath>
#include <random>

#include "magnon/material.hpp"

using namespace magnon;

namespace {
double w(double mev) { return units::omega_from_mev(mev); }
}  // namespace

TEST_CASE("units: resonance line energy from wavelength") {
    // E = h c / lambda with h = 4.135667696e-15 eV s, c = 299792458 m/s.
    const double expected = 4.135667696e-15 * 299792458.0 / 1.117e-3 * 1e3;
    CHECK(units::mev_from_wavelength_mm(1.117) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(units::mev_from_omega(units::omega_from_mev(1.114)) == doctest::Approx(1.114).epsilon(1e-15));
}

TEST_CASE("calibration: lossless permeability hits -1 at the polariton energy") {
    MagnetParams p;
    p.gamma = 0.0;
    CHECK(permeability_xx(p, w(default_polariton_mev)).real() == doctest::Approx(-1.0).epsilon(1e-12));

    const double s = calibrate_strength(1.0, 1.2);
    MagnetParams q;
    q.omega0 = w(1.0);
    q.gamma = 0.0;
    q.strength = s;
    CHECK(permeability_xx(q, w(1.2)).real() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("calibration: fixed point with default damping") {
    const MagnetParams p;
    CHECK(std::abs(permeability_xx(p, w(1.114)).real() + 1.0) < 1e-3);
}

TEST_CASE("calibration: rejects ordering violations") {
    CHECK_THROWS_AS(calibrate_strength(1.114, 1.11), std::invalid_argument);
    CHECK_THROWS_AS(calibrate_strength(1.114, 1.114), std::invalid_argument);
    CHECK_THROWS_AS(calibrate_strength(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("permeability: vacuum and zz component") {
    const MagnetParams p = MagnetParams{}.vacuum();
    for (double e : {0.5, 1.1, 1.114, 2.0}) {
        const cplx mu = permeability_xx(p, w(e));
        CHECK(mu.real() == 1.0);
        CHECK(mu.imag() == 0.0);
    }
    CHECK(permeability_zz() == cplx{1.0, 0.0});
}

TEST_CASE("property: passivity, Im mu > 0 for gamma > 0") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> energy(0.01, 5.0), damping(1e-6, 1e-2);
    for (int i = 0; i < 500; ++i) {
        MagnetParams p;
        p.gamma = w(damping(rng));
        CHECK(permeability_xx(p, w(energy(rng))).imag() > 0.0);
    }
}

TEST_CASE("property: lossless permeability is real with one pole at omega0") {
    MagnetParams p;
    p.gamma = 0.0;
    for (double e : {0.5, 1.0, 1.109, 1.111, 1.2, 3.0}) CHECK(permeability_xx(p, w(e)).imag() == 0.0);
    const double e0 = p.omega0_mev();
    CHECK(permeability_xx(p, w(e0 * (1 - 1e-9))).real() > 1e6);
    CHECK(permeability_xx(p, w(e0 * (1 + 1e-9))).real() < -1e6);
}

TEST_CASE("property: negative-mu band is one interval bracketing 1.114 meV") {
    const MagnetParams p;
    const auto [lo, hi] = negative_mu_band(p);
    REQUIRE(hi > lo);
    CHECK(lo >= p.omega0);
    CHECK(units::mev_from_omega(lo) < 1.114);
    CHECK(units::mev_from_omega(hi) > 1.114);
    const double span = hi - lo;
    for (int i = 1; i < 200; ++i) CHECK(permeability_xx(p, lo + span * i / 200.0).real() < 0.0);
    for (double f : {1e-6, 1e-3, 0.1, 1.0}) {
        CHECK(permeability_xx(p, lo - f * span).real() >= 0.0);
        CHECK(permeability_xx(p, hi + f * span).real() >= 0.0);
    }
}

TEST_CASE("negative-mu band: empty without magnetic response") {
    const auto band = negative_mu_band(MagnetParams{}.vacuum());
    CHECK(band.first == 0.0);
    CHECK(band.second == 0.0);
}

TEST_CASE("validation") {
    MagnetParams p;
    CHECK_NOTHROW(p.validate());
    p.gamma = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = MagnetParams{};
    p.eps1 = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = MagnetParams{};
    p.strength = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
