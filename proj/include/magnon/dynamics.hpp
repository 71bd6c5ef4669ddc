// dynamics.hpp - non-Markovian single-excitation dynamics of one or two spin defects
//
// Amplitudes obey the coupled Volterra system
//   dc1/dt = i (K * c1)(t) + i (K12 * c2)(t) - (gamma_bg / 2) c1
//   dc2/dt = i (K12 * c1)(t) + i (K * c2)(t) - (gamma_bg / 2) c2
// with (K * c)(t) = int_0^t K(t - s) c(s) ds, in the frame rotating at omega1.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "magnon/rates.hpp"
#include "magnon/units.hpp"

namespace magnon {

/// Memory kernel K(tau) = i e^{i omega1 tau} (1/2pi) int Gamma(omega) e^{-i omega tau} d omega
/// sampled at tau = n dt, n = 0 .. size-1. Beyond the table the kernel is taken as zero.
struct KernelTable {
    double dt{};
    double omega1{};
    std::vector<cplx> values;
    /// Flat free-space rate split off the spectrum before transforming, MHz.
    double gamma_bg{};

    std::size_t size() const { return values.size(); }
    double tau(std::size_t n) const { return double(n) * dt; }
    double memory() const { return values.empty() ? 0.0 : tau(values.size() - 1); }
};

struct KernelOptions {
    /// Reject spectra whose band-edge |Gamma| exceeds this fraction of max |Gamma|.
    double edge_ratio_limit{1e-3};
};

/// Trapezoidal Fourier transform of the scattered part of `spectrum` (MHz). The
/// vacuum term Gamma_B sqrt(eps1 mu1) is removed pointwise and reported as gamma_bg
/// at omega1. Throws std::invalid_argument for an insufficient frequency window.
KernelTable build_kernel(const RateSpectrum& spectrum, double omega1, double dt, std::size_t count,
                         const KernelOptions& options = {});

struct DynamicsResult {
    std::vector<double> t;  ///< us
    std::vector<cplx> c1;
    std::vector<cplx> c2;

    std::size_t size() const { return t.size(); }
    double population1(std::size_t i) const { return std::norm(c1[i]); }
    double population2(std::size_t i) const { return std::norm(c2[i]); }
};

/// Raised by the step-verification run when halving dt moves the populations too far.
class StepTooLarge : public std::runtime_error {
public:
    StepTooLarge(double dt, double change, double tolerance);
    double change() const { return change_; }

private:
    double change_;
};

/// Single emitter (K12 = 0). Second-order scheme: trapezoidal product rule for the
/// memory integral, trapezoidal time stepping with the instantaneous self term solved
/// exactly. dt must equal kernel.dt and divide t_max.
DynamicsResult solve_single(const KernelTable& kernel, double gamma_bg, double t_max, double dt, cplx c1_0 = 1.0);

/// Two identical emitters coupled through K12; same scheme as solve_single.
DynamicsResult solve_pair(const KernelTable& kernel, const KernelTable& kernel12, double gamma_bg, cplx c1_0,
                          cplx c2_0, double t_max, double dt);

/// Pointwise 2 |c1 c2*|.
std::vector<double> concurrence(const DynamicsResult& result);

struct DynamicsSettings {
    double omega1{};
    double t_max{1.0};   ///< us
    double dt{1e-4};     ///< us
    double memory{0.1};  ///< kernel table length, us; clipped to t_max
    cplx c1_0{1.0, 0.0};
    cplx c2_0{0.0, 0.0};
    /// Max-norm population change tolerated between dt and dt/2 runs when verifying.
    double tolerance{1e-4};
    /// Keep every stride-th time sample in the returned result.
    std::size_t stride{1};
    KernelOptions kernel{};

    void validate() const;
};

struct DynamicsRun {
    DynamicsResult result;
    double gamma_bg{};
    /// Max-norm difference of |c_i|^2 against the dt/2 run (negative when not verified).
    double step_change{-1.0};
};

/// Builds kernels from the spectra and solves; `exchange == nullptr` runs the single
/// emitter. With `verify`, repeats at dt/2 and throws StepTooLarge when the populations
/// move by more than 10x the tolerance.
DynamicsRun run_dynamics(const RateSpectrum& spin_flip, const RateSpectrum* exchange,
                         const DynamicsSettings& settings, bool verify = false);

}  // namespace magnon
