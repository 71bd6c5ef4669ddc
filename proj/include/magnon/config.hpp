// config.hpp - run configuration: nested YAML with units in the key names
//
// Unknown keys are errors. Missing keys take the library defaults. The resolved
// config (defaults filled in) is echoed into every output header and can be fed
// back through --config to reproduce the file.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "magnon/dynamics.hpp"
#include "magnon/layered.hpp"
#include "magnon/material.hpp"
#include "magnon/rates.hpp"
#include "magnon/sommerfeld.hpp"

namespace magnon {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MaterialConfig {
    double resonance_mev{default_resonance_mev};
    double polariton_mev{default_polariton_mev};
    double damping_mev{default_damping_mev};
    /// Overrides the calibration from polariton_mev when set.
    std::optional<double> strength_mev2;
    double eps_slab{1.0};
    double eps_cladding{1.0};
    double mu_cladding{1.0};

    MagnetParams params() const;
};

struct GridConfig {
    double min{};
    double max{};
    std::size_t points{};
    bool log_spacing{false};

    std::vector<double> values() const;
};

struct DynamicsConfig {
    double t_max_us{40.0};
    double dt_us{1e-4};
    double memory_us{0.1};
    double tolerance{1e-4};
    std::size_t stride{100};
    bool pair{true};
    bool verify{true};
    double c1_re{1.0}, c1_im{0.0}, c2_re{0.0}, c2_im{0.0};
};

struct SweepConfig {
    std::vector<double> energy_mev{1.1135};
    std::vector<double> height_nm{10.0};
    std::vector<double> separation_nm{15.0};
    std::vector<double> thickness_nm{10.0};
};

struct RunConfig {
    MaterialConfig material;
    StackGeometry geometry{10.0, 10.0, 15.0};
    SpinDefectParams emitter;
    QuadratureSpec quadrature;
    /// Energy axis (meV) for permeability, dispersion, rates and the dynamics kernels.
    GridConfig spectrum{1.108, 1.120, 2001, false};
    /// In-plane wave-vector axis (1/nm) for the dispersion map.
    GridConfig wavevector{1e-3, 1.0, 200, true};
    /// Emitter height used for the dispersion map, nm.
    double map_height{1.0};
    DynamicsConfig dynamics;
    SweepConfig sweep;
    std::filesystem::path output_dir{"out"};
    /// 0 selects the hardware concurrency.
    unsigned workers{0};

    /// Checks every block; throws ConfigError.
    void validate() const;
    DynamicsSettings dynamics_settings() const;
};

/// Parses YAML text. Throws ConfigError on syntax errors, unknown keys or bad types.
RunConfig parse_config(const std::string& text);

/// Reads a YAML file, or the embedded config block of a previously written CSV.
RunConfig load_config(const std::filesystem::path& path);

/// Resolved config as YAML, without the output directory and worker count.
std::string dump_config(const RunConfig& config);

/// Config block markers inside '#' header comments.
inline constexpr const char* config_begin_marker = "--- config ---";
inline constexpr const char* config_end_marker = "--- end config ---";

}  // namespace magnon
