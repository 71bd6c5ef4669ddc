#include "magnon/commands.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "magnon/parallel.hpp"

namespace magnon {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return fmt::format("{}", value);
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"permeability", "dispersion", "dispersion-map",
                                                "rates",        "sweep",      "dynamics"};
    return names;
}

namespace {

using Row = std::vector<std::string>;
using json = nlohmann::ordered_json;

unsigned workers_of(const RunConfig& c) { return c.workers == 0 ? default_workers() : c.workers; }

std::vector<double> energies(const RunConfig& c) { return c.spectrum.values(); }

CommandResult cmd_permeability(const RunConfig& c) {
    const MagnetParams p = c.material.params();
    Table t{"permeability", {"hbar_omega_meV", "Re_mu", "Im_mu"}, {}, {}};
    for (double e : energies(c)) {
        const cplx mu = permeability_xx(p, units::omega_from_mev(e));
        t.rows.push_back({format_number(e), format_number(mu.real()), format_number(mu.imag())});
    }
    const auto band = negative_mu_band(p);
    t.meta["strength_meV2"] = p.strength_mev2();
    t.meta["negative_mu_band_meV"] = json::array({units::mev_from_omega(band.first), units::mev_from_omega(band.second)});
    return {{t}, true};
}

std::string depth_or_nan(cplx k) { return k.real() > 0.0 ? format_number(penetration_depth(k)) : "nan"; }

CommandResult cmd_dispersion(const RunConfig& c) {
    const MagnetParams p = c.material.params();
    const auto grid = energies(c);
    Table iface{"dispersion_interface", {"hbar_omega_meV", "Re_k_per_nm", "Im_k_per_nm", "depth_nm"}, {}, {}};
    for (double e : grid) {
        const cplx k = single_interface_dispersion(p, units::omega_from_mev(e));
        iface.rows.push_back({format_number(e), format_number(k.real()), format_number(k.imag()), depth_or_nan(k)});
    }

    const double D = c.geometry.thickness;
    const auto modes = parallel_map(grid.size(), workers_of(c), [&](std::size_t i) {
        return slab_mode_poles(p, units::omega_from_mev(grid[i]), D);
    });
    Table slab{"dispersion_slab", {"hbar_omega_meV", "branch", "Re_k_per_nm", "Im_k_per_nm", "depth_nm"}, {}, {}};
    json missing = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (modes[i].empty() && p.strength > 0.0) missing.push_back(grid[i]);
        for (const auto& m : modes[i]) {
            slab.rows.push_back({format_number(grid[i]), m.parity == ModeParity::plus ? "plus" : "minus",
                                 format_number(m.k_rho.real()), format_number(m.k_rho.imag()), depth_or_nan(m.k_rho)});
        }
    }
    slab.meta["thickness_nm"] = D;
    slab.meta["energies_without_roots"] = missing.size();
    slab.meta["energies_without_roots_meV"] = missing;
    return {{iface, slab}, true};
}

CommandResult cmd_dispersion_map(const RunConfig& c) {
    const MagnetParams p = c.material.params();
    const auto grid = energies(c);
    const auto ks = c.wavevector.values();
    const auto cols = parallel_map(grid.size(), workers_of(c), [&](std::size_t i) {
        std::vector<double> col(ks.size());
        const double w = units::omega_from_mev(grid[i]);
        for (std::size_t j = 0; j < ks.size(); ++j)
            col[j] = integrand_dispersion_density(p, w, ks[j], c.geometry.thickness, c.map_height);
        return col;
    });
    Table t{"dispersion_map", {"hbar_omega_meV", "k_rho_per_nm", "density", "normalized"}, {}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double peak = 0.0;
        for (double v : cols[i]) peak = std::max(peak, std::abs(v));
        for (std::size_t j = 0; j < ks.size(); ++j) {
            const double norm = peak > 0.0 ? cols[i][j] / peak : 0.0;
            t.rows.push_back(
                {format_number(grid[i]), format_number(ks[j]), format_number(cols[i][j]), format_number(norm)});
        }
    }
    t.meta["energy_points"] = grid.size();
    t.meta["k_points"] = ks.size();
    t.meta["map_height_nm"] = c.map_height;
    t.meta["normalization"] = "per energy, by max |density|";
    return {{t}, true};
}

Table spectrum_table(const std::string& name, const RateSpectrum& s) {
    Table t{name, {"hbar_omega_meV", "normalized", "rate_MHz", "converged"}, {}, {}};
    for (std::size_t i = 0; i < s.size(); ++i) {
        t.rows.push_back({format_number(units::mev_from_omega(s.omega[i])), format_number(s.normalized[i]),
                          format_number(s.physical(i)), s.converged[i] ? "1" : "0"});
    }
    t.meta["thickness_nm"] = s.geometry.thickness;
    t.meta["height_nm"] = s.geometry.height;
    if (s.kind == RateKind::exchange) t.meta["separation_nm"] = s.geometry.separation;
    t.meta["all_converged"] = s.all_converged();
    return t;
}

CommandResult cmd_rates(const RunConfig& c) {
    const MagnetParams p = c.material.params();
    std::vector<double> omega;
    for (double e : energies(c)) omega.push_back(units::omega_from_mev(e));
    const unsigned w = workers_of(c);
    const auto sf = compute_spectrum(RateKind::spin_flip, omega, c.geometry, p, c.emitter, c.quadrature, w);
    const auto ex = compute_spectrum(RateKind::exchange, omega, c.geometry, p, c.emitter, c.quadrature, w);
    Table a = spectrum_table("rates_spin_flip", sf);
    Table b = spectrum_table("rates_exchange", ex);
    a.meta["free_rate_at_emitter_MHz"] = gamma_free(c.emitter);
    return {{a, b}, sf.all_converged() && ex.all_converged()};
}

CommandResult cmd_sweep(const RunConfig& c) {
    const SweepAxes axes{c.sweep.energy_mev, c.sweep.height_nm, c.sweep.separation_nm, c.sweep.thickness_nm};
    const auto rows = sweep_rates(axes, c.material.params(), c.emitter, c.quadrature, workers_of(c));
    Table t{"sweep",
            {"energy_meV", "height_nm", "separation_nm", "thickness_nm", "spin_flip_normalized", "exchange_normalized",
             "spin_flip_MHz", "exchange_MHz", "converged"},
            {},
            {}};
    bool ok = true;
    for (const auto& r : rows) {
        t.rows.push_back({format_number(r.energy_mev), format_number(r.height), format_number(r.separation),
                          format_number(r.thickness), format_number(r.spin_flip), format_number(r.exchange),
                          format_number(r.free_rate * r.spin_flip), format_number(r.free_rate * r.exchange),
                          r.converged ? "1" : "0"});
        ok = ok && r.converged;
    }
    t.meta["cells"] = rows.size();
    t.meta["all_converged"] = ok;
    return {{t}, ok};
}

CommandResult cmd_dynamics(const RunConfig& c) {
    const MagnetParams p = c.material.params();
    std::vector<double> omega;
    for (double e : energies(c)) omega.push_back(units::omega_from_mev(e));
    const unsigned w = workers_of(c);
    const auto sf = compute_spectrum(RateKind::spin_flip, omega, c.geometry, p, c.emitter, c.quadrature, w);
    RateSpectrum ex;
    if (c.dynamics.pair) ex = compute_spectrum(RateKind::exchange, omega, c.geometry, p, c.emitter, c.quadrature, w);
    const auto run = run_dynamics(sf, c.dynamics.pair ? &ex : nullptr, c.dynamics_settings(), c.dynamics.verify);

    const auto& r = run.result;
    const auto C = concurrence(r);
    Table t{"dynamics",
            {"t_us", "population1", "population2", "Re_c1", "Im_c1", "Re_c2", "Im_c2", "concurrence"},
            {},
            {}};
    for (std::size_t i = 0; i < r.size(); ++i) {
        t.rows.push_back({format_number(r.t[i]), format_number(r.population1(i)), format_number(r.population2(i)),
                          format_number(r.c1[i].real()), format_number(r.c1[i].imag()), format_number(r.c2[i].real()),
                          format_number(r.c2[i].imag()), format_number(C[i])});
    }
    t.meta["gamma_bg_MHz"] = run.gamma_bg;
    if (run.step_change >= 0.0) t.meta["dt_halving_change"] = run.step_change;
    const bool ok = sf.all_converged() && (!c.dynamics.pair || ex.all_converged());
    t.meta["spectra_converged"] = ok;
    return {{t}, ok};
}

std::string header(const std::string& command, const RunConfig& config, const Table& t) {
    std::string out = "# magnon " + command + "\n";
    for (const auto& [key, value] : t.meta.items()) out += "# " + key + ": " + value.dump() + "\n";
    out += std::string("# ") + config_begin_marker + "\n";
    std::istringstream yaml(dump_config(config));
    for (std::string line; std::getline(yaml, line);) out += "# " + line + "\n";
    out += std::string("# ") + config_end_marker + "\n";
    return out;
}

}  // namespace

CommandResult run_command(const std::string& command, const RunConfig& config) {
    if (command == "permeability") return cmd_permeability(config);
    if (command == "dispersion") return cmd_dispersion(config);
    if (command == "dispersion-map") return cmd_dispersion_map(config);
    if (command == "rates") return cmd_rates(config);
    if (command == "sweep") return cmd_sweep(config);
    if (command == "dynamics") return cmd_dynamics(config);
    throw ConfigError("unknown command '" + command + "'");
}

std::vector<std::filesystem::path> write_tables(const std::string& command, const RunConfig& config,
                                                const std::vector<Table>& tables) {
    std::filesystem::create_directories(config.output_dir);
    std::vector<std::filesystem::path> written;
    for (const auto& t : tables) {
        const auto csv = config.output_dir / (t.name + ".csv");
        std::ofstream out(csv, std::ios::binary);
        out.exceptions(std::ios::failbit | std::ios::badbit);
        out << header(command, config, t);
        out << fmt::format("{}\n", fmt::join(t.columns, ","));
        for (const auto& row : t.rows) out << fmt::format("{}\n", fmt::join(row, ","));
        out.close();
        written.push_back(csv);

        json side;
        side["command"] = command;
        side["file"] = csv.filename().string();
        side["columns"] = t.columns;
        side["rows"] = t.rows.size();
        side["meta"] = t.meta;
        side["config"] = dump_config(config);
        const auto js = config.output_dir / (t.name + ".json");
        std::ofstream jout(js, std::ios::binary);
        jout.exceptions(std::ios::failbit | std::ios::badbit);
        jout << side.dump(2) << "\n";
        jout.close();
        written.push_back(js);
    }
    return written;
}

int execute(const std::string& command, RunConfig config, std::ostream& err) {
    CommandResult result;
    try {
        config.validate();
        if (!config.dynamics.pair && (config.dynamics.c2_re != 0.0 || config.dynamics.c2_im != 0.0))
            throw ConfigError("dynamics: initial c2 must be 0 when pair is false");
        result = run_command(command, config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const StepTooLarge& e) {
        err << "non-convergence: " << e.what() << "\n";
        return exit_nonconvergence;
    } catch (const NonConvergence& e) {
        err << "non-convergence: " << e.what() << "\n";
        return exit_nonconvergence;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    }
    try {
        write_tables(command, config, result.tables);
    } catch (const std::exception& e) {
        err << "I/O error: " << e.what() << "\n";
        return exit_io;
    }
    if (!result.converged) {
        err << "non-convergence: some quadrature cells hit the panel budget; see the converged column\n";
        return exit_nonconvergence;
    }
    return exit_ok;
}

}  // namespace magnon
