#include "magnon/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace magnon {

MagnetParams MaterialConfig::params() const {
    MagnetParams p;
    p.omega0 = units::omega_from_mev(resonance_mev);
    p.gamma = units::omega_from_mev(damping_mev);
    if (strength_mev2) {
        p.strength = *strength_mev2 / (units::hbar_mev_us * units::hbar_mev_us);
    } else {
        p.strength = calibrate_strength(resonance_mev, polariton_mev);
    }
    p.eps2 = eps_slab;
    p.eps1 = eps_cladding;
    p.mu1 = mu_cladding;
    return p;
}

std::vector<double> GridConfig::values() const {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : double(i) / double(points - 1);
        out[i] = log_spacing ? min * std::pow(max / min, f) : min + (max - min) * f;
    }
    return out;
}

namespace {

void check_grid(const GridConfig& g, const char* name, bool positive) {
    const std::string n = name;
    if (g.points == 0) throw ConfigError(n + ".points must be >= 1");
    if (!std::isfinite(g.min) || !std::isfinite(g.max)) throw ConfigError(n + ": bounds must be finite");
    if (g.points > 1 && !(g.max > g.min)) throw ConfigError(n + ": max must exceed min");
    if ((positive || g.log_spacing) && !(g.min > 0.0)) throw ConfigError(n + ": min must be > 0");
}

template <class Fn>
void wrap(const char* block, Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(block) + ": " + e.what());
    }
}

}  // namespace

void RunConfig::validate() const {
    wrap("material", [&] {
        if (!material.strength_mev2 && !(material.polariton_mev > material.resonance_mev))
            throw std::invalid_argument("polariton_mev must exceed resonance_mev");
        material.params().validate();
    });
    wrap("geometry", [&] { geometry.validate(); });
    wrap("emitter", [&] { emitter.validate(); });
    wrap("quadrature", [&] { quadrature.validate(); });
    check_grid(spectrum, "spectrum", true);
    check_grid(wavevector, "wavevector", true);
    if (!(map_height > 0.0)) throw ConfigError("wavevector.map_height_nm must be > 0");
    if (dynamics.tolerance <= 0.0) throw ConfigError("dynamics.tolerance must be > 0");
    wrap("dynamics", [&] { dynamics_settings().validate(); });
    wrap("sweep", [&] {
        SweepAxes{sweep.energy_mev, sweep.height_nm, sweep.separation_nm, sweep.thickness_nm}.validate();
    });
}

DynamicsSettings RunConfig::dynamics_settings() const {
    DynamicsSettings s;
    s.omega1 = emitter.omega1();
    s.t_max = dynamics.t_max_us;
    s.dt = dynamics.dt_us;
    s.memory = dynamics.memory_us;
    s.tolerance = dynamics.tolerance;
    s.stride = dynamics.stride;
    s.c1_0 = {dynamics.c1_re, dynamics.c1_im};
    s.c2_0 = {dynamics.c2_re, dynamics.c2_im};
    return s;
}

namespace {

using Setter = std::function<void(const YAML::Node&)>;

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) throw ConfigError(key + ": expected a scalar");
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(key + ": cannot parse '" + n.Scalar() + "'");
    }
}

std::size_t count(const YAML::Node& n, const std::string& key) {
    const long long v = scalar<long long>(n, key);
    if (v < 0) throw ConfigError(key + ": must be >= 0");
    return static_cast<std::size_t>(v);
}

std::vector<double> list(const YAML::Node& n, const std::string& key) {
    if (n.IsScalar()) return {scalar<double>(n, key)};
    if (!n.IsSequence()) throw ConfigError(key + ": expected a number or a list");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(scalar<double>(item, key));
    return out;
}

void apply(const YAML::Node& node, const std::string& path, const std::map<std::string, Setter>& keys) {
    if (!node.IsMap()) throw ConfigError(path + ": expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        const auto it = keys.find(key);
        const std::string full = path.empty() ? key : path + "." + key;
        if (it == keys.end()) throw ConfigError("unknown key '" + full + "'");
        it->second(kv.second);
    }
}

std::map<std::string, Setter> grid_keys(GridConfig& g, const std::string& path, const std::string& unit) {
    return {
        {"min_" + unit, [&g, path, unit](const YAML::Node& n) { g.min = scalar<double>(n, path + ".min_" + unit); }},
        {"max_" + unit, [&g, path, unit](const YAML::Node& n) { g.max = scalar<double>(n, path + ".max_" + unit); }},
        {"points", [&g, path](const YAML::Node& n) { g.points = count(n, path + ".points"); }},
        {"spacing",
         [&g, path](const YAML::Node& n) {
             const auto s = scalar<std::string>(n, path + ".spacing");
             if (s != "linear" && s != "log") throw ConfigError(path + ".spacing must be 'linear' or 'log'");
             g.log_spacing = s == "log";
         }},
    };
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("YAML syntax: ") + e.what());
    }
    RunConfig c;
    if (root.IsNull()) return c;

    auto d = [](double& field, const std::string& key) {
        return [&field, key](const YAML::Node& n) { field = scalar<double>(n, key); };
    };
    auto& m = c.material;
    auto& g = c.geometry;
    auto& e = c.emitter;
    auto& q = c.quadrature;
    auto& dy = c.dynamics;
    auto& sw = c.sweep;

    apply(root, "",
          {
              {"material",
               [&](const YAML::Node& n) {
                   apply(n, "material",
                         {
                             {"resonance_mev", d(m.resonance_mev, "material.resonance_mev")},
                             {"polariton_mev", d(m.polariton_mev, "material.polariton_mev")},
                             {"damping_mev", d(m.damping_mev, "material.damping_mev")},
                             {"strength_mev2",
                              [&](const YAML::Node& v) {
                                  m.strength_mev2 = scalar<double>(v, "material.strength_mev2");
                              }},
                             {"eps_slab", d(m.eps_slab, "material.eps_slab")},
                             {"eps_cladding", d(m.eps_cladding, "material.eps_cladding")},
                             {"mu_cladding", d(m.mu_cladding, "material.mu_cladding")},
                         });
               }},
              {"geometry",
               [&](const YAML::Node& n) {
                   apply(n, "geometry",
                         {
                             {"thickness_nm", d(g.thickness, "geometry.thickness_nm")},
                             {"height_nm", d(g.height, "geometry.height_nm")},
                             {"separation_nm", d(g.separation, "geometry.separation_nm")},
                         });
               }},
              {"emitter",
               [&](const YAML::Node& n) {
                   apply(n, "emitter",
                         {
                             {"energy_mev", d(e.hbar_omega1, "emitter.energy_mev")},
                             {"spin", d(e.spin, "emitter.spin")},
                             {"g_factor", d(e.g_factor, "emitter.g_factor")},
                         });
               }},
              {"quadrature",
               [&](const YAML::Node& n) {
                   apply(n, "quadrature",
                         {
                             {"rel_tol", d(q.rel_tol, "quadrature.rel_tol")},
                             {"abs_tol", d(q.abs_tol, "quadrature.abs_tol")},
                             {"k_max_factor", d(q.k_max_factor, "quadrature.k_max_factor")},
                             {"max_panels",
                              [&](const YAML::Node& v) { q.max_panels = count(v, "quadrature.max_panels"); }},
                         });
               }},
              {"spectrum", [&](const YAML::Node& n) { apply(n, "spectrum", grid_keys(c.spectrum, "spectrum", "mev")); }},
              {"wavevector",
               [&](const YAML::Node& n) {
                   auto keys = grid_keys(c.wavevector, "wavevector", "per_nm");
                   keys["map_height_nm"] = d(c.map_height, "wavevector.map_height_nm");
                   apply(n, "wavevector", keys);
               }},
              {"dynamics",
               [&](const YAML::Node& n) {
                   apply(n, "dynamics",
                         {
                             {"t_max_us", d(dy.t_max_us, "dynamics.t_max_us")},
                             {"dt_us", d(dy.dt_us, "dynamics.dt_us")},
                             {"memory_us", d(dy.memory_us, "dynamics.memory_us")},
                             {"tolerance", d(dy.tolerance, "dynamics.tolerance")},
                             {"stride", [&](const YAML::Node& v) { dy.stride = count(v, "dynamics.stride"); }},
                             {"pair", [&](const YAML::Node& v) { dy.pair = scalar<bool>(v, "dynamics.pair"); }},
                             {"verify", [&](const YAML::Node& v) { dy.verify = scalar<bool>(v, "dynamics.verify"); }},
                             {"initial",
                              [&](const YAML::Node& v) {
                                  apply(v, "dynamics.initial",
                                        {
                                            {"c1_re", d(dy.c1_re, "dynamics.initial.c1_re")},
                                            {"c1_im", d(dy.c1_im, "dynamics.initial.c1_im")},
                                            {"c2_re", d(dy.c2_re, "dynamics.initial.c2_re")},
                                            {"c2_im", d(dy.c2_im, "dynamics.initial.c2_im")},
                                        });
                              }},
                         });
               }},
              {"sweep",
               [&](const YAML::Node& n) {
                   apply(n, "sweep",
                         {
                             {"energy_mev", [&](const YAML::Node& v) { sw.energy_mev = list(v, "sweep.energy_mev"); }},
                             {"height_nm", [&](const YAML::Node& v) { sw.height_nm = list(v, "sweep.height_nm"); }},
                             {"separation_nm",
                              [&](const YAML::Node& v) { sw.separation_nm = list(v, "sweep.separation_nm"); }},
                             {"thickness_nm",
                              [&](const YAML::Node& v) { sw.thickness_nm = list(v, "sweep.thickness_nm"); }},
                         });
               }},
              {"output",
               [&](const YAML::Node& n) {
                   apply(n, "output",
                         {{"directory", [&](const YAML::Node& v) {
                               c.output_dir = scalar<std::string>(v, "output.directory");
                           }}});
               }},
              {"run",
               [&](const YAML::Node& n) {
                   apply(n, "run", {{"workers", [&](const YAML::Node& v) {
                                         c.workers = static_cast<unsigned>(count(v, "run.workers"));
                                     }}});
               }},
          });
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    // A CSV written by this program: pull the YAML out of its header.
    const std::string begin = std::string("# ") + config_begin_marker;
    if (text.rfind(begin, 0) == 0 || text.find("\n" + begin) != std::string::npos) {
        std::istringstream lines(text);
        std::string line, yaml;
        bool inside = false;
        while (std::getline(lines, line)) {
            if (line == begin) {
                inside = true;
            } else if (line == std::string("# ") + config_end_marker) {
                return parse_config(yaml);
            } else if (inside) {
                if (line.rfind("# ", 0) == 0)
                    yaml += line.substr(2) + "\n";
                else if (line == "#")
                    yaml += "\n";
                else
                    throw ConfigError("malformed config block in " + path.string());
            }
        }
        throw ConfigError("unterminated config block in " + path.string());
    }
    return parse_config(text);
}

std::string dump_config(const RunConfig& c) {
    auto list = [](const std::vector<double>& v) { return fmt::format("[{}]", fmt::join(v, ", ")); };
    auto grid = [](const GridConfig& g, const char* unit) {
        return fmt::format("  min_{1}: {0}\n  max_{1}: {2}\n  points: {3}\n  spacing: {4}\n", g.min, unit, g.max,
                           g.points, g.log_spacing ? "log" : "linear");
    };
    std::string out;
    out += "material:\n";
    out += fmt::format("  resonance_mev: {}\n", c.material.resonance_mev);
    if (c.material.strength_mev2)
        out += fmt::format("  strength_mev2: {}\n", *c.material.strength_mev2);
    else
        out += fmt::format("  polariton_mev: {}\n", c.material.polariton_mev);
    out += fmt::format("  damping_mev: {}\n  eps_slab: {}\n  eps_cladding: {}\n  mu_cladding: {}\n", c.material.damping_mev,
                       c.material.eps_slab, c.material.eps_cladding, c.material.mu_cladding);
    out += fmt::format("geometry:\n  thickness_nm: {}\n  height_nm: {}\n  separation_nm: {}\n", c.geometry.thickness,
                       c.geometry.height, c.geometry.separation);
    out += fmt::format("emitter:\n  energy_mev: {}\n  spin: {}\n  g_factor: {}\n", c.emitter.hbar_omega1, c.emitter.spin,
                       c.emitter.g_factor);
    out += fmt::format("quadrature:\n  rel_tol: {}\n  abs_tol: {}\n  k_max_factor: {}\n  max_panels: {}\n",
                       c.quadrature.rel_tol, c.quadrature.abs_tol, c.quadrature.k_max_factor,
                       c.quadrature.max_panels);
    out += "spectrum:\n" + grid(c.spectrum, "mev");
    out += "wavevector:\n" + grid(c.wavevector, "per_nm");
    out += fmt::format("  map_height_nm: {}\n", c.map_height);
    const auto& d = c.dynamics;
    out += fmt::format(
        "dynamics:\n  t_max_us: {}\n  dt_us: {}\n  memory_us: {}\n  tolerance: {}\n  stride: {}\n  pair: {}\n"
        "  verify: {}\n  initial:\n    c1_re: {}\n    c1_im: {}\n    c2_re: {}\n    c2_im: {}\n",
        d.t_max_us, d.dt_us, d.memory_us, d.tolerance, d.stride, d.pair, d.verify, d.c1_re, d.c1_im, d.c2_re,
        d.c2_im);
    out += fmt::format("sweep:\n  energy_mev: {}\n  height_nm: {}\n  separation_nm: {}\n  thickness_nm: {}\n",
                       list(c.sweep.energy_mev), list(c.sweep.height_nm), list(c.sweep.separation_nm),
                       list(c.sweep.thickness_nm));
    return out;
}

}  // namespace magnon
