#include "mch/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mch/error.hpp"
#include "mch/format.hpp"

namespace mch {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

double to_real(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(std::string(key) + ": expected a real number, got '" + std::string(v) + "'");
    return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
    Int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

std::string to_choice(std::string_view key, std::string_view v, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (v == a) return std::string(v);
    std::string msg = std::string(key) + ": '" + std::string(v) + "' is not one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ConfigError(msg);
}

std::vector<double> to_reals(std::string_view key, std::string_view v) {
    std::vector<double> out;
    for (auto item : split_list(v)) out.push_back(to_real(key, item));
    return out;
}

std::vector<int> to_ints(std::string_view key, std::string_view v) {
    std::vector<int> out;
    for (auto item : split_list(v)) out.push_back(to_int<int>(key, item));
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_shortest(v[i]);
    return out;
}

std::string join(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
    return out;
}

const char* const kPotentials[] = {"zero",       "harmonic1d", "sech",
                                   "anharmonic", "abs_linear", "wall_linear",
                                   "harmonic2d", "coupled_harmonic2d", "harmonic3d"};

PotentialSpec potential_from_config(const RunConfig::Model& m) {
    if (m.potential == "zero") return potential::Zero{};
    if (m.potential == "harmonic1d") return potential::Harmonic1D{m.omega};
    if (m.potential == "sech") return potential::SechWell{m.v0};
    if (m.potential == "anharmonic") return potential::Anharmonic{};
    if (m.potential == "abs_linear") return potential::AbsLinear{};
    if (m.potential == "wall_linear") return potential::WallLinear{m.force};
    if (m.potential == "harmonic2d") return potential::Harmonic2D{m.omega};
    if (m.potential == "coupled_harmonic2d") return potential::CoupledHarmonic2D{m.omega, m.lambda};
    if (m.potential == "harmonic3d") return potential::Harmonic3D{m.omega};
    throw ConfigError("model.potential: unknown potential '" + m.potential + "'");
}

bool is_particle(const RunConfig& c) { return c.model.geometry == "particle"; }
bool is_chain(const RunConfig& c) { return c.model.geometry == "chain"; }
bool is_regular(const RunConfig& c) { return c.basis.kind == "regular"; }
bool is_stochastic(const RunConfig& c) { return c.basis.kind == "stochastic"; }
bool uses_omega(const RunConfig& c) {
    const auto& p = c.model.potential;
    return is_particle(c) && (p == "harmonic1d" || p == "harmonic2d" || p == "harmonic3d" ||
                              p == "coupled_harmonic2d");
}

struct Key {
    const char* name;
    bool required;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
    std::function<bool(const RunConfig&)> relevant;
};

auto always = [](const RunConfig&) { return true; };

const std::vector<Key>& key_table() {
    static const std::vector<Key> keys = {
        {"model.geometry", true,
         [](RunConfig& c, std::string_view v) { c.model.geometry = to_choice("model.geometry", v, {"particle", "chain"}); },
         [](const RunConfig& c) { return c.model.geometry; }, always},
        {"model.potential", false,
         [](RunConfig& c, std::string_view v) {
             const auto* it = std::find(std::begin(kPotentials), std::end(kPotentials), v);
             if (it == std::end(kPotentials))
                 throw ConfigError("model.potential: unknown potential '" + std::string(v) + "'");
             c.model.potential = std::string(v);
         },
         [](const RunConfig& c) { return c.model.potential; }, is_particle},
        {"model.dimension", false,
         [](RunConfig& c, std::string_view v) { c.model.dimension = to_int<int>("model.dimension", v); },
         [](const RunConfig& c) { return std::to_string(c.model.dimension); }, is_particle},
        {"model.omega", false,
         [](RunConfig& c, std::string_view v) { c.model.omega = to_real("model.omega", v); },
         [](const RunConfig& c) { return format_shortest(c.model.omega); }, uses_omega},
        {"model.v0", false, [](RunConfig& c, std::string_view v) { c.model.v0 = to_real("model.v0", v); },
         [](const RunConfig& c) { return format_shortest(c.model.v0); },
         [](const RunConfig& c) { return is_particle(c) && c.model.potential == "sech"; }},
        {"model.force", false,
         [](RunConfig& c, std::string_view v) { c.model.force = to_real("model.force", v); },
         [](const RunConfig& c) { return format_shortest(c.model.force); },
         [](const RunConfig& c) { return is_particle(c) && c.model.potential == "wall_linear"; }},
        {"model.lambda", false,
         [](RunConfig& c, std::string_view v) { c.model.lambda = to_real("model.lambda", v); },
         [](const RunConfig& c) { return format_shortest(c.model.lambda); },
         [](const RunConfig& c) { return is_particle(c) && c.model.potential == "coupled_harmonic2d"; }},
        {"model.mass", false, [](RunConfig& c, std::string_view v) { c.model.mass = to_real("model.mass", v); },
         [](const RunConfig& c) { return format_shortest(c.model.mass); }, always},
        {"model.hbar", false, [](RunConfig& c, std::string_view v) { c.model.hbar = to_real("model.hbar", v); },
         [](const RunConfig& c) { return format_shortest(c.model.hbar); }, always},
        {"model.n_osc", false, [](RunConfig& c, std::string_view v) { c.model.n_osc = to_int<int>("model.n_osc", v); },
         [](const RunConfig& c) { return std::to_string(c.model.n_osc); }, is_chain},
        {"model.omega_coupling", false,
         [](RunConfig& c, std::string_view v) { c.model.omega_coupling = to_real("model.omega_coupling", v); },
         [](const RunConfig& c) { return format_shortest(c.model.omega_coupling); }, is_chain},
        {"model.omega_onsite", false,
         [](RunConfig& c, std::string_view v) { c.model.omega_onsite = to_real("model.omega_onsite", v); },
         [](const RunConfig& c) { return format_shortest(c.model.omega_onsite); }, is_chain},

        {"time.t_total", true, [](RunConfig& c, std::string_view v) { c.time.t_total = to_real("time.t_total", v); },
         [](const RunConfig& c) { return format_shortest(c.time.t_total); }, always},
        {"time.n_slices", false,
         [](RunConfig& c, std::string_view v) { c.time.n_slices = to_int<int>("time.n_slices", v); },
         [](const RunConfig& c) { return std::to_string(c.time.n_slices); }, always},

        {"basis.kind", true,
         [](RunConfig& c, std::string_view v) { c.basis.kind = to_choice("basis.kind", v, {"regular", "stochastic"}); },
         [](const RunConfig& c) { return c.basis.kind; }, always},
        {"basis.counts", false, [](RunConfig& c, std::string_view v) { c.basis.counts = to_ints("basis.counts", v); },
         [](const RunConfig& c) { return join(c.basis.counts); }, is_regular},
        {"basis.low", false, [](RunConfig& c, std::string_view v) { c.basis.low = to_reals("basis.low", v); },
         [](const RunConfig& c) { return join(c.basis.low); }, is_regular},
        {"basis.high", false, [](RunConfig& c, std::string_view v) { c.basis.high = to_reals("basis.high", v); },
         [](const RunConfig& c) { return join(c.basis.high); }, is_regular},
        {"basis.size", false, [](RunConfig& c, std::string_view v) { c.basis.size = to_int<long>("basis.size", v); },
         [](const RunConfig& c) { return std::to_string(c.basis.size); }, is_stochastic},
        {"basis.sigma_policy", false,
         [](RunConfig& c, std::string_view v) {
             c.basis.sigma_policy = to_choice("basis.sigma_policy", v, {"model", "explicit"});
         },
         [](const RunConfig& c) { return c.basis.sigma_policy; }, is_stochastic},
        {"basis.sigma", false, [](RunConfig& c, std::string_view v) { c.basis.sigma = to_reals("basis.sigma", v); },
         [](const RunConfig& c) { return join(c.basis.sigma); },
         [](const RunConfig& c) { return is_stochastic(c) && c.basis.sigma_policy == "explicit"; }},
        {"basis.sigma_scale", false,
         [](RunConfig& c, std::string_view v) { c.basis.sigma_scale = to_real("basis.sigma_scale", v); },
         [](const RunConfig& c) { return format_shortest(c.basis.sigma_scale); }, is_stochastic},
        {"basis.sigma_time", false,
         [](RunConfig& c, std::string_view v) { c.basis.sigma_time = to_real("basis.sigma_time", v); },
         [](const RunConfig& c) { return format_shortest(c.basis.sigma_time); },
         [](const RunConfig& c) { return is_stochastic(c) && c.basis.sigma_policy == "model"; }},
        {"basis.seed", false,
         [](RunConfig& c, std::string_view v) { c.basis.seed = to_int<std::uint64_t>("basis.seed", v); },
         [](const RunConfig& c) { return std::to_string(c.basis.seed); }, is_stochastic},

        {"mc.method", false,
         [](RunConfig& c, std::string_view v) { c.mc.method = to_choice("mc.method", v, {"bridge", "metropolis"}); },
         [](const RunConfig& c) { return c.mc.method; }, always},
        {"mc.n_paths", false, [](RunConfig& c, std::string_view v) { c.mc.n_paths = to_int<long>("mc.n_paths", v); },
         [](const RunConfig& c) { return std::to_string(c.mc.n_paths); }, always},
        {"mc.seed", false, [](RunConfig& c, std::string_view v) { c.mc.seed = to_int<std::uint64_t>("mc.seed", v); },
         [](const RunConfig& c) { return std::to_string(c.mc.seed); }, always},
        {"mc.streams", false,
         [](RunConfig& c, std::string_view v) { c.mc.streams = to_choice("mc.streams", v, {"common", "per_entry"}); },
         [](const RunConfig& c) { return c.mc.streams; }, always},
        {"mc.symmetric_fill", false,
         [](RunConfig& c, std::string_view v) { c.mc.symmetric_fill = to_bool("mc.symmetric_fill", v); },
         [](const RunConfig& c) { return std::string(c.mc.symmetric_fill ? "true" : "false"); }, always},
        {"mc.step_size", false,
         [](RunConfig& c, std::string_view v) { c.mc.step_size = to_real("mc.step_size", v); },
         [](const RunConfig& c) { return format_shortest(c.mc.step_size); },
         [](const RunConfig& c) { return c.mc.method == "metropolis"; }},
        {"mc.n_thermalize", false,
         [](RunConfig& c, std::string_view v) { c.mc.n_thermalize = to_int<int>("mc.n_thermalize", v); },
         [](const RunConfig& c) { return std::to_string(c.mc.n_thermalize); },
         [](const RunConfig& c) { return c.mc.method == "metropolis"; }},
        {"mc.n_decorrelate", false,
         [](RunConfig& c, std::string_view v) { c.mc.n_decorrelate = to_int<int>("mc.n_decorrelate", v); },
         [](const RunConfig& c) { return std::to_string(c.mc.n_decorrelate); },
         [](const RunConfig& c) { return c.mc.method == "metropolis"; }},

        {"spectral.floor_factor", false,
         [](RunConfig& c, std::string_view v) { c.spectral.floor_factor = to_real("spectral.floor_factor", v); },
         [](const RunConfig& c) { return format_shortest(c.spectral.floor_factor); }, always},
        {"spectral.floor_absolute", false,
         [](RunConfig& c, std::string_view v) { c.spectral.floor_absolute = to_real("spectral.floor_absolute", v); },
         [](const RunConfig& c) { return format_shortest(c.spectral.floor_absolute); }, always},
        {"spectral.floor", false,
         [](RunConfig& c, std::string_view v) { c.spectral.floor = to_real("spectral.floor", v); },
         [](const RunConfig& c) { return format_shortest(c.spectral.floor.value_or(0.0)); },
         [](const RunConfig& c) { return c.spectral.floor.has_value(); }},

        {"output.dir", false, [](RunConfig& c, std::string_view v) { c.output.dir = std::string(v); },
         [](const RunConfig& c) { return c.output.dir; }, always},
        {"output.beta_min", false,
         [](RunConfig& c, std::string_view v) { c.output.beta_min = to_real("output.beta_min", v); },
         [](const RunConfig& c) { return format_shortest(c.output.beta_min); }, always},
        {"output.beta_max", false,
         [](RunConfig& c, std::string_view v) { c.output.beta_max = to_real("output.beta_max", v); },
         [](const RunConfig& c) { return format_shortest(c.output.beta_max); }, always},
        {"output.beta_count", false,
         [](RunConfig& c, std::string_view v) { c.output.beta_count = to_int<int>("output.beta_count", v); },
         [](const RunConfig& c) { return std::to_string(c.output.beta_count); }, always},
        {"output.wavefunctions", false,
         [](RunConfig& c, std::string_view v) { c.output.wavefunctions = to_int<int>("output.wavefunctions", v); },
         [](const RunConfig& c) { return std::to_string(c.output.wavefunctions); }, always},
        {"output.write_matrix", false,
         [](RunConfig& c, std::string_view v) { c.output.write_matrix = to_bool("output.write_matrix", v); },
         [](const RunConfig& c) { return std::string(c.output.write_matrix ? "true" : "false"); }, always},
        {"output.matrix_format", false,
         [](RunConfig& c, std::string_view v) {
             c.output.matrix_format = to_choice("output.matrix_format", v, {"binary", "csv", "both"});
         },
         [](const RunConfig& c) { return c.output.matrix_format; },
         [](const RunConfig& c) { return c.output.write_matrix; }},

        {"oracle.enabled", false,
         [](RunConfig& c, std::string_view v) { c.oracle.enabled = to_bool("oracle.enabled", v); },
         [](const RunConfig& c) { return std::string(c.oracle.enabled ? "true" : "false"); }, always},
        {"oracle.levels", false,
         [](RunConfig& c, std::string_view v) { c.oracle.levels = to_int<int>("oracle.levels", v); },
         [](const RunConfig& c) { return std::to_string(c.oracle.levels); }, always},
        {"oracle.grid_points", false,
         [](RunConfig& c, std::string_view v) { c.oracle.grid_points = to_ints("oracle.grid_points", v); },
         [](const RunConfig& c) { return join(c.oracle.grid_points); }, is_particle},
        {"oracle.grid_low", false,
         [](RunConfig& c, std::string_view v) { c.oracle.grid_low = to_reals("oracle.grid_low", v); },
         [](const RunConfig& c) { return join(c.oracle.grid_low); }, is_particle},
        {"oracle.grid_high", false,
         [](RunConfig& c, std::string_view v) { c.oracle.grid_high = to_reals("oracle.grid_high", v); },
         [](const RunConfig& c) { return join(c.oracle.grid_high); }, is_particle},
    };
    return keys;
}

const std::set<std::string, std::less<>> kSections = {"model", "time", "basis", "mc", "spectral", "output",
                                                      "oracle"};

template <class T>
std::vector<T> broadcast(const std::vector<T>& v, int dim, const char* key) {
    if (v.size() == 1) return std::vector<T>(static_cast<std::size_t>(dim), v[0]);
    if (v.size() != static_cast<std::size_t>(dim))
        throw ConfigError(std::string(key) + ": expected 1 or " + std::to_string(dim) + " values, got " +
                          std::to_string(v.size()));
    return v;
}

void require(bool present, const char* key) {
    if (!present) throw ConfigError(std::string("missing required key '") + key + "'");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::set<std::string, std::less<>> seen;
    const auto& keys = key_table();

    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'section.key = value'", line_no);
        const std::string_view name = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto dot = name.find('.');
        if (dot == std::string_view::npos || dot == 0 || dot + 1 == name.size())
            throw ConfigError("key '" + std::string(name) + "' is not of the form section.key", line_no);
        if (!kSections.contains(name.substr(0, dot)))
            throw ConfigError("unknown section '" + std::string(name.substr(0, dot)) + "'", line_no);
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return name == k.name; });
        if (it == keys.end()) throw ConfigError("unknown key '" + std::string(name) + "'", line_no);
        if (!seen.insert(std::string(name)).second)
            throw ConfigError("duplicate key '" + std::string(name) + "'", line_no);
        if (value.empty()) throw ConfigError("key '" + std::string(name) + "' has no value", line_no);
        try {
            it->set(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), line_no);
        }
    }

    for (const auto& k : keys)
        if (k.required) require(seen.contains(k.name), k.name);
    if (is_particle(cfg)) require(seen.contains("model.potential"), "model.potential");
    if (is_chain(cfg)) require(seen.contains("model.n_osc"), "model.n_osc");
    if (is_regular(cfg)) {
        require(seen.contains("basis.counts"), "basis.counts");
        require(seen.contains("basis.low"), "basis.low");
        require(seen.contains("basis.high"), "basis.high");
    }
    if (is_stochastic(cfg)) {
        require(seen.contains("basis.size"), "basis.size");
        require(seen.contains("basis.sigma_policy"), "basis.sigma_policy");
        if (cfg.basis.sigma_policy == "explicit") require(seen.contains("basis.sigma"), "basis.sigma");
    }

    // Materialise implied values so the echo is fully explicit.
    if (is_particle(cfg) && cfg.model.dimension == 0)
        cfg.model.dimension = std::max(1, implied_dimension(potential_from_config(cfg.model)));
    if (is_stochastic(cfg) && cfg.basis.sigma_policy == "model" && cfg.basis.sigma_time == 0.0)
        cfg.basis.sigma_time = cfg.time.t_total;
    if (is_particle(cfg) && cfg.oracle.grid_points.empty())
        cfg.oracle.grid_points = {cfg.model.dimension == 1 ? 2000 : 40};

    // Full semantic validation through the same constructors the run uses.
    try {
        const ModelSpec model = make_model(cfg);
        const int dim = model.dimension();
        if (is_regular(cfg)) {
            broadcast(cfg.basis.counts, dim, "basis.counts");
            broadcast(cfg.basis.low, dim, "basis.low");
            broadcast(cfg.basis.high, dim, "basis.high");
        } else {
            if (cfg.basis.size < 1) throw ConfigError("basis.size must be at least 1");
            if (!(cfg.basis.sigma_scale > 0.0)) throw ConfigError("basis.sigma_scale must be positive");
            if (cfg.basis.sigma_policy == "explicit") broadcast(cfg.basis.sigma, dim, "basis.sigma");
            else if (!(cfg.basis.sigma_time > 0.0)) throw ConfigError("basis.sigma_time must be positive");
        }
        make_sampler(cfg).validate();
        make_beta_grid(cfg);
        if (cfg.output.wavefunctions < 0) throw ConfigError("output.wavefunctions must be non-negative");
        if (cfg.oracle.levels < 1) throw ConfigError("oracle.levels must be at least 1");
        if (is_particle(cfg) && dim <= 2) {
            broadcast(cfg.oracle.grid_points, dim, "oracle.grid_points");
            broadcast(cfg.oracle.grid_low, dim, "oracle.grid_low");
            broadcast(cfg.oracle.grid_high, dim, "oracle.grid_high");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::string echo_config(const RunConfig& cfg) {
    std::ostringstream os;
    std::string section;
    for (const auto& k : key_table()) {
        if (!k.relevant(cfg)) continue;
        const std::string_view name = k.name;
        const std::string sec(name.substr(0, name.find('.')));
        if (sec != section) {
            if (!section.empty()) os << '\n';
            section = sec;
        }
        os << k.name << " = " << k.get(cfg) << '\n';
    }
    return os.str();
}

ModelSpec make_model(const RunConfig& cfg) {
    const PhysicalParams params{cfg.model.mass, cfg.model.hbar};
    const TimeWindow time{cfg.time.t_total, cfg.time.n_slices};
    if (is_chain(cfg)) {
        return ModelSpec::chain({cfg.model.n_osc, cfg.model.omega_coupling, cfg.model.omega_onsite}, params,
                                time);
    }
    return ModelSpec::particle(potential_from_config(cfg.model), params, time,
                               cfg.model.dimension);
}

BasisSet make_basis(const RunConfig& cfg, const ModelSpec& model, bool* sigma_fallback) {
    const int dim = model.dimension();
    if (sigma_fallback) *sigma_fallback = false;
    if (is_regular(cfg)) {
        const auto counts = broadcast(cfg.basis.counts, dim, "basis.counts");
        const auto low = broadcast(cfg.basis.low, dim, "basis.low");
        const auto high = broadcast(cfg.basis.high, dim, "basis.high");
        return build_regular_basis(dim, counts, low, high);
    }
    Config sigma;
    if (cfg.basis.sigma_policy == "explicit") {
        sigma = broadcast(cfg.basis.sigma, dim, "basis.sigma");
    } else {
        const SigmaChoice choice = stochastic_sigma(model, cfg.basis.sigma_time);
        sigma = choice.sigma;
        if (sigma_fallback) *sigma_fallback = choice.fallback;
    }
    for (double& s : sigma) s *= cfg.basis.sigma_scale;
    return build_stochastic_basis(dim, static_cast<std::size_t>(cfg.basis.size), sigma, cfg.basis.seed);
}

SamplerConfig make_sampler(const RunConfig& cfg) {
    SamplerConfig out;
    if (cfg.mc.n_paths < 2) throw ConfigError("mc.n_paths must be at least 2");
    out.n_paths = static_cast<std::size_t>(cfg.mc.n_paths);
    out.seed = cfg.mc.seed;
    if (cfg.mc.method == "metropolis") out.method = Metropolis{cfg.mc.step_size, cfg.mc.n_thermalize, cfg.mc.n_decorrelate};
    else out.method = BrownianBridge{};
    return out;
}

MatrixOptions make_matrix_options(const RunConfig& cfg, unsigned threads) {
    MatrixOptions out;
    out.symmetric_fill = cfg.mc.symmetric_fill;
    out.streams = cfg.mc.streams == "per_entry" ? StreamPolicy::PerEntry : StreamPolicy::Common;
    out.threads = threads;
    return out;
}

FloorPolicy make_floor_policy(const RunConfig& cfg) {
    FloorPolicy out;
    out.absolute = cfg.spectral.floor_absolute;
    out.relative_factor = cfg.spectral.floor_factor;
    out.explicit_floor = cfg.spectral.floor;
    return out;
}

std::vector<double> make_beta_grid(const RunConfig& cfg) {
    const auto& o = cfg.output;
    if (o.beta_count < 1) throw ConfigError("output.beta_count must be at least 1");
    if (!(o.beta_min > 0.0)) throw ConfigError("output.beta_min must be positive");
    if (o.beta_count > 1 && !(o.beta_max > o.beta_min))
        throw ConfigError("output.beta_max must exceed output.beta_min");
    std::vector<double> out;
    for (int i = 0; i < o.beta_count; ++i)
        out.push_back(o.beta_count == 1 ? o.beta_min
                                        : o.beta_min + (o.beta_max - o.beta_min) * i / (o.beta_count - 1));
    return out;
}

}  // namespace mch
