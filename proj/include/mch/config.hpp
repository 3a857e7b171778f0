#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mch/basis.hpp"
#include "mch/model.hpp"
#include "mch/sampler.hpp"
#include "mch/spectral.hpp"
#include "mch/transition.hpp"

namespace mch {

// Flat "section.key = value" run description. List-valued keys accept a
// single value, which is broadcast to every axis.
struct RunConfig {
    struct Model {
        std::string geometry;   // particle | chain
        std::string potential;  // particle only, see potential_name()
        int dimension = 0;      // particle; 0 = implied by the potential
        double omega = 1.0;
        double v0 = 1.0;
        double force = 1.0;
        double lambda = 1.0;
        double mass = 1.0;
        double hbar = 1.0;
        int n_osc = 0;
        double omega_coupling = 1.0;
        double omega_onsite = 1.0;
    } model;

    struct Time {
        double t_total = 0.0;
        int n_slices = 64;
    } time;

    struct Basis {
        std::string kind;  // regular | stochastic
        std::vector<int> counts;
        std::vector<double> low;
        std::vector<double> high;
        long size = 0;
        std::string sigma_policy;  // model | explicit
        std::vector<double> sigma;
        double sigma_scale = 1.0;
        double sigma_time = 0.0;  // t'_f; 0 = use time.t_total
        std::uint64_t seed = 1;
    } basis;

    struct Mc {
        std::string method = "bridge";  // bridge | metropolis
        long n_paths = 1000;
        std::uint64_t seed = 20021;
        std::string streams = "common";  // common | per_entry
        bool symmetric_fill = true;
        double step_size = 0.5;
        int n_thermalize = 200;
        int n_decorrelate = 5;
    } mc;

    struct Spectral {
        double floor_factor = 1e-3;
        double floor_absolute = 1e-12;
        std::optional<double> floor;
    } spectral;

    struct Output {
        std::string dir = "out";
        double beta_min = 0.1;
        double beta_max = 10.0;
        int beta_count = 50;
        int wavefunctions = 10;
        bool write_matrix = false;
        std::string matrix_format = "binary";  // binary | csv | both
    } output;

    struct Oracle {
        bool enabled = true;
        int levels = 20;
        std::vector<int> grid_points;  // empty = 2000 (1-D) or 40 per axis (2-D)
        std::vector<double> grid_low = {-10.0};
        std::vector<double> grid_high = {10.0};
    } oracle;
};

// Parses and validates; throws ConfigError with the offending line number.
RunConfig parse_config(std::string_view text);

// Canonical text with every relevant key written out (defaults included), so
// parse_config(echo_config(c)) reproduces c and its echo byte for byte.
std::string echo_config(const RunConfig& cfg);

ModelSpec make_model(const RunConfig& cfg);
BasisSet make_basis(const RunConfig& cfg, const ModelSpec& model, bool* sigma_fallback = nullptr);
SamplerConfig make_sampler(const RunConfig& cfg);
MatrixOptions make_matrix_options(const RunConfig& cfg, unsigned threads);
FloorPolicy make_floor_policy(const RunConfig& cfg);
std::vector<double> make_beta_grid(const RunConfig& cfg);

}  // namespace mch
