#include "mch/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mch/error.hpp"
#include "mch/format.hpp"
#include "mch/oracle.hpp"

namespace mch {

namespace {

std::ofstream open_out(const std::filesystem::path& p, bool binary = false) {
    std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

std::filesystem::path resolve_dir(const RunConfig& cfg, const RunOptions& options) {
    std::filesystem::path dir = options.output_dir ? *options.output_dir : std::filesystem::path(cfg.output.dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Reads one named column of a CSV file; empty cells become NaN.
std::vector<double> read_column(const std::filesystem::path& path, const std::string& column) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot read " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw InputError(path.string() + " is empty");
    const auto header = split_csv(line);
    const auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) throw InputError(path.string() + " has no column '" + column + "'");
    const auto col = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (col >= cells.size() || cells[col].empty()) {
            out.push_back(std::nan(""));
            continue;
        }
        out.push_back(std::stod(cells[col]));
    }
    return out;
}

void log_table(std::ostream& os, const std::vector<double>& eff, const std::vector<double>& exact,
               std::size_t rows) {
    os << std::setw(4) << "n" << std::setw(22) << "E_eff" << std::setw(22) << "E_exact" << std::setw(14)
       << "rel_err" << '\n';
    os << std::fixed;
    for (std::size_t i = 0; i < std::min(rows, eff.size()); ++i) {
        os << std::setw(4) << i + 1 << std::setw(22) << std::setprecision(12) << eff[i];
        if (i < exact.size() && std::isfinite(exact[i]))
            os << std::setw(22) << exact[i] << std::setw(14) << std::setprecision(6)
               << std::abs(eff[i] - exact[i]) / std::abs(exact[i]);
        os << '\n';
    }
    os.unsetf(std::ios::floatfield);
}

}  // namespace

void write_spectrum_csv(std::ostream& os, const std::vector<double>& energies,
                        const std::vector<double>& exact) {
    os << "n,E_eff,E_exact,rel_err\n";
    for (std::size_t i = 0; i < energies.size(); ++i) {
        os << i + 1 << ',' << format_double(energies[i]) << ',';
        if (i < exact.size() && std::isfinite(exact[i]))
            os << format_double(exact[i]) << ',' << format_double(std::abs(energies[i] - exact[i]) / std::abs(exact[i]));
        else
            os << ',';
        os << '\n';
    }
}

OracleLevels oracle_levels(const RunConfig& cfg, const ModelSpec& model) {
    OracleLevels out;
    const auto count = static_cast<std::size_t>(cfg.oracle.levels);
    if (const auto* chain = model.chain_spec()) {
        const auto levels = chain_levels(*chain, model.params().hbar, count, model.params().mass);
        for (const auto& l : levels.levels) out.energies.push_back(l.energy);
        out.source = "chain";
        if (!levels.closes_multiplet) out.note = "last oracle level is part of a multiplet that continues";
        return out;
    }
    const auto& pot = *model.potential_spec();
    if (std::holds_alternative<potential::Zero>(pot)) {
        out.note = "free particle has a continuous spectrum; no oracle";
        return out;
    }
    if (const auto* h3 = std::get_if<potential::Harmonic3D>(&pot)) {
        out.energies = harmonic_levels(h3->omega, model.params().hbar, 3, count);
        out.source = "analytic";
        return out;
    }
    const int dim = model.dimension();
    auto bc = [dim](auto v) {
        if (v.size() == 1) v.resize(static_cast<std::size_t>(dim), v[0]);
        return v;
    };
    const GridSpec grid{bc(cfg.oracle.grid_points), bc(cfg.oracle.grid_low), bc(cfg.oracle.grid_high)};
    const auto levels = grid_hamiltonian_levels(model, grid, count);
    out.energies = levels.energies;
    out.source = "grid";
    if (!levels.boundary_ok()) {
        std::ostringstream os;
        os << "grid box too small: ground-state amplitude at the boundary is " << levels.boundary_amplitude;
        out.note = os.str();
    }
    return out;
}

RunResult run_pipeline(const RunConfig& cfg, const RunOptions& options, std::ostream* log) {
    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    result.output_dir = resolve_dir(cfg, options);

    RunConfig echo_cfg = cfg;
    echo_cfg.output.dir = result.output_dir.string();

    const ModelSpec model = make_model(cfg);
    bool sigma_fallback = false;
    const BasisSet basis = make_basis(cfg, model, &sigma_fallback);
    const SamplerConfig sampler = make_sampler(cfg);
    if (log) *log << "basis: " << basis.size() << " nodes in " << basis.dimension() << " dimension(s)\n";

    result.matrix = build_matrix(model, basis, sampler, make_matrix_options(cfg, options.threads));
    result.spectrum = diagonalize(result.matrix, basis, model.params(), make_floor_policy(cfg));
    result.thermo = thermodynamics(result.spectrum, make_beta_grid(cfg));
    if (cfg.oracle.enabled) result.oracle = oracle_levels(cfg, model);

    const auto& dir = result.output_dir;
    {
        auto os = open_out(dir / "run_echo.cfg");
        os << echo_config(echo_cfg);
    }
    {
        auto os = open_out(dir / "basis.txt");
        write_basis_table(os, basis);
    }
    {
        auto os = open_out(dir / "spectrum.csv");
        write_spectrum_csv(os, result.spectrum.energies, result.oracle.energies);
    }
    {
        auto os = open_out(dir / "wavefunctions.csv");
        const std::size_t states =
            std::min(result.spectrum.size(), static_cast<std::size_t>(cfg.output.wavefunctions));
        os << "node";
        for (int d = 0; d < basis.dimension(); ++d) os << ",x" << d + 1;
        os << ",cell_measure";
        for (std::size_t s = 0; s < states; ++s) os << ",psi_" << s + 1;
        os << '\n';
        for (std::size_t i = 0; i < basis.size(); ++i) {
            os << i;
            for (double x : basis[i].position) os << ',' << format_double(x);
            os << ',' << format_double(basis[i].cell_measure);
            for (std::size_t s = 0; s < states; ++s)
                os << ',' << format_double(result.spectrum.eigenvectors(static_cast<Eigen::Index>(i),
                                                                         static_cast<Eigen::Index>(s)));
            os << '\n';
        }
    }
    {
        auto os = open_out(dir / "thermo.csv");
        const auto& t = result.thermo;
        os << "beta,Z,log_Z,U,C,top_level_weight\n";
        for (std::size_t i = 0; i < t.beta.size(); ++i)
            os << format_double(t.beta[i]) << ',' << format_double(t.partition[i]) << ','
               << format_double(t.log_partition[i]) << ',' << format_double(t.energy[i]) << ','
               << format_double(t.specific_heat[i]) << ',' << format_double(t.top_level_weight[i]) << '\n';
    }
    if (cfg.output.write_matrix) {
        if (cfg.output.matrix_format != "csv") {
            auto os = open_out(dir / "matrix.bin", true);
            write_matrix_binary(os, result.matrix);
        }
        if (cfg.output.matrix_format != "binary") {
            auto os = open_out(dir / "matrix.csv");
            write_matrix_csv(os, result.matrix);
        }
    }

    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    {
        auto os = open_out(dir / "diagnostics.txt");
        const auto& m = result.matrix;
        std::vector<double> rel;
        for (Eigen::Index i = 0; i < m.size(); ++i)
            for (Eigen::Index j = 0; j < m.size(); ++j)
                rel.push_back(m.values(i, j) != 0.0 ? m.errors(i, j) / std::abs(m.values(i, j)) : 0.0);
        std::sort(rel.begin(), rel.end());
        os << "basis_nodes " << basis.size() << '\n';
        os << "basis_fingerprint " << basis.fingerprint() << '\n';
        if (sigma_fallback) os << "warning: no Gaussian width rule for this potential; free-particle sigma used\n";
        os << "matrix_relative_error_level " << format_double(m.relative_error_level()) << '\n';
        os << "entry_relative_error min " << format_double(rel.front()) << " median "
           << format_double(rel[rel.size() / 2]) << " max " << format_double(rel.back()) << '\n';
        os << "entries_relative_error_above_0.5 " << m.flagged_entries(0.5) << '\n';
        os << "max_matrix_asymmetry " << format_double(m.max_asymmetry()) << '\n';
        os << "lambda_floor " << format_double(result.spectrum.lambda_floor) << '\n';
        os << "eigenvalues_discarded " << result.spectrum.n_discarded << " (floor policy: noise-level cut, "
           << "see spectral.floor_factor)\n";
        os << "levels_kept " << result.spectrum.size() << '\n';
        for (const auto& [a, b] : result.spectrum.degenerate_multiplets())
            os << "degenerate_multiplet " << a + 1 << '-' << b + 1 << '\n';
        if (!result.thermo.top_level_weight.empty())
            os << "thermo_top_level_weight_at_beta_min " << format_double(result.thermo.top_level_weight.front())
               << '\n';
        if (!result.oracle.source.empty()) os << "oracle " << result.oracle.source << '\n';
        if (!result.oracle.note.empty()) os << "oracle_note " << result.oracle.note << '\n';
        os << "wall_seconds " << result.seconds << '\n';
    }

    if (log) {
        *log << "kept " << result.spectrum.size() << " levels, discarded " << result.spectrum.n_discarded
             << " eigenvalues below " << result.spectrum.lambda_floor << '\n';
        log_table(*log, result.spectrum.energies, result.oracle.energies, 20);
        if (!result.oracle.note.empty()) *log << "oracle: " << result.oracle.note << '\n';
        *log << "wrote results to " << dir.string() << " (" << result.seconds << " s)\n";
    }
    return result;
}

OracleLevels run_oracle(const RunConfig& cfg, const RunOptions& options, std::ostream* log) {
    const auto dir = resolve_dir(cfg, options);
    const ModelSpec model = make_model(cfg);
    OracleLevels levels = oracle_levels(cfg, model);
    auto os = open_out(dir / "oracle.csv");
    os << "n,E_exact\n";
    for (std::size_t i = 0; i < levels.energies.size(); ++i)
        os << i + 1 << ',' << format_double(levels.energies[i]) << '\n';
    if (log) {
        if (!levels.note.empty()) *log << "oracle: " << levels.note << '\n';
        for (std::size_t i = 0; i < levels.energies.size(); ++i)
            *log << std::setw(4) << i + 1 << std::setw(22) << std::fixed << std::setprecision(12)
                 << levels.energies[i] << '\n';
        *log << std::defaultfloat << "wrote " << (dir / "oracle.csv").string() << '\n';
    }
    return levels;
}

void compare_spectra(const std::filesystem::path& spectrum_csv, const std::filesystem::path& oracle_csv,
                     std::ostream& out) {
    const auto eff = read_column(spectrum_csv, "E_eff");
    const auto exact = read_column(oracle_csv, "E_exact");
    write_spectrum_csv(out, std::vector<double>(eff.begin(), eff.begin() + static_cast<std::ptrdiff_t>(
                                                                             std::min(eff.size(), exact.size()))),
                       exact);
}

}  // namespace mch
