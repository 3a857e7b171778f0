#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mch/config.hpp"
#include "mch/spectral.hpp"
#include "mch/transition.hpp"

namespace mch {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,       // bad command line
    kExitConfig = 2,      // invalid run configuration
    kExitRuntime = 3,     // I/O or numerical failure during the run
    kExitDiagnostic = 4,  // transition matrix unusable (no eigenvalue above the floor)
};

struct RunOptions {
    unsigned threads = 0;  // 0 = hardware concurrency
    std::optional<std::filesystem::path> output_dir;
};

struct OracleLevels {
    std::vector<double> energies;  // empty when no oracle applies
    std::string source;            // "chain", "grid", "analytic" or ""
    std::string note;
};

// Reference levels for the configured system: exact chain spectrum, grid
// Hamiltonian (point particles in D <= 2) or the analytic isotropic
// oscillator in 3-D.
OracleLevels oracle_levels(const RunConfig& cfg, const ModelSpec& model);

struct RunResult {
    TransitionMatrix matrix;
    EffectiveSpectrum spectrum;
    ThermoCurve thermo;
    OracleLevels oracle;
    std::filesystem::path output_dir;
    double seconds = 0.0;
};

// basis -> matrix -> spectrum -> thermodynamics -> oracle comparison; writes
// spectrum.csv, wavefunctions.csv, thermo.csv, basis.txt, run_echo.cfg,
// diagnostics.txt and optionally the matrix dump into the output directory.
RunResult run_pipeline(const RunConfig& cfg, const RunOptions& options, std::ostream* log = nullptr);

// Writes oracle.csv ("n,E_exact") for the configured system.
OracleLevels run_oracle(const RunConfig& cfg, const RunOptions& options, std::ostream* log = nullptr);

// Merges the E_eff column of a spectrum CSV with the E_exact column of an
// oracle CSV into "n,E_eff,E_exact,rel_err" rows.
void compare_spectra(const std::filesystem::path& spectrum_csv, const std::filesystem::path& oracle_csv,
                     std::ostream& out);

// Table-3-style listing: n, E_eff, E_exact, relative error.
void write_spectrum_csv(std::ostream& os, const std::vector<double>& energies,
                        const std::vector<double>& exact);

}  // namespace mch
