// Command-line front end for the Monte Carlo Hamiltonian pipeline.
//
//   mch run <config>                        full pipeline, writes CSV artifacts
//   mch oracle <config>                     reference levels only (oracle.csv)
//   mch compare <spectrum.csv> <oracle.csv> merged comparison table on stdout
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 runtime, 4 diagnostic-fatal.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mch/error.hpp"
#include "mch/pipeline.hpp"

namespace {

mch::RunConfig load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw mch::ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return mch::parse_config(ss.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo Hamiltonian: effective spectra from imaginary-time transition amplitudes"};
    app.require_subcommand(1);
    app.fallthrough();

    unsigned threads = 0;
    std::string output_dir;
    app.add_option("--threads", threads, "worker threads for matrix assembly (0 = all cores)");
    app.add_option("--output-dir", output_dir, "override output.dir from the config");

    std::string config_path;
    auto* run = app.add_subcommand("run", "build basis and transition matrix, diagonalize, write results");
    run->add_option("config", config_path, "run configuration file")->required();

    auto* oracle = app.add_subcommand("oracle", "write exact/reference levels for the configured system");
    oracle->add_option("config", config_path, "run configuration file")->required();

    std::string spectrum_csv;
    std::string oracle_csv;
    auto* compare = app.add_subcommand("compare", "merge a spectrum.csv with an oracle.csv");
    compare->add_option("spectrum", spectrum_csv, "spectrum.csv from a run")->required();
    compare->add_option("oracle", oracle_csv, "oracle.csv from the oracle command")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? mch::kExitOk : mch::kExitUsage;
    }

    mch::RunOptions options;
    options.threads = threads;
    if (!output_dir.empty()) options.output_dir = output_dir;

    try {
        if (run->parsed()) {
            mch::run_pipeline(load(config_path), options, &std::cout);
        } else if (oracle->parsed()) {
            mch::run_oracle(load(config_path), options, &std::cout);
        } else {
            mch::compare_spectra(spectrum_csv, oracle_csv, std::cout);
        }
    } catch (const mch::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return mch::kExitConfig;
    } catch (const mch::DiagnosticError& e) {
        std::cerr << "diagnostic: " << e.what() << '\n';
        return mch::kExitDiagnostic;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mch::kExitRuntime;
    }
    return mch::kExitOk;
}
