#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>

#include "mch/basis.hpp"
#include "mch/model.hpp"
#include "mch/sampler.hpp"

namespace mch {

// (m/(2 pi hbar T))^{D/2} exp(-m |x_b - x_a|^2 / (2 hbar T))
double free_kernel(const PhysicalParams& params, int dimension, std::span<const double> x_a,
                   std::span<const double> x_b, double t_total);

struct Amplitude {
    double value = 0.0;
    double error = 0.0;
};

// <x_b, T | x_a, 0> = <O_V> * free kernel.
Amplitude amplitude(const ModelSpec& model, std::span<const double> x_a, std::span<const double> x_b,
                    const SamplerConfig& cfg, std::uint64_t stream_key = 0);
Amplitude amplitude(const ModelSpec& model, std::span<const double> x_a, std::span<const double> x_b,
                    const FluctuationBank& bank);

enum class StreamPolicy {
    // All entries reuse one bank of bridge fluctuations (bridge sampler only).
    Common,
    // Each entry draws its own stream keyed by the identities of its two nodes.
    PerEntry,
};

struct MatrixOptions {
    bool symmetric_fill = true;  // measure the upper triangle and mirror it
    StreamPolicy streams = StreamPolicy::Common;
    unsigned threads = 1;        // 0 = hardware concurrency
};

struct TransitionMatrix {
    Eigen::MatrixXd values;  // values(n', n) ~ <e_n', T | e_n, 0>
    Eigen::MatrixXd errors;
    std::uint64_t basis_fingerprint = 0;
    double t_total = 0.0;
    std::uint64_t seed = 0;

    Eigen::Index size() const { return values.rows(); }
    // max |M_ij - M_ji| / max |M|
    double max_asymmetry() const;
    // Same statistic for the errors: max sqrt(err_ij^2 + err_ji^2) / max |M|.
    double max_combined_error() const;
    // Frobenius ratio ||errors|| / ||values||.
    double relative_error_level() const;
    // Entries whose relative error exceeds the threshold. They are kept in
    // the matrix; the count only feeds diagnostics.
    std::size_t flagged_entries(double relative_threshold = 0.5) const;
};

TransitionMatrix build_matrix(const ModelSpec& model, const BasisSet& basis, const SamplerConfig& cfg,
                              const MatrixOptions& options = {});

// Binary layout (little endian): 8-byte magic "MCHTMAT1", uint64 N, double T,
// uint64 seed, then N*N values and N*N errors, both row-major doubles.
void write_matrix_binary(std::ostream& os, const TransitionMatrix& m);
TransitionMatrix read_matrix_binary(std::istream& is);

// CSV with header "row,col,value,error", one line per entry.
void write_matrix_csv(std::ostream& os, const TransitionMatrix& m);

}  // namespace mch
