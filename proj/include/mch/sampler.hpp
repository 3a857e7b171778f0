#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "mch/model.hpp"
#include "mch/rng.hpp"

namespace mch {

// Exact sequential-conditional Gaussian bridge; independent samples.
struct BrownianBridge {};

// Local-update Metropolis chain on the free action, kept as a cross-check.
struct Metropolis {
    double step_size = 0.5;
    int n_thermalize = 200;
    int n_decorrelate = 5;  // sweeps between measurements
};

using SamplerMethod = std::variant<BrownianBridge, Metropolis>;

struct SamplerConfig {
    std::size_t n_paths = 1000;
    SamplerMethod method = BrownianBridge{};
    std::uint64_t seed = 20021;

    void validate() const;
};

// Estimate of <O_V> = <exp(-int V dt / hbar)> over the fixed-endpoint free ensemble.
struct PathEnsembleStats {
    double mean_weight = 0.0;
    double std_error = 0.0;
    double n_effective = 0.0;
    double acceptance_rate = 1.0;
};

// Draws a free path from x_start to x_end with interior points distributed
// as exp(-S0/hbar).
Path sample_free_path(const ModelSpec& model, std::span<const double> x_start,
                      std::span<const double> x_end, Rng& rng);

// Bridge fluctuation pinned to zero at both ends, written into out
// ((n_slices+1)*D values, row-major). x_start + (k/n)(x_end - x_start) + out_k
// is a free path between the two endpoints.
void sample_bridge_fluctuation(const ModelSpec& model, Rng& rng, std::span<double> out);

// Precomputed bridge fluctuations reused by every matrix entry (common random
// numbers). Entry estimates built from the same bank are bit-identical to
// measure_potential_weight() with the same seed and stream key.
class FluctuationBank {
public:
    FluctuationBank(const ModelSpec& model, std::size_t n_paths, std::uint64_t seed,
                    std::uint64_t stream_key = 0);

    std::size_t n_paths() const { return n_paths_; }
    int points_per_path() const { return points_; }
    int dimension() const { return dim_; }
    std::span<const double> path(std::size_t p) const {
        const std::size_t stride = static_cast<std::size_t>(points_) * dim_;
        return {data_.data() + p * stride, stride};
    }

private:
    std::size_t n_paths_;
    int points_;
    int dim_;
    std::vector<double> data_;
};

// The stream key selects an independent RNG stream under cfg.seed. For the
// bridge sampler, key 0 reproduces the stream a FluctuationBank built with
// the same seed uses.
PathEnsembleStats measure_potential_weight(const ModelSpec& model, std::span<const double> x_start,
                                           std::span<const double> x_end, const SamplerConfig& cfg,
                                           std::uint64_t stream_key = 0);

PathEnsembleStats measure_potential_weight(const ModelSpec& model, std::span<const double> x_start,
                                           std::span<const double> x_end,
                                           const FluctuationBank& bank);

}  // namespace mch
