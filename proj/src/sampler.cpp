#include "mch/sampler.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mch/error.hpp"
#include "mch/stats.hpp"

namespace mch {

namespace {

constexpr std::uint64_t kMetropolisStream = 0x6d6574726f706f6cULL;

void check_endpoint(const ModelSpec& model, std::span<const double> x, const char* which) {
    if (static_cast<int>(x.size()) != model.dimension())
        throw UsageError(std::string(which) + " endpoint has length " + std::to_string(x.size()) +
                         ", model dimension is " + std::to_string(model.dimension()));
}

double endpoint_potential(const ModelSpec& model, std::span<const double> x, const char* which) {
    const auto v = evaluate_potential(model, x);
    if (!v) throw InputError(std::string(which) + " endpoint lies in a forbidden region");
    return *v;
}

// Sum of V over interior points of the path x_start + s_k (x_end - x_start) + xi_k.
// Returns false when any point is forbidden.
template <class Pot>
bool interior_potential_sum(const Pot& pot, std::span<const double> a, std::span<const double> b,
                            std::span<const double> xi, int n_slices, std::span<double> point,
                            double& sum) {
    const std::size_t dim = a.size();
    const double inv_n = 1.0 / n_slices;
    sum = 0.0;
    for (int k = 1; k < n_slices; ++k) {
        const double s = k * inv_n;
        const double* fluct = xi.data() + static_cast<std::size_t>(k) * dim;
        for (std::size_t d = 0; d < dim; ++d) point[d] = a[d] + s * (b[d] - a[d]) + fluct[d];
        const PotentialValue v = pot(std::span<const double>(point));
        if (!v) return false;
        sum += *v;
    }
    return true;
}

PathEnsembleStats summarize(const std::vector<double>& weights, double acceptance, bool correlated) {
    const MeanError me = batch_means(weights);
    PathEnsembleStats out;
    out.mean_weight = me.mean;
    out.std_error = me.error;
    out.acceptance_rate = acceptance;
    const double n = static_cast<double>(weights.size());
    if (!correlated || me.error == 0.0) {
        out.n_effective = n;
    } else {
        out.n_effective = std::min(n, sample_variance(weights) / (me.error * me.error));
    }
    return out;
}

template <class Source>
PathEnsembleStats measure_bridge(const ModelSpec& model, std::span<const double> a,
                                 std::span<const double> b, std::size_t n_paths, Source&& next_fluct) {
    const double va = endpoint_potential(model, a, "start");
    const double vb = endpoint_potential(model, b, "end");
    const int n = model.time().n_slices;
    const double scale = model.time().dt() / model.params().hbar;
    std::vector<double> point(a.size());
    std::vector<double> weights(n_paths);

    model.visit_potential([&](const auto& pot) {
        for (std::size_t p = 0; p < n_paths; ++p) {
            const std::span<const double> xi = next_fluct(p);
            double interior = 0.0;
            if (!interior_potential_sum(pot, a, b, xi, n, point, interior)) {
                weights[p] = 0.0;
                continue;
            }
            weights[p] = std::exp(-scale * (0.5 * (va + vb) + interior));
        }
    });
    return summarize(weights, 1.0, false);
}

PathEnsembleStats measure_metropolis(const ModelSpec& model, std::span<const double> a,
                                     std::span<const double> b, const SamplerConfig& cfg,
                                     const Metropolis& mp, std::uint64_t stream_key) {
    const double va = endpoint_potential(model, a, "start");
    const double vb = endpoint_potential(model, b, "end");
    const int n = model.time().n_slices;
    const int dim = model.dimension();
    const double dt = model.time().dt();
    const double scale = dt / model.params().hbar;
    // exp(-dS0/hbar) with S0 = sum (m/2)|dx|^2/dt
    const double kin = 0.5 * model.params().mass / (dt * model.params().hbar);

    Rng rng = make_rng(cfg.seed, {stream_key, kMetropolisStream});
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    // Chain state is the fluctuation around the straight line. The line has
    // constant increments, so its cross term with the fluctuation in S0
    // telescopes to zero and dS0 only involves the fluctuation.
    std::vector<double> xi(static_cast<std::size_t>(n + 1) * dim, 0.0);
    std::size_t proposed = 0;
    std::size_t accepted = 0;

    auto sweep = [&] {
        for (int k = 1; k < n; ++k) {
            for (int d = 0; d < dim; ++d) {
                double& x = xi[static_cast<std::size_t>(k) * dim + d];
                const double left = xi[static_cast<std::size_t>(k - 1) * dim + d];
                const double right = xi[static_cast<std::size_t>(k + 1) * dim + d];
                const double trial = x + mp.step_size * (2.0 * uni(rng) - 1.0);
                const double old_s = (x - left) * (x - left) + (right - x) * (right - x);
                const double new_s = (trial - left) * (trial - left) + (right - trial) * (right - trial);
                const double d_action = kin * (new_s - old_s);
                ++proposed;
                if (d_action <= 0.0 || uni(rng) < std::exp(-d_action)) {
                    x = trial;
                    ++accepted;
                }
            }
        }
    };

    for (int t = 0; t < mp.n_thermalize; ++t) sweep();
    proposed = accepted = 0;

    std::vector<double> point(dim);
    std::vector<double> weights(cfg.n_paths);
    model.visit_potential([&](const auto& pot) {
        for (std::size_t p = 0; p < cfg.n_paths; ++p) {
            for (int s = 0; s < mp.n_decorrelate; ++s) sweep();
            double interior = 0.0;
            if (!interior_potential_sum(pot, a, b, xi, n, point, interior)) {
                weights[p] = 0.0;
                continue;
            }
            weights[p] = std::exp(-scale * (0.5 * (va + vb) + interior));
        }
    });
    const double rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 1.0;
    return summarize(weights, rate, true);
}

}  // namespace

void SamplerConfig::validate() const {
    if (n_paths < 2) throw InputError("n_paths must be at least 2");
    if (const auto* mp = std::get_if<Metropolis>(&method)) {
        if (!(mp->step_size > 0.0)) throw InputError("Metropolis step_size must be positive");
        if (mp->n_thermalize < 0) throw InputError("Metropolis n_thermalize must be non-negative");
        if (mp->n_decorrelate < 1) throw InputError("Metropolis n_decorrelate must be at least 1");
    }
}

void sample_bridge_fluctuation(const ModelSpec& model, Rng& rng, std::span<double> out) {
    const int n = model.time().n_slices;
    const int dim = model.dimension();
    if (out.size() != static_cast<std::size_t>(n + 1) * dim)
        throw UsageError("fluctuation buffer has the wrong size");
    const double diffusion = model.params().hbar / model.params().mass * model.time().dt();
    std::normal_distribution<double> normal(0.0, 1.0);

    for (int d = 0; d < dim; ++d) {
        out[d] = 0.0;
        out[static_cast<std::size_t>(n) * dim + d] = 0.0;
    }
    // Condition slice k on slice k-1 and the pinned end: remaining slices r = n-k.
    for (int k = 1; k < n; ++k) {
        const double r = static_cast<double>(n - k);
        const double shrink = r / (r + 1.0);
        const double sd = std::sqrt(diffusion * shrink);
        for (int d = 0; d < dim; ++d) {
            const double prev = out[static_cast<std::size_t>(k - 1) * dim + d];
            out[static_cast<std::size_t>(k) * dim + d] = prev * shrink + sd * normal(rng);
        }
    }
}

Path sample_free_path(const ModelSpec& model, std::span<const double> x_start,
                      std::span<const double> x_end, Rng& rng) {
    check_endpoint(model, x_start, "start");
    check_endpoint(model, x_end, "end");
    const int n = model.time().n_slices;
    const int dim = model.dimension();
    Path path(dim, n + 1);
    std::vector<double> xi(static_cast<std::size_t>(n + 1) * dim);
    sample_bridge_fluctuation(model, rng, xi);
    for (int k = 0; k <= n; ++k) {
        const double s = static_cast<double>(k) / n;
        auto pt = path.point(k);
        for (int d = 0; d < dim; ++d)
            pt[d] = x_start[d] + s * (x_end[d] - x_start[d]) + xi[static_cast<std::size_t>(k) * dim + d];
    }
    return path;
}

FluctuationBank::FluctuationBank(const ModelSpec& model, std::size_t n_paths, std::uint64_t seed,
                                 std::uint64_t stream_key)
    : n_paths_(n_paths), points_(model.time().n_slices + 1), dim_(model.dimension()) {
    const std::size_t stride = static_cast<std::size_t>(points_) * dim_;
    data_.resize(stride * n_paths_);
    Rng rng = make_rng(seed, {stream_key});
    for (std::size_t p = 0; p < n_paths_; ++p)
        sample_bridge_fluctuation(model, rng, std::span<double>(data_.data() + p * stride, stride));
}

PathEnsembleStats measure_potential_weight(const ModelSpec& model, std::span<const double> x_start,
                                           std::span<const double> x_end, const SamplerConfig& cfg,
                                           std::uint64_t stream_key) {
    check_endpoint(model, x_start, "start");
    check_endpoint(model, x_end, "end");
    cfg.validate();
    if (const auto* mp = std::get_if<Metropolis>(&cfg.method))
        return measure_metropolis(model, x_start, x_end, cfg, *mp, stream_key);

    Rng rng = make_rng(cfg.seed, {stream_key});
    std::vector<double> xi(static_cast<std::size_t>(model.time().n_slices + 1) * model.dimension());
    return measure_bridge(model, x_start, x_end, cfg.n_paths, [&](std::size_t) {
        sample_bridge_fluctuation(model, rng, xi);
        return std::span<const double>(xi);
    });
}

PathEnsembleStats measure_potential_weight(const ModelSpec& model, std::span<const double> x_start,
                                           std::span<const double> x_end,
                                           const FluctuationBank& bank) {
    check_endpoint(model, x_start, "start");
    check_endpoint(model, x_end, "end");
    if (bank.dimension() != model.dimension() || bank.points_per_path() != model.time().n_slices + 1)
        throw UsageError("fluctuation bank was built for a different model");
    if (bank.n_paths() < 2) throw InputError("n_paths must be at least 2");
    return measure_bridge(model, x_start, x_end, bank.n_paths(),
                          [&](std::size_t p) { return bank.path(p); });
}

}  // namespace mch
