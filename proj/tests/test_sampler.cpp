#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mch/error.hpp"
#include "mch/oracle.hpp"
#include "mch/sampler.hpp"
#include "mch/stats.hpp"
#include "mch/transition.hpp"

using namespace mch;

namespace {

const std::vector<double> kZero1{0.0};

ModelSpec harmonic(double t = 2.0, int slices = 64) {
    return ModelSpec::particle(potential::Harmonic1D{1.0}, {}, TimeWindow{t, slices});
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments slice_moments(const ModelSpec& model, double a, double b, int slice, int draws, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(draws));
    for (int i = 0; i < draws; ++i) xs.push_back(sample_free_path(model, std::vector{a}, std::vector{b}, rng).point(slice)[0]);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= draws;
    return {mean, sample_variance(xs)};
}

}  // namespace

TEST_CASE("bridge midpoint variance is hbar dt / 2m") {
    const auto model = ModelSpec::particle(potential::Zero{}, {}, TimeWindow{2.0, 2});
    const int n = 200000;
    const auto m = slice_moments(model, 0.0, 0.0, 1, n, 3);
    const double expected = 0.5;
    // sd of a Gaussian sample variance: sigma^2 sqrt(2/(n-1))
    CHECK(std::abs(m.var - expected) < 3.0 * expected * std::sqrt(2.0 / (n - 1)));
    CHECK(std::abs(m.mean) < 3.0 * std::sqrt(expected / n));
}

TEST_CASE("bridge midpoint mean interpolates the endpoints") {
    const auto model = ModelSpec::particle(potential::Zero{}, {}, TimeWindow{2.0, 2});
    const int n = 100000;
    const auto m = slice_moments(model, 0.0, 2.0, 1, n, 5);
    CHECK(std::abs(m.mean - 1.0) < 3.0 * std::sqrt(0.5 / n));
}

TEST_CASE("bridge with equal endpoints averages to the constant path, with the bridge variance") {
    const int slices = 8;
    const double t = 1.6;
    const auto model = ModelSpec::particle(potential::Zero{}, PhysicalParams{2.0, 1.0}, TimeWindow{t, slices});
    const double c = -1.25;
    const int n = 40000;
    const double dt = t / slices;
    for (int k = 0; k <= slices; ++k) {
        const auto m = slice_moments(model, c, c, k, n, 100 + static_cast<std::uint64_t>(k));
        // Brownian bridge: Var x_k = (hbar/m) dt k (n-k) / n
        const double var = (1.0 / 2.0) * dt * k * (slices - k) / slices;
        if (k == 0 || k == slices) {
            CHECK(m.mean == c);
            CHECK(m.var == 0.0);
            continue;
        }
        CHECK(std::abs(m.mean - c) < 4.0 * std::sqrt(var / n));
        CHECK(std::abs(m.var - var) < 4.0 * var * std::sqrt(2.0 / (n - 1)));
    }
}

TEST_CASE("zero potential gives weight exactly one") {
    for (int dim = 1; dim <= 3; ++dim) {
        const auto model = ModelSpec::particle(potential::Zero{}, {}, TimeWindow{1.3, 16}, dim);
        std::vector<double> a(static_cast<std::size_t>(dim), 0.4), b(static_cast<std::size_t>(dim), -2.0);
        const auto s = measure_potential_weight(model, a, b, SamplerConfig{500, BrownianBridge{}, 9});
        CHECK(s.mean_weight == 1.0);
        CHECK(s.std_error == 0.0);
        const auto amp = amplitude(model, a, b, SamplerConfig{500, BrownianBridge{}, 9});
        CHECK(amp.value == free_kernel({}, dim, a, b, 1.3));
        CHECK(amp.error == 0.0);
    }
}

TEST_CASE("harmonic weight reproduces the Mehler kernel at the origin") {
    const auto model = harmonic();
    const auto s = measure_potential_weight(model, kZero1, kZero1, SamplerConfig{10000, BrownianBridge{}, 20021});
    const double kfree = free_kernel({}, 1, kZero1, kZero1, 2.0);
    const double exact = exact_kernel(HarmonicKernel{1.0}, {}, 1, kZero1, kZero1, 2.0);
    CHECK(s.std_error > 0.0);
    CHECK(std::abs(s.mean_weight * kfree - exact) < 3.0 * s.std_error * kfree);
    CHECK(s.mean_weight > 0.0);
    CHECK(s.mean_weight <= 1.0);
}

TEST_CASE("standard error shrinks like 1/sqrt(n_paths)") {
    const auto model = harmonic();
    const std::vector<double> a{1.0}, b{-0.5};
    double ratio = 0.0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const auto seed = 1000 + static_cast<std::uint64_t>(r);
        const auto small = measure_potential_weight(model, a, b, SamplerConfig{1000, BrownianBridge{}, seed});
        const auto large = measure_potential_weight(model, a, b, SamplerConfig{2000, BrownianBridge{}, seed + 500});
        ratio += large.std_error / small.std_error;
    }
    ratio /= reps;
    MESSAGE("mean error ratio " << ratio);
    CHECK(ratio >= 0.6);
    CHECK(ratio <= 0.82);
}

TEST_CASE("measurement is deterministic for a fixed seed") {
    const auto model = harmonic();
    const std::vector<double> a{0.3}, b{1.1};
    for (const SamplerMethod method : {SamplerMethod{BrownianBridge{}}, SamplerMethod{Metropolis{}}}) {
        const SamplerConfig cfg{700, method, 4242};
        const auto s1 = measure_potential_weight(model, a, b, cfg, 5);
        const auto s2 = measure_potential_weight(model, a, b, cfg, 5);
        CHECK(s1.mean_weight == s2.mean_weight);
        CHECK(s1.std_error == s2.std_error);
        CHECK(s1.n_effective == s2.n_effective);
        CHECK(s1.acceptance_rate == s2.acceptance_rate);
        const auto other = measure_potential_weight(model, a, b, cfg, 6);
        CHECK(other.mean_weight != s1.mean_weight);
    }
}

TEST_CASE("fluctuation bank reproduces the keyed bridge stream") {
    const auto model = ModelSpec::particle(potential::CoupledHarmonic2D{1.0, 0.3}, {}, TimeWindow{1.0, 32});
    const std::vector<double> a{0.2, -0.4}, b{1.0, 0.5};
    const FluctuationBank bank(model, 300, 77, 3);
    const auto from_bank = measure_potential_weight(model, a, b, bank);
    const auto direct = measure_potential_weight(model, a, b, SamplerConfig{300, BrownianBridge{}, 77}, 3);
    CHECK(from_bank.mean_weight == direct.mean_weight);
    CHECK(from_bank.std_error == direct.std_error);
}

TEST_CASE("weights stay in (0, 1] for non-negative potentials and >= 1 for the sech well") {
    const TimeWindow tw{1.5, 32};
    const SamplerConfig cfg{400, BrownianBridge{}, 31};
    const std::vector<ModelSpec> nonneg = {
        ModelSpec::particle(potential::Harmonic1D{1.3}, {}, tw),
        ModelSpec::particle(potential::Anharmonic{}, {}, tw),
        ModelSpec::particle(potential::AbsLinear{}, {}, tw),
        ModelSpec::particle(potential::WallLinear{1.0}, {}, tw),
        ModelSpec::particle(potential::Harmonic2D{0.8}, {}, tw),
        ModelSpec::particle(potential::CoupledHarmonic2D{1.0, 0.4}, {}, tw),
        ModelSpec::particle(potential::Harmonic3D{1.0}, {}, tw),
        ModelSpec::chain(ChainSpec{4, 1.0, 2.0}, {}, tw),
    };
    for (const auto& model : nonneg) {
        for (double x : {0.1, 0.9, 2.0}) {
            std::vector<double> a(static_cast<std::size_t>(model.dimension()), x);
            std::vector<double> b(a.size(), 0.5 * x);
            const auto s = measure_potential_weight(model, a, b, cfg);
            CHECK(s.mean_weight > 0.0);
            CHECK(s.mean_weight <= 1.0);
            CHECK(s.std_error >= 0.0);
        }
    }
    const auto sech = ModelSpec::particle(potential::SechWell{1.0}, {}, tw);
    for (double x : {-2.0, 0.0, 1.5}) {
        const auto s = measure_potential_weight(sech, std::vector{x}, std::vector{-0.5 * x}, cfg);
        CHECK(s.mean_weight >= 1.0);
    }
}

TEST_CASE("wall: forbidden endpoints are rejected, forbidden paths weigh zero") {
    const auto wall = ModelSpec::particle(potential::WallLinear{1.0}, {}, TimeWindow{2.0, 32});
    const SamplerConfig cfg{2000, BrownianBridge{}, 8};
    CHECK_THROWS_AS(measure_potential_weight(wall, std::vector{-0.5}, std::vector{1.0}, cfg), InputError);
    CHECK_THROWS_AS(measure_potential_weight(wall, std::vector{1.0}, std::vector{-0.5}, cfg), InputError);
    // next to the wall most bridges cross into x < 0 and are dropped
    const auto near = measure_potential_weight(wall, std::vector{0.05}, std::vector{0.05}, cfg);
    CHECK(near.mean_weight > 0.0);
    CHECK(near.mean_weight < 0.5);
}

TEST_CASE("measurement is symmetric under endpoint reversal") {
    const auto model = harmonic();
    const SamplerConfig cfg{10000, BrownianBridge{}, 55};
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{{0.0, 1.5}, {-1.0, 2.0}, {0.7, -0.3}}) {
        const auto fwd = measure_potential_weight(model, std::vector{a}, std::vector{b}, cfg, 1);
        const auto back = measure_potential_weight(model, std::vector{b}, std::vector{a}, cfg, 2);
        const double combined = std::hypot(fwd.std_error, back.std_error);
        CHECK(std::abs(fwd.mean_weight - back.mean_weight) < 3.0 * combined);
    }
}

TEST_CASE("bridge and Metropolis agree on the harmonic element") {
    const auto model = harmonic();
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, -0.5}}) {
        const auto bridge = measure_potential_weight(model, std::vector{a}, std::vector{b},
                                                     SamplerConfig{8000, BrownianBridge{}, 12});
        const auto metro = measure_potential_weight(model, std::vector{a}, std::vector{b},
                                                    SamplerConfig{8000, Metropolis{0.5, 500, 5}, 12});
        const double combined = std::hypot(bridge.std_error, metro.std_error);
        MESSAGE("bridge " << bridge.mean_weight << " metropolis " << metro.mean_weight << " acc "
                          << metro.acceptance_rate << " n_eff " << metro.n_effective);
        CHECK(std::abs(bridge.mean_weight - metro.mean_weight) < 4.0 * combined);
        CHECK(metro.acceptance_rate > 0.0);
        CHECK(metro.acceptance_rate < 1.0);
        CHECK(bridge.acceptance_rate == 1.0);
    }
}

TEST_CASE("sampler configuration validation") {
    CHECK_THROWS_AS((SamplerConfig{1, BrownianBridge{}, 1}.validate()), InputError);
    CHECK_THROWS_AS((SamplerConfig{10, Metropolis{0.0, 10, 1}, 1}.validate()), InputError);
    CHECK_THROWS_AS((SamplerConfig{10, Metropolis{0.5, -1, 1}, 1}.validate()), InputError);
    CHECK_THROWS_AS((SamplerConfig{10, Metropolis{0.5, 10, 0}, 1}.validate()), InputError);
    const auto model = harmonic();
    Rng rng(1);
    CHECK_THROWS_AS(sample_free_path(model, std::vector{0.0, 1.0}, kZero1, rng), UsageError);
}

TEST_CASE("batch means") {
    const std::vector<double> constant(100, 2.5);
    const auto c = batch_means(constant);
    CHECK(c.mean == 2.5);
    CHECK(c.error == 0.0);
    // two samples: one per batch, standard error = |a-b|/2
    const std::vector<double> two{1.0, 3.0};
    CHECK(batch_means(two).error == doctest::Approx(1.0));
    CHECK_THROWS(batch_means(std::vector<double>{1.0}));
    CHECK(sample_variance(std::vector<double>{1.0, 2.0, 3.0, 4.0}) == doctest::Approx(5.0 / 3.0));
}
