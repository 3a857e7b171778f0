#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mch {

using Config = std::vector<double>;

// V(x) or "forbidden" (std::nullopt) for configurations the potential excludes.
using PotentialValue = std::optional<double>;

struct PhysicalParams {
    double mass = 1.0;
    double hbar = 1.0;

    void validate() const;
};

struct TimeWindow {
    double t_total = 1.0;  // imaginary time T = t_f - t_i
    int n_slices = 64;

    double dt() const { return t_total / n_slices; }
    void validate() const;
};

namespace potential {

struct Zero {};
struct Harmonic1D { double omega = 1.0; };
struct SechWell { double v0 = 1.0; };
struct Anharmonic {};  // x^2/2 + x^4/4
struct AbsLinear {};   // |x|/2
struct WallLinear { double force = 1.0; };
struct Harmonic2D { double omega = 1.0; };
struct CoupledHarmonic2D { double omega = 1.0; double lambda = 1.0; };
struct Harmonic3D { double omega = 1.0; };

}  // namespace potential

using PotentialSpec = std::variant<potential::Zero, potential::Harmonic1D, potential::SechWell,
                                   potential::Anharmonic, potential::AbsLinear, potential::WallLinear,
                                   potential::Harmonic2D, potential::CoupledHarmonic2D,
                                   potential::Harmonic3D>;

// Dimension the potential is defined in; 0 for Zero, which is valid in any dimension.
int implied_dimension(const PotentialSpec& spec);
std::string potential_name(const PotentialSpec& spec);

// Periodic chain of coupled oscillators (lattice Klein-Gordon field).
struct ChainSpec {
    int n_osc = 1;
    double omega_coupling = 0.0;  // nearest-neighbour coupling
    double omega_onsite = 1.0;    // mass gap

    void validate() const;
};

struct PointParticle {
    int dimension = 1;
    PotentialSpec potential;
};

struct OscillatorChain {
    ChainSpec chain;
};

using Geometry = std::variant<PointParticle, OscillatorChain>;

namespace detail {

// Concrete potential evaluators. Each is a cheap value type with
// operator()(std::span<const double>) -> PotentialValue, so hot loops can be
// instantiated per potential without a virtual call per point.

struct ZeroEval {
    PotentialValue operator()(std::span<const double>) const { return 0.0; }
};

struct IsotropicHarmonicEval {
    double half_m_omega2;
    PotentialValue operator()(std::span<const double> x) const {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        return half_m_omega2 * r2;
    }
};

struct SechEval {
    double v0;
    PotentialValue operator()(std::span<const double> x) const {
        const double s = 1.0 / std::cosh(x[0]);
        return -v0 * s * s;
    }
};

struct AnharmonicEval {
    PotentialValue operator()(std::span<const double> x) const {
        const double x2 = x[0] * x[0];
        return 0.5 * x2 + 0.25 * x2 * x2;
    }
};

struct AbsLinearEval {
    PotentialValue operator()(std::span<const double> x) const { return 0.5 * std::abs(x[0]); }
};

struct WallLinearEval {
    double force;
    PotentialValue operator()(std::span<const double> x) const {
        if (x[0] < 0.0) return std::nullopt;
        return force * x[0];
    }
};

struct CoupledHarmonic2DEval {
    double half_m_omega2;
    double lambda;
    PotentialValue operator()(std::span<const double> x) const {
        return half_m_omega2 * (x[0] * x[0] + x[1] * x[1]) + lambda * x[0] * x[1];
    }
};

struct ChainEval {
    double coupling2;
    double onsite2;
    PotentialValue operator()(std::span<const double> q) const {
        const std::size_t n = q.size();
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = q[j] - q[(j + 1) % n];
            sum += coupling2 * d * d + onsite2 * q[j] * q[j];
        }
        return 0.5 * sum;
    }
};

}  // namespace detail

class ModelSpec {
public:
    // Point particle; dimension defaults to the one implied by the potential
    // (1 for Zero).
    static ModelSpec particle(PotentialSpec potential, PhysicalParams params, TimeWindow time,
                              int dimension = 0);
    static ModelSpec chain(ChainSpec chain, PhysicalParams params, TimeWindow time);

    const Geometry& geometry() const { return geometry_; }
    const PhysicalParams& params() const { return params_; }
    const TimeWindow& time() const { return time_; }

    // Configuration-space dimension D.
    int dimension() const;

    bool is_chain() const { return std::holds_alternative<OscillatorChain>(geometry_); }
    const ChainSpec* chain_spec() const;
    const PotentialSpec* potential_spec() const;

    // Returns a copy with a different time window (used by tests and the
    // stochastic-basis sigma rule).
    ModelSpec with_time(TimeWindow time) const;

    // Calls fn with the concrete evaluator for this model's potential.
    template <class Fn>
    decltype(auto) visit_potential(Fn&& fn) const;

private:
    ModelSpec(Geometry geometry, PhysicalParams params, TimeWindow time);

    Geometry geometry_;
    PhysicalParams params_;
    TimeWindow time_;
};

// Time-ordered path of n_slices+1 configurations stored row-major.
class Path {
public:
    Path(int dimension, int n_points) : dim_(dimension), n_points_(n_points),
                                        data_(static_cast<std::size_t>(dimension) * n_points, 0.0) {}

    int dimension() const { return dim_; }
    int size() const { return n_points_; }

    std::span<double> point(int k) {
        return {data_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const double> point(int k) const {
        return {data_.data() + static_cast<std::size_t>(k) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const double> data() const { return data_; }

private:
    int dim_;
    int n_points_;
    std::vector<double> data_;
};

PotentialValue evaluate_potential(const ModelSpec& model, std::span<const double> x);

// Discrete free action sum_k (m/2)|x_{k+1}-x_k|^2 / dt.
double kinetic_action(const ModelSpec& model, const Path& path);

template <class Fn>
decltype(auto) ModelSpec::visit_potential(Fn&& fn) const {
    const double m = params_.mass;
    if (const auto* c = std::get_if<OscillatorChain>(&geometry_)) {
        const auto& ch = c->chain;
        return fn(detail::ChainEval{ch.omega_coupling * ch.omega_coupling,
                                    ch.omega_onsite * ch.omega_onsite});
    }
    const auto& pot = std::get<PointParticle>(geometry_).potential;
    return std::visit(
        [&](const auto& p) -> decltype(auto) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, potential::Zero>) {
                return fn(detail::ZeroEval{});
            } else if constexpr (std::is_same_v<T, potential::Harmonic1D> ||
                                 std::is_same_v<T, potential::Harmonic2D> ||
                                 std::is_same_v<T, potential::Harmonic3D>) {
                return fn(detail::IsotropicHarmonicEval{0.5 * m * p.omega * p.omega});
            } else if constexpr (std::is_same_v<T, potential::SechWell>) {
                return fn(detail::SechEval{p.v0});
            } else if constexpr (std::is_same_v<T, potential::Anharmonic>) {
                return fn(detail::AnharmonicEval{});
            } else if constexpr (std::is_same_v<T, potential::AbsLinear>) {
                return fn(detail::AbsLinearEval{});
            } else if constexpr (std::is_same_v<T, potential::WallLinear>) {
                return fn(detail::WallLinearEval{p.force});
            } else {
                static_assert(std::is_same_v<T, potential::CoupledHarmonic2D>);
                return fn(detail::CoupledHarmonic2DEval{0.5 * m * p.omega * p.omega, p.lambda});
            }
        },
        pot);
}

}  // namespace mch
