#include "mch/model.hpp"

#include "mch/error.hpp"

namespace mch {

void PhysicalParams::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw InputError("mass must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InputError("hbar must be positive");
}

void TimeWindow::validate() const {
    if (!(t_total > 0.0) || !std::isfinite(t_total)) throw InputError("t_total must be positive");
    if (n_slices < 2) throw InputError("n_slices must be at least 2");
}

void ChainSpec::validate() const {
    if (n_osc < 1) throw InputError("chain needs at least one oscillator");
    if (!(omega_coupling >= 0.0)) throw InputError("chain coupling must be non-negative");
    if (!(omega_onsite > 0.0)) throw InputError("chain on-site frequency must be positive");
}

int implied_dimension(const PotentialSpec& spec) {
    return std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, potential::Zero>) return 0;
            else if constexpr (std::is_same_v<T, potential::Harmonic2D> ||
                               std::is_same_v<T, potential::CoupledHarmonic2D>) return 2;
            else if constexpr (std::is_same_v<T, potential::Harmonic3D>) return 3;
            else return 1;
        },
        spec);
}

std::string potential_name(const PotentialSpec& spec) {
    static constexpr const char* names[] = {"zero",       "harmonic1d", "sech",
                                            "anharmonic", "abs_linear", "wall_linear",
                                            "harmonic2d", "coupled_harmonic2d", "harmonic3d"};
    return names[spec.index()];
}

ModelSpec::ModelSpec(Geometry geometry, PhysicalParams params, TimeWindow time)
    : geometry_(std::move(geometry)), params_(params), time_(time) {
    params_.validate();
    time_.validate();
}

ModelSpec ModelSpec::particle(PotentialSpec potential, PhysicalParams params, TimeWindow time,
                              int dimension) {
    const int implied = implied_dimension(potential);
    if (dimension == 0) dimension = implied == 0 ? 1 : implied;
    if (dimension < 1) throw InputError("particle dimension must be positive");
    if (implied != 0 && implied != dimension)
        throw InputError("potential " + potential_name(potential) + " is defined in " +
                         std::to_string(implied) + " dimensions, not " + std::to_string(dimension));
    return ModelSpec(PointParticle{dimension, potential}, params, time);
}

ModelSpec ModelSpec::chain(ChainSpec chain, PhysicalParams params, TimeWindow time) {
    chain.validate();
    return ModelSpec(OscillatorChain{chain}, params, time);
}

int ModelSpec::dimension() const {
    if (const auto* c = std::get_if<OscillatorChain>(&geometry_)) return c->chain.n_osc;
    return std::get<PointParticle>(geometry_).dimension;
}

const ChainSpec* ModelSpec::chain_spec() const {
    const auto* c = std::get_if<OscillatorChain>(&geometry_);
    return c ? &c->chain : nullptr;
}

const PotentialSpec* ModelSpec::potential_spec() const {
    const auto* p = std::get_if<PointParticle>(&geometry_);
    return p ? &p->potential : nullptr;
}

ModelSpec ModelSpec::with_time(TimeWindow time) const {
    return ModelSpec(geometry_, params_, time);
}

PotentialValue evaluate_potential(const ModelSpec& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.dimension())
        throw UsageError("configuration has length " + std::to_string(x.size()) +
                         ", model dimension is " + std::to_string(model.dimension()));
    return model.visit_potential([&](const auto& pot) { return pot(x); });
}

double kinetic_action(const ModelSpec& model, const Path& path) {
    const int dim = model.dimension();
    if (path.dimension() != dim) throw UsageError("path dimension does not match model");
    if (path.size() != model.time().n_slices + 1)
        throw UsageError("path must have n_slices + 1 points");

    const double coeff = 0.5 * model.params().mass / model.time().dt();
    double action = 0.0;
    for (int k = 0; k + 1 < path.size(); ++k) {
        const auto a = path.point(k);
        const auto b = path.point(k + 1);
        for (int d = 0; d < dim; ++d) {
            const double v = b[d] - a[d];
            action += v * v;
        }
    }
    return coeff * action;
}

}  // namespace mch
