#include "mch/basis.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "mch/error.hpp"
#include "mch/format.hpp"
#include "mch/rng.hpp"

namespace mch {

BasisSet::BasisSet(int dimension, std::vector<BasisNode> nodes, BasisKind kind)
    : dim_(dimension), nodes_(std::move(nodes)), kind_(std::move(kind)) {
    if (dim_ < 1) throw InputError("basis dimension must be positive");
    if (nodes_.empty()) throw InputError("basis needs at least one node");
    for (const auto& n : nodes_) {
        if (static_cast<int>(n.position.size()) != dim_)
            throw UsageError("basis node has the wrong dimension");
        if (!(n.cell_measure > 0.0) || !std::isfinite(n.cell_measure))
            throw InputError("cell measure must be positive and finite");
    }
}

std::uint64_t BasisSet::fingerprint() const {
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(dim_));
    for (const auto& n : nodes_) {
        h = splitmix64(h ^ hash_config(n.position));
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(n.cell_measure));
    }
    return h;
}

BasisSet BasisSet::rescaled(double factor) const {
    auto nodes = nodes_;
    for (auto& n : nodes) n.cell_measure *= factor;
    return BasisSet(dim_, std::move(nodes), kind_);
}

BasisSet BasisSet::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != nodes_.size()) throw UsageError("permutation has the wrong length");
    std::vector<BasisNode> nodes;
    nodes.reserve(perm.size());
    for (std::size_t i : perm) nodes.push_back(nodes_.at(i));
    return BasisSet(dim_, std::move(nodes), kind_);
}

BasisSet build_regular_basis(int dimension, std::span<const int> per_axis_counts,
                             std::span<const double> box_low, std::span<const double> box_high) {
    const auto dim = static_cast<std::size_t>(dimension);
    if (dimension < 1 || per_axis_counts.size() != dim || box_low.size() != dim ||
        box_high.size() != dim)
        throw UsageError("regular basis: counts and box must have one entry per axis");

    double cell = 1.0;
    std::size_t total = 1;
    Config width(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        if (per_axis_counts[a] < 1) throw InputError("regular basis: counts must be at least 1");
        if (!(box_low[a] < box_high[a])) throw InputError("regular basis: degenerate box");
        width[a] = (box_high[a] - box_low[a]) / per_axis_counts[a];
        cell *= width[a];
        total *= static_cast<std::size_t>(per_axis_counts[a]);
    }

    std::vector<BasisNode> nodes;
    nodes.reserve(total);
    std::vector<int> idx(dim, 0);
    for (std::size_t n = 0; n < total; ++n) {
        Config pos(dim);
        for (std::size_t a = 0; a < dim; ++a) pos[a] = box_low[a] + idx[a] * width[a];
        nodes.push_back({std::move(pos), cell});
        for (std::size_t a = dim; a-- > 0;) {
            if (++idx[a] < per_axis_counts[a]) break;
            idx[a] = 0;
        }
    }
    RegularGrid grid{{per_axis_counts.begin(), per_axis_counts.end()},
                     {box_low.begin(), box_low.end()},
                     {box_high.begin(), box_high.end()}};
    return BasisSet(dimension, std::move(nodes), std::move(grid));
}

SigmaChoice stochastic_sigma(const ModelSpec& model, double t_prime) {
    if (!(t_prime > 0.0)) throw InputError("stochastic_sigma: t' must be positive");
    const double hbar = model.params().hbar;
    const double m = model.params().mass;
    const auto dim = static_cast<std::size_t>(model.dimension());

    auto harmonic = [&](double omega) {
        return std::sqrt(hbar * std::sinh(omega * t_prime) / (m * omega));
    };
    const double free_sigma = std::sqrt(hbar * t_prime / m);

    if (const auto* chain = model.chain_spec()) return {Config(dim, harmonic(chain->omega_onsite)), false};

    const auto& pot = *model.potential_spec();
    double omega = 0.0;
    if (const auto* h1 = std::get_if<potential::Harmonic1D>(&pot)) omega = h1->omega;
    else if (const auto* h2 = std::get_if<potential::Harmonic2D>(&pot)) omega = h2->omega;
    else if (const auto* h3 = std::get_if<potential::Harmonic3D>(&pot)) omega = h3->omega;
    else if (std::holds_alternative<potential::Zero>(pot)) return {Config(dim, free_sigma), false};
    else return {Config(dim, free_sigma), true};

    return {Config(dim, harmonic(omega)), false};
}

double gaussian_density(std::span<const double> x, std::span<const double> sigma) {
    double p = 1.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double z = x[d] / sigma[d];
        p *= std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma[d]);
    }
    return p;
}

BasisSet build_stochastic_basis(int dimension, std::size_t n_nodes, std::span<const double> sigma,
                                std::uint64_t seed) {
    if (dimension < 1 || sigma.size() != static_cast<std::size_t>(dimension))
        throw UsageError("stochastic basis: sigma must have one entry per axis");
    if (n_nodes < 1) throw InputError("stochastic basis needs at least one node");
    for (double s : sigma)
        if (!(s > 0.0) || !std::isfinite(s)) throw InputError("stochastic basis: sigma must be positive");

    Rng rng = make_rng(seed, {0x6261736973ULL});
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<BasisNode> nodes;
    nodes.reserve(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        Config pos(sigma.size());
        for (std::size_t d = 0; d < pos.size(); ++d) pos[d] = sigma[d] * normal(rng);
        const double density = gaussian_density(pos, sigma);
        nodes.push_back({std::move(pos), 1.0 / (static_cast<double>(n_nodes) * density)});
    }
    return BasisSet(dimension, std::move(nodes), GaussianNodes{{sigma.begin(), sigma.end()}, seed});
}

void write_basis_table(std::ostream& os, const BasisSet& basis) {
    os << "# index";
    for (int d = 0; d < basis.dimension(); ++d) os << " x" << d + 1;
    os << " cell_measure\n";
    for (std::size_t i = 0; i < basis.size(); ++i) {
        os << i;
        for (double x : basis[i].position) os << ' ' << format_double(x);
        os << ' ' << format_double(basis[i].cell_measure) << '\n';
    }
}

}  // namespace mch
