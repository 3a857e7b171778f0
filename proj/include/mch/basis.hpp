#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mch/model.hpp"

namespace mch {

// Box state e_n: position x_n and the D-volume of its cell.
struct BasisNode {
    Config position;
    double cell_measure = 0.0;
};

struct RegularGrid {
    std::vector<int> counts;
    Config low;
    Config high;
};

struct GaussianNodes {
    Config sigma;
    std::uint64_t seed = 0;
};

using BasisKind = std::variant<RegularGrid, GaussianNodes>;

class BasisSet {
public:
    BasisSet(int dimension, std::vector<BasisNode> nodes, BasisKind kind);

    int dimension() const { return dim_; }
    std::size_t size() const { return nodes_.size(); }
    const BasisNode& operator[](std::size_t i) const { return nodes_[i]; }
    const std::vector<BasisNode>& nodes() const { return nodes_; }
    const BasisKind& kind() const { return kind_; }
    bool is_regular() const { return std::holds_alternative<RegularGrid>(kind_); }

    // Content hash over positions and measures; identifies the basis a
    // transition matrix was built on.
    std::uint64_t fingerprint() const;

    // Same nodes, every cell measure multiplied by factor.
    BasisSet rescaled(double factor) const;
    // Same nodes in the order given by perm (new i = old perm[i]).
    BasisSet permuted(std::span<const std::size_t> perm) const;

private:
    int dim_;
    std::vector<BasisNode> nodes_;
    BasisKind kind_;
};

// Tensor grid with nodes at the lower corner of each cell; the first axis
// varies slowest.
BasisSet build_regular_basis(int dimension, std::span<const int> per_axis_counts,
                             std::span<const double> box_low, std::span<const double> box_high);

struct SigmaChoice {
    Config sigma;
    bool fallback = false;  // potential has no Gaussian rule; free-particle width used
};

// Per-coordinate width of the Gaussian node distribution for a source
// amplitude evolved over imaginary time t_prime.
//   free:      sqrt(hbar t'/m)
//   harmonic:  sqrt(hbar sinh(omega t')/(m omega))
// The chain uses the harmonic rule with omega = on-site frequency.
SigmaChoice stochastic_sigma(const ModelSpec& model, double t_prime);

// Product-Gaussian density used to draw stochastic nodes.
double gaussian_density(std::span<const double> x, std::span<const double> sigma);

// N nodes drawn iid from the product Gaussian; cell measure 1/(N P(x_n)).
BasisSet build_stochastic_basis(int dimension, std::size_t n_nodes, std::span<const double> sigma,
                                std::uint64_t seed);

// Text table: header line, then "index x_1 ... x_D cell_measure" per node.
void write_basis_table(std::ostream& os, const BasisSet& basis);

}  // namespace mch
