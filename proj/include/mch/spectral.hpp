#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mch/basis.hpp"
#include "mch/model.hpp"
#include "mch/transition.hpp"

namespace mch {

// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct SymmetricEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& symmetric);

// Eigenvalues of M at or below the floor are treated as noise and dropped.
// floor = max(absolute, relative_factor * (error level of M) * max eigenvalue)
// unless an explicit floor is given.
struct FloorPolicy {
    double absolute = 1e-12;
    double relative_factor = 1e-3;
    std::optional<double> explicit_floor;
};

struct EffectiveSpectrum {
    std::vector<double> energies;     // ascending
    std::vector<double> eigenvalues;  // kept eigenvalues of M, same order as energies
    // Column n holds psi_n on the basis nodes, normalised so that
    // sum_i cell_i |psi_n(x_i)|^2 = 1.
    Eigen::MatrixXd eigenvectors;
    std::vector<Config> positions;
    std::vector<double> cell_measures;
    std::size_t n_discarded = 0;
    double lambda_floor = 0.0;
    double t_total = 0.0;
    double hbar = 1.0;

    std::size_t size() const { return energies.size(); }

    // Runs of consecutive energies within rel_tol of each other, as
    // [first, last] index pairs; singletons are omitted.
    std::vector<std::pair<std::size_t, std::size_t>> degenerate_multiplets(double rel_tol = 1e-8) const;
};

// Symmetrises M, diagonalises it and maps eigenvalues to E = -(hbar/T) ln(lambda).
EffectiveSpectrum diagonalize(const TransitionMatrix& matrix, const BasisSet& basis,
                              const PhysicalParams& params, const FloorPolicy& floor = {});

struct WavefunctionSample {
    Config position;
    double amplitude = 0.0;
};

// Node-sampled psi_n with the largest-magnitude amplitude positive.
std::vector<WavefunctionSample> wavefunction(const EffectiveSpectrum& spectrum, std::size_t state);

struct ThermoCurve {
    std::vector<double> beta;
    std::vector<double> partition;        // sum exp(-beta (E_n - E_1))
    std::vector<double> log_partition;    // ln of the unshifted sum exp(-beta E_n)
    std::vector<double> energy;           // U(beta)
    std::vector<double> specific_heat;    // beta^2 Var(E)
    std::vector<double> top_level_weight; // Boltzmann weight of the highest kept level
    double ground_shift = 0.0;            // E_1
};

ThermoCurve thermodynamics(std::span<const double> energies, std::span<const double> beta_grid);
ThermoCurve thermodynamics(const EffectiveSpectrum& spectrum, std::span<const double> beta_grid);

}  // namespace mch
