#include "mch/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mch/error.hpp"

namespace mch {

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& symmetric) {
    if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0)
        throw UsageError("symmetric_eigen: matrix must be square and non-empty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw DiagnosticError("eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<std::pair<std::size_t, std::size_t>> EffectiveSpectrum::degenerate_multiplets(
    double rel_tol) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= energies.size(); ++i) {
        const bool same = i < energies.size() &&
                          std::abs(energies[i] - energies[i - 1]) <=
                              rel_tol * std::max(std::abs(energies[i]), std::abs(energies[i - 1]));
        if (!same) {
            if (i - start > 1) out.emplace_back(start, i - 1);
            start = i;
        }
    }
    return out;
}

EffectiveSpectrum diagonalize(const TransitionMatrix& matrix, const BasisSet& basis,
                              const PhysicalParams& params, const FloorPolicy& floor) {
    const Eigen::Index n = matrix.size();
    if (n == 0 || matrix.values.cols() != n) throw UsageError("diagonalize: matrix must be square");
    if (static_cast<Eigen::Index>(basis.size()) != n)
        throw UsageError("diagonalize: basis size does not match matrix");
    if (matrix.basis_fingerprint != 0 && matrix.basis_fingerprint != basis.fingerprint())
        throw UsageError("diagonalize: matrix was built on a different basis");
    if (!(matrix.t_total > 0.0)) throw InputError("diagonalize: matrix has no time extent");

    const Eigen::MatrixXd sym = 0.5 * (matrix.values + matrix.values.transpose());
    const SymmetricEigen eig = symmetric_eigen(sym);
    const double lambda_max = eig.values.maxCoeff();
    if (!(lambda_max > 0.0))
        throw DiagnosticError("all eigenvalues of the transition matrix are non-positive");

    EffectiveSpectrum out;
    out.t_total = matrix.t_total;
    out.hbar = params.hbar;
    out.lambda_floor = floor.explicit_floor
                           ? *floor.explicit_floor
                           : std::max(floor.absolute, floor.relative_factor *
                                                          matrix.relative_error_level() * lambda_max);
    out.positions.reserve(basis.size());
    out.cell_measures.reserve(basis.size());
    for (const auto& node : basis.nodes()) {
        out.positions.push_back(node.position);
        out.cell_measures.push_back(node.cell_measure);
    }

    // Eigen returns ascending eigenvalues; the largest eigenvalue is the lowest energy.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = n; k-- > 0;) {
        if (eig.values(k) > out.lambda_floor) kept.push_back(k);
        else ++out.n_discarded;
    }
    if (kept.empty())
        throw DiagnosticError("every eigenvalue of the transition matrix lies below the floor");

    out.eigenvectors.resize(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t s = 0; s < kept.size(); ++s) {
        const double lambda = eig.values(kept[s]);
        out.eigenvalues.push_back(lambda);
        out.energies.push_back(-(params.hbar / matrix.t_total) * std::log(lambda));

        Eigen::VectorXd psi = eig.vectors.col(kept[s]);
        double norm2 = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            psi(i) /= std::sqrt(out.cell_measures[static_cast<std::size_t>(i)]);
            norm2 += out.cell_measures[static_cast<std::size_t>(i)] * psi(i) * psi(i);
        }
        psi /= std::sqrt(norm2);
        Eigen::Index peak = 0;
        psi.cwiseAbs().maxCoeff(&peak);
        if (psi(peak) < 0.0) psi = -psi;
        out.eigenvectors.col(static_cast<Eigen::Index>(s)) = psi;
    }
    return out;
}

std::vector<WavefunctionSample> wavefunction(const EffectiveSpectrum& spectrum, std::size_t state) {
    if (state >= spectrum.size())
        throw UsageError("wavefunction: state " + std::to_string(state) + " out of range (" +
                         std::to_string(spectrum.size()) + " kept)");
    std::vector<WavefunctionSample> out;
    out.reserve(spectrum.positions.size());
    for (std::size_t i = 0; i < spectrum.positions.size(); ++i)
        out.push_back({spectrum.positions[i],
                       spectrum.eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(state))});
    return out;
}

ThermoCurve thermodynamics(std::span<const double> energies, std::span<const double> beta_grid) {
    if (energies.empty()) throw InputError("thermodynamics: empty spectrum");
    for (std::size_t b = 0; b < beta_grid.size(); ++b) {
        if (!(beta_grid[b] > 0.0)) throw InputError("thermodynamics: beta must be positive");
        if (b > 0 && !(beta_grid[b] > beta_grid[b - 1]))
            throw InputError("thermodynamics: beta grid must be ascending");
    }

    ThermoCurve out;
    const double e0 = *std::min_element(energies.begin(), energies.end());
    const double e_top = *std::max_element(energies.begin(), energies.end());
    out.ground_shift = e0;
    for (double beta : beta_grid) {
        double z = 0.0;
        double mean = 0.0;
        for (double e : energies) {
            const double w = std::exp(-beta * (e - e0));
            z += w;
            mean += (e - e0) * w;
        }
        mean /= z;
        double var = 0.0;
        for (double e : energies) {
            const double d = e - e0 - mean;
            var += d * d * std::exp(-beta * (e - e0));
        }
        var /= z;
        out.beta.push_back(beta);
        out.partition.push_back(z);
        out.log_partition.push_back(std::log(z) - beta * e0);
        out.energy.push_back(e0 + mean);
        out.specific_heat.push_back(beta * beta * var);
        out.top_level_weight.push_back(std::exp(-beta * (e_top - e0)) / z);
    }
    return out;
}

ThermoCurve thermodynamics(const EffectiveSpectrum& spectrum, std::span<const double> beta_grid) {
    return thermodynamics(std::span<const double>(spectrum.energies), beta_grid);
}

}  // namespace mch
