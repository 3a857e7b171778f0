#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "mch/model.hpp"

namespace mch {

// ---- Oscillator chain ------------------------------------------------------

// Lattice momenta l = -floor((N-1)/2) .. ceil((N-1)/2), exactly N of them.
std::vector<int> chain_momenta(const ChainSpec& spec);

// omega_k = sqrt((Omega^2 (2 sin(k/2))^2 + Omega0^2) / m), k = 2 pi l / N,
// in the order of chain_momenta().
std::vector<double> chain_frequencies(const ChainSpec& spec, double mass = 1.0);

// Matrix A of the quadratic form V(q) = q^T A q / 2 for the periodic chain.
Eigen::MatrixXd chain_coupling_matrix(const ChainSpec& spec);

struct ChainLevel {
    double energy = 0.0;
    std::vector<int> occupation;  // phonon numbers, indexed like chain_frequencies()
};

struct ExactChainSpectrum {
    std::vector<int> momenta;
    std::vector<double> frequencies;
    std::vector<ChainLevel> levels;  // ascending, degenerate levels repeated
    // False when the next level beyond the requested count is degenerate with
    // the last returned one, i.e. the cut splits a multiplet.
    bool closes_multiplet = true;
};

// Lowest `count` levels hbar * sum (n_k + 1/2) omega_k, by best-first
// enumeration of occupation multisets.
ExactChainSpectrum chain_levels(const ChainSpec& spec, double hbar, std::size_t count,
                                double mass = 1.0);

// ---- Kernels ---------------------------------------------------------------

struct FreeKernel {};
struct HarmonicKernel { double omega = 1.0; };
using KernelKind = std::variant<FreeKernel, HarmonicKernel>;

// Exact imaginary-time propagator <x_b|exp(-H T/hbar)|x_a>. The harmonic
// case is the Mehler kernel, isotropic in D dimensions.
double exact_kernel(const KernelKind& kind, const PhysicalParams& params, int dimension,
                    std::span<const double> x_a, std::span<const double> x_b, double t_total);

// Exact propagator of the oscillator chain from its normal modes.
double chain_kernel(const ChainSpec& spec, const PhysicalParams& params, std::span<const double> q_a,
                    std::span<const double> q_b, double t_total);

// ---- Finite-difference Hamiltonian -----------------------------------------

// Interior grid points per axis; psi vanishes on the box faces.
struct GridSpec {
    std::vector<int> points;
    Config low;
    Config high;
};

struct GridLevels {
    std::vector<double> energies;
    // max |psi_0| on the outermost grid points relative to max |psi_0|.
    double boundary_amplitude = 0.0;
    bool boundary_ok() const { return boundary_amplitude < 1e-6; }
};

// Lowest `count` eigenvalues of -(hbar^2/2m) Laplacian + V on a uniform grid
// (central differences, Dirichlet walls). Point particles with D <= 2.
GridLevels grid_hamiltonian_levels(const ModelSpec& model, const GridSpec& grid, std::size_t count);

// Isotropic harmonic oscillator in D dimensions, degenerate levels repeated.
std::vector<double> harmonic_levels(double omega, double hbar, int dimension, std::size_t count);

}  // namespace mch
