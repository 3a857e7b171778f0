#include "mch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <tuple>

#include "mch/error.hpp"

namespace mch {

std::vector<int> chain_momenta(const ChainSpec& spec) {
    spec.validate();
    const int n = spec.n_osc;
    std::vector<int> out;
    for (int l = -((n - 1) / 2); l <= n / 2; ++l) out.push_back(l);
    return out;
}

std::vector<double> chain_frequencies(const ChainSpec& spec, double mass) {
    std::vector<double> out;
    for (int l : chain_momenta(spec)) {
        const double k = 2.0 * std::numbers::pi * l / spec.n_osc;
        const double s = 2.0 * std::sin(0.5 * k);
        out.push_back(std::sqrt((spec.omega_coupling * spec.omega_coupling * s * s +
                                 spec.omega_onsite * spec.omega_onsite) /
                                mass));
    }
    return out;
}

Eigen::MatrixXd chain_coupling_matrix(const ChainSpec& spec) {
    spec.validate();
    const int n = spec.n_osc;
    const double c2 = spec.omega_coupling * spec.omega_coupling;
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) * (spec.omega_onsite * spec.omega_onsite);
    // Each bond (j, j+1) contributes c2 (q_j - q_{j+1})^2 / 2. For N = 1 the
    // bond closes on itself and vanishes.
    for (int j = 0; j < n; ++j) {
        const int k = (j + 1) % n;
        if (k == j) continue;
        a(j, j) += c2;
        a(k, k) += c2;
        a(j, k) -= c2;
        a(k, j) -= c2;
    }
    return a;
}

ExactChainSpectrum chain_levels(const ChainSpec& spec, double hbar, std::size_t count, double mass) {
    if (count < 1) throw InputError("chain_levels: count must be at least 1");
    ExactChainSpectrum out;
    out.momenta = chain_momenta(spec);
    out.frequencies = chain_frequencies(spec, mass);
    const std::size_t modes = out.frequencies.size();

    double zero_point = 0.0;
    for (double w : out.frequencies) zero_point += 0.5 * w;
    auto energy_of = [&](const std::vector<int>& occ) {
        double e = zero_point;
        for (std::size_t k = 0; k < modes; ++k) e += occ[k] * out.frequencies[k];
        return hbar * e;
    };

    // Each multiset is reached once: phonons are only added to modes at or
    // after the last one touched. Adding a phonon never lowers the energy,
    // so popping in energy order yields the spectrum in ascending order.
    using Node = std::tuple<double, std::vector<int>, std::size_t>;
    auto later = [](const Node& a, const Node& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) > std::tie(std::get<0>(b), std::get<1>(b));
    };
    std::priority_queue<Node, std::vector<Node>, decltype(later)> frontier(later);
    std::vector<int> ground(modes, 0);
    frontier.emplace(energy_of(ground), ground, 0);

    while (out.levels.size() < count) {
        auto [energy, occ, last] = frontier.top();
        frontier.pop();
        for (std::size_t k = last; k < modes; ++k) {
            auto child = occ;
            ++child[k];
            frontier.emplace(energy_of(child), std::move(child), k);
        }
        out.levels.push_back({energy, std::move(occ)});
    }
    const double last_e = out.levels.back().energy;
    const double next_e = std::get<0>(frontier.top());
    out.closes_multiplet = next_e - last_e > 1e-12 * std::max(1.0, std::abs(last_e));
    return out;
}

namespace {

double mehler(double omega, const PhysicalParams& p, int dim, std::span<const double> a,
              std::span<const double> b, double t) {
    const double wt = omega * t;
    const double sh = std::sinh(wt);
    const double th = std::tanh(0.5 * wt);
    double diff2 = 0.0;
    double sum2 = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        diff2 += (a[d] - b[d]) * (a[d] - b[d]);
        sum2 += a[d] * a[d] + b[d] * b[d];
    }
    const double c = p.mass * omega / p.hbar;
    // (a^2+b^2) coth - 2ab/sinh rewritten without cancellation.
    const double exponent = -0.5 * c * (diff2 / sh + sum2 * th);
    return std::pow(c / (2.0 * std::numbers::pi * sh), 0.5 * dim) * std::exp(exponent);
}

}  // namespace

double exact_kernel(const KernelKind& kind, const PhysicalParams& params, int dimension,
                    std::span<const double> x_a, std::span<const double> x_b, double t_total) {
    if (!(t_total > 0.0)) throw InputError("exact_kernel: T must be positive");
    if (x_a.size() != static_cast<std::size_t>(dimension) || x_b.size() != x_a.size())
        throw UsageError("exact_kernel: endpoint dimension mismatch");
    if (const auto* h = std::get_if<HarmonicKernel>(&kind)) {
        if (!(h->omega > 0.0)) throw InputError("exact_kernel: omega must be positive");
        return mehler(h->omega, params, dimension, x_a, x_b, t_total);
    }
    double dist2 = 0.0;
    for (std::size_t d = 0; d < x_a.size(); ++d) dist2 += (x_b[d] - x_a[d]) * (x_b[d] - x_a[d]);
    const double m = params.mass;
    const double hbar = params.hbar;
    return std::pow(m / (2.0 * std::numbers::pi * hbar * t_total), 0.5 * dimension) *
           std::exp(-m * dist2 / (2.0 * hbar * t_total));
}

double chain_kernel(const ChainSpec& spec, const PhysicalParams& params, std::span<const double> q_a,
                    std::span<const double> q_b, double t_total) {
    const auto n = static_cast<Eigen::Index>(spec.n_osc);
    if (q_a.size() != static_cast<std::size_t>(n) || q_b.size() != q_a.size())
        throw UsageError("chain_kernel: configuration dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(chain_coupling_matrix(spec));
    const Eigen::Map<const Eigen::VectorXd> a(q_a.data(), n);
    const Eigen::Map<const Eigen::VectorXd> b(q_b.data(), n);
    const Eigen::VectorXd ya = eig.eigenvectors().transpose() * a;
    const Eigen::VectorXd yb = eig.eigenvectors().transpose() * b;
    double k = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double omega = std::sqrt(eig.eigenvalues()(i) / params.mass);
        const double ai = ya(i);
        const double bi = yb(i);
        k *= mehler(omega, params, 1, {&ai, 1}, {&bi, 1}, t_total);
    }
    return k;
}

namespace {

constexpr double kForbiddenPotential = 1e12;

double grid_potential(const ModelSpec& model, std::span<const double> x) {
    const auto v = evaluate_potential(model, x);
    return v ? *v : kForbiddenPotential;
}

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x
// (Sturm sequence via the LDL^T pivots).
std::size_t sturm_count(const std::vector<double>& diag, double off2_scale, double x) {
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        q = diag[i] - x - (i > 0 ? off2_scale / q : 0.0);
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

GridLevels grid_1d(const ModelSpec& model, const GridSpec& grid, std::size_t count) {
    const int n = grid.points[0];
    const double h = (grid.high[0] - grid.low[0]) / (n + 1);
    const double t = model.params().hbar * model.params().hbar / (2.0 * model.params().mass * h * h);
    std::vector<double> diag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = grid.low[0] + (i + 1) * h;
        diag[static_cast<std::size_t>(i)] = 2.0 * t + grid_potential(model, {&x, 1});
    }
    const double off = -t;
    const double lo0 = *std::min_element(diag.begin(), diag.end()) - 2.0 * t;
    const double hi0 = *std::max_element(diag.begin(), diag.end()) + 2.0 * t;

    GridLevels out;
    for (std::size_t k = 0; k < count; ++k) {
        double lo = lo0;
        double hi = hi0;
        while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) &&
               hi - lo > 1e-300) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (sturm_count(diag, off * off, mid) > k) hi = mid;
            else lo = mid;
        }
        out.energies.push_back(0.5 * (lo + hi));
    }

    // Ground state by inverse iteration (Thomas solves on the shifted matrix).
    const double shift = out.energies[0] - 1e-9 * std::max(1.0, std::abs(out.energies[0]));
    std::vector<double> v(diag.size(), 1.0);
    std::vector<double> c(diag.size());
    std::vector<double> rhs(diag.size());
    for (int it = 0; it < 4; ++it) {
        double denom = diag[0] - shift;
        c[0] = off / denom;
        rhs[0] = v[0] / denom;
        for (std::size_t i = 1; i < diag.size(); ++i) {
            denom = diag[i] - shift - off * c[i - 1];
            c[i] = off / denom;
            rhs[i] = (v[i] - off * rhs[i - 1]) / denom;
        }
        for (std::size_t i = diag.size() - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
        double norm = 0.0;
        for (double r : rhs) norm = std::max(norm, std::abs(r));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = rhs[i] / norm;
    }
    out.boundary_amplitude = std::max(std::abs(v.front()), std::abs(v.back()));
    return out;
}

GridLevels grid_2d(const ModelSpec& model, const GridSpec& grid, std::size_t count) {
    const int nx = grid.points[0];
    const int ny = grid.points[1];
    const double hx = (grid.high[0] - grid.low[0]) / (nx + 1);
    const double hy = (grid.high[1] - grid.low[1]) / (ny + 1);
    const double k = model.params().hbar * model.params().hbar / (2.0 * model.params().mass);
    const double tx = k / (hx * hx);
    const double ty = k / (hy * hy);
    const Eigen::Index total = static_cast<Eigen::Index>(nx) * ny;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(total, total);
    auto index = [ny](int i, int j) { return static_cast<Eigen::Index>(i) * ny + j; };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double x[2] = {grid.low[0] + (i + 1) * hx, grid.low[1] + (j + 1) * hy};
            const Eigen::Index p = index(i, j);
            h(p, p) = 2.0 * tx + 2.0 * ty + grid_potential(model, x);
            if (i + 1 < nx) h(p, index(i + 1, j)) = h(index(i + 1, j), p) = -tx;
            if (j + 1 < ny) h(p, index(i, j + 1)) = h(index(i, j + 1), p) = -ty;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    GridLevels out;
    for (std::size_t s = 0; s < count && static_cast<Eigen::Index>(s) < total; ++s)
        out.energies.push_back(eig.eigenvalues()(static_cast<Eigen::Index>(s)));
    const Eigen::VectorXd g = eig.eigenvectors().col(0);
    const double peak = g.cwiseAbs().maxCoeff();
    double edge = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1)
                edge = std::max(edge, std::abs(g(index(i, j))));
    out.boundary_amplitude = edge / peak;
    return out;
}

}  // namespace

GridLevels grid_hamiltonian_levels(const ModelSpec& model, const GridSpec& grid, std::size_t count) {
    if (model.is_chain()) throw UsageError("grid oracle: chains use chain_levels");
    const int dim = model.dimension();
    if (dim > 2) throw UsageError("grid oracle supports D <= 2");
    if (grid.points.size() != static_cast<std::size_t>(dim) || grid.low.size() != grid.points.size() ||
        grid.high.size() != grid.points.size())
        throw UsageError("grid oracle: grid spec needs one entry per axis");
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) {
        if (grid.points[static_cast<std::size_t>(a)] < 3) throw InputError("grid oracle: need at least 3 points per axis");
        if (!(grid.low[static_cast<std::size_t>(a)] < grid.high[static_cast<std::size_t>(a)]))
            throw InputError("grid oracle: degenerate box");
        total *= static_cast<std::size_t>(grid.points[static_cast<std::size_t>(a)]);
    }
    if (count < 1 || count > total) throw InputError("grid oracle: level count out of range");
    return dim == 1 ? grid_1d(model, grid, count) : grid_2d(model, grid, count);
}

std::vector<double> harmonic_levels(double omega, double hbar, int dimension, std::size_t count) {
    if (dimension < 1) throw InputError("harmonic_levels: dimension must be positive");
    std::vector<double> out;
    for (long n = 0; out.size() < count; ++n) {
        // C(n + D - 1, D - 1) states share the shell n.
        long degeneracy = 1;
        for (int j = 1; j < dimension; ++j) degeneracy = degeneracy * (n + j) / j;
        for (long g = 0; g < degeneracy && out.size() < count; ++g)
            out.push_back(hbar * omega * (static_cast<double>(n) + 0.5 * dimension));
    }
    return out;
}

}  // namespace mch
