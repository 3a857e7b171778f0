#include "mch/transition.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>
#include <utility>
#include <vector>

#include "mch/error.hpp"
#include "mch/format.hpp"
#include "mch/rng.hpp"

namespace mch {

static_assert(std::endian::native == std::endian::little, "binary matrix format assumes little endian");

namespace {

constexpr char kMagic[8] = {'M', 'C', 'H', 'T', 'M', 'A', 'T', '1'};

std::uint64_t entry_stream_key(std::span<const double> from, std::span<const double> to) {
    return derive_seed(hash_config(from), {hash_config(to)});
}

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw InputError("truncated matrix file");
    return v;
}

}  // namespace

double free_kernel(const PhysicalParams& params, int dimension, std::span<const double> x_a,
                   std::span<const double> x_b, double t_total) {
    if (!(t_total > 0.0)) throw InputError("free_kernel: T must be positive");
    if (x_a.size() != static_cast<std::size_t>(dimension) || x_b.size() != x_a.size())
        throw UsageError("free_kernel: endpoint dimension mismatch");
    const double m = params.mass;
    const double hbar = params.hbar;
    double dist2 = 0.0;
    for (std::size_t d = 0; d < x_a.size(); ++d) dist2 += (x_b[d] - x_a[d]) * (x_b[d] - x_a[d]);
    const double norm = std::pow(m / (2.0 * std::numbers::pi * hbar * t_total), 0.5 * dimension);
    return norm * std::exp(-m * dist2 / (2.0 * hbar * t_total));
}

Amplitude amplitude(const ModelSpec& model, std::span<const double> x_a, std::span<const double> x_b,
                    const SamplerConfig& cfg, std::uint64_t stream_key) {
    const auto stats = measure_potential_weight(model, x_a, x_b, cfg, stream_key);
    const double k = free_kernel(model.params(), model.dimension(), x_a, x_b, model.time().t_total);
    return {stats.mean_weight * k, stats.std_error * k};
}

Amplitude amplitude(const ModelSpec& model, std::span<const double> x_a, std::span<const double> x_b,
                    const FluctuationBank& bank) {
    const auto stats = measure_potential_weight(model, x_a, x_b, bank);
    const double k = free_kernel(model.params(), model.dimension(), x_a, x_b, model.time().t_total);
    return {stats.mean_weight * k, stats.std_error * k};
}

double TransitionMatrix::max_asymmetry() const {
    const double scale = values.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (values - values.transpose()).cwiseAbs().maxCoeff() / scale;
}

double TransitionMatrix::max_combined_error() const {
    const double scale = values.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    const Eigen::MatrixXd sq = errors.cwiseProduct(errors);
    return (sq + sq.transpose()).cwiseSqrt().maxCoeff() / scale;
}

double TransitionMatrix::relative_error_level() const {
    const double norm = values.norm();
    return norm > 0.0 ? errors.norm() / norm : 0.0;
}

std::size_t TransitionMatrix::flagged_entries(double relative_threshold) const {
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            if (errors(i, j) > relative_threshold * std::abs(values(i, j))) ++count;
    return count;
}

TransitionMatrix build_matrix(const ModelSpec& model, const BasisSet& basis, const SamplerConfig& cfg,
                              const MatrixOptions& options) {
    if (basis.dimension() != model.dimension())
        throw UsageError("basis dimension " + std::to_string(basis.dimension()) +
                         " does not match model dimension " + std::to_string(model.dimension()));
    cfg.validate();

    const auto n = static_cast<Eigen::Index>(basis.size());
    TransitionMatrix out;
    out.values = Eigen::MatrixXd::Zero(n, n);
    out.errors = Eigen::MatrixXd::Zero(n, n);
    out.basis_fingerprint = basis.fingerprint();
    out.t_total = model.time().t_total;
    out.seed = cfg.seed;

    const bool bridge = std::holds_alternative<BrownianBridge>(cfg.method);
    std::optional<FluctuationBank> bank;
    if (bridge && options.streams == StreamPolicy::Common)
        bank.emplace(model, cfg.n_paths, cfg.seed);

    // Entry (row, col) propagates from node col to node row.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> tasks;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = options.symmetric_fill ? r : 0; c < n; ++c) tasks.emplace_back(r, c);

    auto measure = [&](Eigen::Index row, Eigen::Index col) {
        std::span<const double> from = basis[static_cast<std::size_t>(col)].position;
        std::span<const double> to = basis[static_cast<std::size_t>(row)].position;
        // With mirrored filling the direction is fixed by node identity so a
        // reordered basis measures every pair identically.
        if (options.symmetric_fill && basis[static_cast<std::size_t>(row)].position <
                                          basis[static_cast<std::size_t>(col)].position)
            std::swap(from, to);
        const Amplitude amp = bank ? amplitude(model, from, to, *bank)
                                   : amplitude(model, from, to, cfg, entry_stream_key(from, to));
        const double norm = std::sqrt(basis[static_cast<std::size_t>(row)].cell_measure *
                                      basis[static_cast<std::size_t>(col)].cell_measure);
        out.values(row, col) = norm * amp.value;
        out.errors(row, col) = norm * amp.error;
        if (options.symmetric_fill) {
            out.values(col, row) = out.values(row, col);
            out.errors(col, row) = out.errors(row, col);
        }
    };

    const unsigned n_threads =
        std::min<unsigned>(resolve_threads(options.threads), static_cast<unsigned>(tasks.size()));
    if (n_threads <= 1) {
        for (const auto& [r, c] : tasks) measure(r, c);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(n_threads);
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < n_threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t t = next++; t < tasks.size(); t = next++)
                        measure(tasks[t].first, tasks[t].second);
                } catch (...) {
                    failures[w] = std::current_exception();
                    next = tasks.size();
                }
            });
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return out;
}

void write_matrix_binary(std::ostream& os, const TransitionMatrix& m) {
    os.write(kMagic, sizeof kMagic);
    put(os, static_cast<std::uint64_t>(m.size()));
    put(os, m.t_total);
    put(os, m.seed);
    for (const Eigen::MatrixXd* mat : {&m.values, &m.errors})
        for (Eigen::Index i = 0; i < mat->rows(); ++i)
            for (Eigen::Index j = 0; j < mat->cols(); ++j) put(os, (*mat)(i, j));
}

TransitionMatrix read_matrix_binary(std::istream& is) {
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw InputError("not a transition matrix file");
    TransitionMatrix m;
    const auto n = static_cast<Eigen::Index>(get<std::uint64_t>(is));
    m.t_total = get<double>(is);
    m.seed = get<std::uint64_t>(is);
    m.values.resize(n, n);
    m.errors.resize(n, n);
    for (Eigen::MatrixXd* mat : {&m.values, &m.errors})
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) (*mat)(i, j) = get<double>(is);
    return m;
}

void write_matrix_csv(std::ostream& os, const TransitionMatrix& m) {
    os << "row,col,value,error\n";
    for (Eigen::Index i = 0; i < m.size(); ++i)
        for (Eigen::Index j = 0; j < m.size(); ++j)
            os << i << ',' << j << ',' << format_double(m.values(i, j)) << ','
               << format_double(m.errors(i, j)) << '\n';
}

}  // namespace mch
