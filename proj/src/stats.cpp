#include "mch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mch/error.hpp"

namespace mch {

MeanError batch_means(std::span<const double> samples, std::size_t max_batches) {
    const std::size_t n = samples.size();
    if (n < 2) throw InputError("batch means needs at least two samples");
    const std::size_t nb = std::min(n, std::max<std::size_t>(max_batches, 2));

    double total = 0.0;
    for (double s : samples) total += s;
    const double mean = total / static_cast<double>(n);

    std::vector<double> batch(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = b * n / nb;
        const std::size_t hi = (b + 1) * n / nb;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += samples[i];
        batch[b] = acc / static_cast<double>(hi - lo);
    }
    double var = 0.0;
    for (double bm : batch) var += (bm - mean) * (bm - mean);
    var /= static_cast<double>(nb) * static_cast<double>(nb - 1);
    return {mean, std::sqrt(var)};
}

double sample_variance(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    return var / static_cast<double>(n - 1);
}

}  // namespace mch
