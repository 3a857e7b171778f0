#pragma once

#include <cstddef>
#include <span>

namespace mch {

struct MeanError {
    double mean = 0.0;
    double error = 0.0;
};

// Sample mean with a batch-means standard error. Uses max_batches contiguous
// batches (or one sample per batch when there are fewer samples).
MeanError batch_means(std::span<const double> samples, std::size_t max_batches = 32);

// Unbiased sample variance.
double sample_variance(std::span<const double> samples);

}  // namespace mch
