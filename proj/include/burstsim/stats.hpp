#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace burstsim::stats {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Population standard deviation.
inline double stddev(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

/// Nearest-rank percentile, p in (0, 100].
inline double percentile(std::vector<double> xs, double p) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    auto n = static_cast<double>(xs.size());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
    if (rank == 0) rank = 1;
    if (rank > xs.size()) rank = xs.size();
    return xs[rank - 1];
}

}  // namespace burstsim::stats
