#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace stats {

struct Summary {
    double mean = 0.0;
    double var = 0.0;  // unbiased
    double se = 0.0;   // of the mean
};

inline Summary summarize(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double m = 0.0;
    for (double x : xs) m += x;
    m /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double var = ss / (n - 1.0);
    return {m, var, std::sqrt(var / n)};
}

// Sup distance between the empirical CDF of xs and cdf.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    return d;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace stats
