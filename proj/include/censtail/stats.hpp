#ifndef CENSTAIL_STATS_HPP
#define CENSTAIL_STATS_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

namespace censtail {

/// Interpolated empirical quantile (the "type 7" rule: h = (m-1)q, linear
/// between neighbouring order statistics). `sorted` must be ascending and
/// nonempty; q in [0, 1].
inline double interp_quantile(const std::vector<double>& sorted, double q) {
    const std::size_t m = sorted.size();
    if (m == 1) return sorted[0];
    const double h = q * static_cast<double>(m - 1);
    auto lo = static_cast<std::size_t>(h);
    if (lo >= m - 1) return sorted[m - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double median(std::vector<double> v) {
    const std::size_t m = v.size();
    std::sort(v.begin(), v.end());
    if (m % 2 == 1) return v[m / 2];
    return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace censtail

#endif
