#include "censtail/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace censtail {

TailView make_tail_view(const CensoredSample& sample, int k) {
    const auto n = sample.size();
    if (k < 1 || static_cast<std::size_t>(k) > n - 1)
        raise(ErrorCode::domain, "k = " + std::to_string(k) + " outside 1..n-1 for n = " +
                                     std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sample.z()[a] < sample.z()[b];
    });

    std::vector<double> z_sorted(n);
    std::vector<unsigned char> delta_sorted(n);
    for (std::size_t i = 0; i < n; ++i) {
        z_sorted[i] = sample.z()[order[i]];
        delta_sorted[i] = sample.delta()[order[i]];
    }

    long flags = 0;
    for (std::size_t i = n - static_cast<std::size_t>(k); i < n; ++i) flags += delta_sorted[i];
    const double p_hat = static_cast<double>(flags) / static_cast<double>(k);

    return TailView(std::move(z_sorted), std::move(delta_sorted), k, p_hat);
}

TailView change_k(const TailView& view, int k) {
    const int n = view.n();
    if (k < 1 || k > n - 1)
        raise(ErrorCode::domain, "k = " + std::to_string(k) + " outside 1..n-1 for n = " +
                                     std::to_string(n));
    long flags = 0;
    for (int j = 1; j <= k; ++j) flags += view.top_delta(j);
    const double p_hat = static_cast<double>(flags) / static_cast<double>(k);
    return TailView(view.z_sorted(), view.delta_sorted(), k, p_hat);
}

double adapt_to_censoring(double raw, const TailView& view) {
    if (view.p_hat() == 0.0)
        raise(ErrorCode::fully_censored,
              "all of the top " + std::to_string(view.k()) +
                  " observations are censored; estimation impossible");
    return raw / view.p_hat();
}

int k_from_fraction(std::size_t n, double fraction) {
    if (!(fraction > 0.0) || !(fraction < 1.0))
        raise(ErrorCode::domain, "k fraction must lie in (0, 1)");
    const int k = static_cast<int>(std::floor(fraction * static_cast<double>(n)));
    if (k < 1 || static_cast<std::size_t>(k) > n - 1)
        raise(ErrorCode::domain, "k fraction " + std::to_string(fraction) +
                                     " gives no valid k for n = " + std::to_string(n));
    return k;
}

}  // namespace censtail
