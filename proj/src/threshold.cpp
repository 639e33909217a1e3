#include "censtail/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace censtail {

namespace {

// value of one path at k; the k grid is strictly increasing
bool path_value(const KPath& path, int k, double* out) {
    const auto it = std::lower_bound(path.k_values.begin(), path.k_values.end(), k);
    if (it == path.k_values.end() || *it != k) return false;
    *out = path.estimates[static_cast<std::size_t>(it - path.k_values.begin())];
    return true;
}

}  // namespace

double agreement_objective(const std::vector<KPath>& paths, int k) {
    std::vector<double> values(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (!path_value(paths[i], k, &values[i]))
            raise(ErrorCode::domain,
                  "path " + std::string(estimator_name(paths[i].id)) +
                      " has no estimate at k = " + std::to_string(k));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const double diff = values[i] - values[j];
            sum += diff * diff;
        }
    return std::sqrt(sum);
}

int k_opt(const std::vector<KPath>& paths, int k_min, int k_max) {
    if (paths.size() < 2)
        raise(ErrorCode::domain, "threshold selection requires at least 2 estimator paths");
    if (k_min > k_max) raise(ErrorCode::domain, "k_min must not exceed k_max");
    for (const auto& p : paths) {
        if (p.k_values.size() != p.estimates.size())
            raise(ErrorCode::domain, "path lengths differ");
    }

    int best_k = k_min;
    double best = agreement_objective(paths, k_min);
    for (int k = k_min + 1; k <= k_max; ++k) {
        const double obj = agreement_objective(paths, k);
        if (obj < best) {  // ties keep the smallest k
            best = obj;
            best_k = k;
        }
    }
    return best_k;
}

}  // namespace censtail
