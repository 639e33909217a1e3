#ifndef CENSTAIL_THRESHOLD_HPP
#define CENSTAIL_THRESHOLD_HPP

#include <vector>

#include "censtail/types.hpp"

namespace censtail {

/// Adapted EVI estimates of one estimator along a grid of k values.
struct KPath {
    Estimator id;
    std::vector<int> k_values;     // strictly increasing
    std::vector<double> estimates; // aligned with k_values
};

/// sqrt of the sum of squared pairwise differences between the estimators'
/// values at k, over unordered pairs. Every path must contain k.
double agreement_objective(const std::vector<KPath>& paths, int k);

/// argmin of the agreement objective over k in [k_min, k_max]; ties resolve
/// to the smallest k. Requires >= 2 paths, each covering every integer in
/// the range.
int k_opt(const std::vector<KPath>& paths, int k_min, int k_max);

}  // namespace censtail

#endif
