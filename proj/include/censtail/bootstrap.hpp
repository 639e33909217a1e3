#ifndef CENSTAIL_BOOTSTRAP_HPP
#define CENSTAIL_BOOTSTRAP_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "censtail/types.hpp"

namespace censtail {

/// Block layout for the conditional block bootstrap. The anchoring class is
/// whichever of censored / noncensored is rarer, so every block holds
/// observations of both classes whenever its size permits.
struct BlockPlan {
    int d = 1;           // minority observations per full block
    std::size_t s = 0;   // block size, ceil(n*d / n_minority)
    std::size_t m = 0;   // block count, ceil(n / s)
    bool censored_is_minority = true;
    std::vector<std::vector<std::uint32_t>> blocks;  // index lists, partition 0..n-1
};

/// Randomized block assignment. Throws degenerate_sample when either class
/// is empty (the two excluded censoring scenarios).
BlockPlan plan_blocks(const CensoredSample& sample, int d, std::uint64_t seed);

/// Draws blocks with replacement, concatenating until the size first reaches
/// n, then truncates to exactly n. The result always contains at least one
/// censored and one noncensored observation.
CensoredSample resample(const BlockPlan& plan, const CensoredSample& sample,
                        std::uint64_t seed);

struct IntervalEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;   // 1 - alpha
    int replicates = 0;   // replicate values the interval was built from
    int dropped = 0;      // replicates discarded due to estimator failure
};

/// Percentile bootstrap interval from B replicate estimates on conditional
/// block resamples (each re-sorted, same k). Replicates failing with domain
/// errors are dropped; more than 5% drops raises unstable_bootstrap.
IntervalEstimate bootstrap_ci(const CensoredSample& sample, Estimator estimator, int k,
                              int replicates, double alpha, int d, std::uint64_t seed);

/// Same interval construction for an arbitrary statistic.
IntervalEstimate bootstrap_ci(const CensoredSample& sample, int k, int replicates,
                              double alpha, int d, std::uint64_t seed,
                              const std::function<double(const CensoredSample&, int)>& statistic);

/// Replicate values for several estimators computed on one shared resample
/// sequence; entry [e] holds the successful replicate values for ids[e].
/// bootstrap_ci(sample, id, ...) is the single-estimator special case and
/// produces identical values for identical seeds.
struct ReplicateSet {
    std::vector<std::vector<double>> values;
    std::vector<int> dropped;
};

ReplicateSet bootstrap_replicates(const CensoredSample& sample,
                                  const std::vector<Estimator>& ids, int k, int replicates,
                                  int d, std::uint64_t seed);

}  // namespace censtail

#endif
