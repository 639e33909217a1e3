#include "censtail/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "censtail/core.hpp"
#include "censtail/estimators.hpp"
#include "censtail/rng.hpp"
#include "censtail/stats.hpp"

namespace censtail {

namespace {

constexpr std::uint64_t kStreamCiPlan = 0x10;
constexpr std::uint64_t kStreamCiRep = 0x11;
constexpr std::uint64_t kStreamResampleDraw = 0x12;
constexpr std::uint64_t kStreamBlockFill = 0x13;

}  // namespace

BlockPlan plan_blocks(const CensoredSample& sample, int d, std::uint64_t seed) {
    const std::size_t n = sample.size();
    std::vector<std::uint32_t> censored, noncensored;
    for (std::size_t i = 0; i < n; ++i) {
        (sample.delta()[i] ? noncensored : censored).push_back(static_cast<std::uint32_t>(i));
    }
    if (censored.empty())
        raise(ErrorCode::degenerate_sample,
              "sample contains no censored observations; classical resampling applies");
    if (noncensored.empty())
        raise(ErrorCode::degenerate_sample,
              "sample is completely censored; estimation impossible");
    if (d < 1) raise(ErrorCode::domain, "block quota d must be at least 1");

    const bool censored_is_minority = censored.size() <= noncensored.size();
    auto minority = censored_is_minority ? censored : noncensored;
    auto majority = censored_is_minority ? noncensored : censored;
    if (static_cast<std::size_t>(d) > minority.size())
        raise(ErrorCode::domain, "block quota d exceeds the minority class size");

    const std::size_t s =
        (n * static_cast<std::size_t>(d) + minority.size() - 1) / minority.size();
    const std::size_t m = (n + s - 1) / s;

    BlockPlan plan;
    plan.d = d;
    plan.s = s;
    plan.m = m;
    plan.censored_is_minority = censored_is_minority;
    plan.blocks.resize(m);

    rng::Engine eng(rng::derive(seed, rng::kStreamBlockPlan));
    eng.shuffle(minority);
    eng.shuffle(majority);

    std::vector<std::size_t> capacity(m, s);
    capacity[m - 1] = n - s * (m - 1);

    // Quota of d minority observations per block (the remainder block takes
    // what its size and the class budget allow), then one majority
    // observation per block with room, then a random fill with the rest.
    std::size_t mi = 0, mj = 0;
    for (std::size_t b = 0; b < m; ++b) {
        std::size_t quota = std::min<std::size_t>(static_cast<std::size_t>(d), capacity[b]);
        quota = std::min(quota, minority.size() - mi);
        for (std::size_t q = 0; q < quota; ++q) plan.blocks[b].push_back(minority[mi++]);
        capacity[b] -= quota;
    }
    for (std::size_t b = 0; b < m && mj < majority.size(); ++b) {
        if (capacity[b] == 0) continue;
        plan.blocks[b].push_back(majority[mj++]);
        --capacity[b];
    }

    std::vector<std::uint32_t> pool;
    pool.insert(pool.end(), minority.begin() + static_cast<std::ptrdiff_t>(mi), minority.end());
    pool.insert(pool.end(), majority.begin() + static_cast<std::ptrdiff_t>(mj), majority.end());
    rng::Engine fill_eng(rng::derive(seed, kStreamBlockFill));
    fill_eng.shuffle(pool);

    std::size_t pi = 0;
    for (std::size_t b = 0; b < m; ++b) {
        while (capacity[b] > 0) {
            plan.blocks[b].push_back(pool[pi++]);
            --capacity[b];
        }
        fill_eng.shuffle(plan.blocks[b]);
    }
    return plan;
}

CensoredSample resample(const BlockPlan& plan, const CensoredSample& sample,
                        std::uint64_t seed) {
    const std::size_t n = sample.size();
    if (plan.m == 0 || plan.blocks.size() != plan.m)
        raise(ErrorCode::domain, "invalid block plan");

    rng::Engine eng(rng::derive(seed, kStreamResampleDraw));
    std::vector<std::uint32_t> indices;
    indices.reserve(n + plan.s);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        indices.clear();
        while (indices.size() < n) {
            const auto& block = plan.blocks[eng.below(plan.m)];
            indices.insert(indices.end(), block.begin(), block.end());
        }
        indices.resize(n);

        bool has_censored = false, has_event = false;
        for (auto idx : indices) {
            (sample.delta()[idx] ? has_event : has_censored) = true;
            if (has_censored && has_event) break;
        }
        if (!has_censored || !has_event) continue;  // conditional guarantee

        std::vector<double> z(n);
        std::vector<unsigned char> delta(n);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = sample.z()[indices[i]];
            delta[i] = sample.delta()[indices[i]];
        }
        return CensoredSample(std::move(z), std::move(delta));
    }
    raise(ErrorCode::degenerate_sample,
          "resampling failed to produce a sample with both censoring classes");
}

ReplicateSet bootstrap_replicates(const CensoredSample& sample,
                                  const std::vector<Estimator>& ids, int k, int replicates,
                                  int d, std::uint64_t seed) {
    if (replicates < 2)
        raise(ErrorCode::domain, "bootstrap requires at least 2 replicates");
    const BlockPlan plan = plan_blocks(sample, d, rng::derive(seed, kStreamCiPlan));

    ReplicateSet out;
    out.values.resize(ids.size());
    out.dropped.assign(ids.size(), 0);
    for (auto& v : out.values) v.reserve(static_cast<std::size_t>(replicates));

    for (int b = 0; b < replicates; ++b) {
        const CensoredSample rs = resample(plan, sample, rng::derive(seed, kStreamCiRep,
                                                                     static_cast<std::uint64_t>(b)));
        const TailView view = make_tail_view(rs, k);
        for (std::size_t e = 0; e < ids.size(); ++e) {
            try {
                const double value = evaluate(view, ids[e]).adapted;
                if (std::isfinite(value))
                    out.values[e].push_back(value);
                else
                    ++out.dropped[e];
            } catch (const Error&) {
                ++out.dropped[e];
            }
        }
    }
    return out;
}

namespace {

IntervalEstimate interval_from_replicates(std::vector<double> values, int dropped,
                                          int requested, double alpha) {
    if (dropped * 20 > requested)  // more than 5% of B
        raise(ErrorCode::unstable_bootstrap,
              std::to_string(dropped) + " of " + std::to_string(requested) +
                  " bootstrap replicates failed");
    std::sort(values.begin(), values.end());
    IntervalEstimate ci;
    ci.lower = interp_quantile(values, alpha / 2.0);
    ci.upper = interp_quantile(values, 1.0 - alpha / 2.0);
    ci.level = 1.0 - alpha;
    ci.replicates = static_cast<int>(values.size());
    ci.dropped = dropped;
    return ci;
}

void check_ci_args(int replicates, double alpha) {
    if (replicates < 2)
        raise(ErrorCode::domain, "bootstrap requires at least 2 replicates");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        raise(ErrorCode::domain, "alpha must lie in (0, 1)");
}

}  // namespace

IntervalEstimate bootstrap_ci(const CensoredSample& sample, Estimator estimator, int k,
                              int replicates, double alpha, int d, std::uint64_t seed) {
    check_ci_args(replicates, alpha);
    ReplicateSet reps = bootstrap_replicates(sample, {estimator}, k, replicates, d, seed);
    return interval_from_replicates(std::move(reps.values[0]), reps.dropped[0], replicates,
                                    alpha);
}

IntervalEstimate bootstrap_ci(const CensoredSample& sample, int k, int replicates,
                              double alpha, int d, std::uint64_t seed,
                              const std::function<double(const CensoredSample&, int)>& statistic) {
    check_ci_args(replicates, alpha);
    const BlockPlan plan = plan_blocks(sample, d, rng::derive(seed, kStreamCiPlan));

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(replicates));
    int dropped = 0;
    for (int b = 0; b < replicates; ++b) {
        const CensoredSample rs = resample(plan, sample, rng::derive(seed, kStreamCiRep,
                                                                     static_cast<std::uint64_t>(b)));
        try {
            const double value = statistic(rs, k);
            if (std::isfinite(value))
                values.push_back(value);
            else
                ++dropped;
        } catch (const Error&) {
            ++dropped;
        }
    }
    return interval_from_replicates(std::move(values), dropped, replicates, alpha);
}

}  // namespace censtail
