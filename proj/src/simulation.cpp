#include "censtail/simulation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "censtail/bootstrap.hpp"
#include "censtail/core.hpp"
#include "censtail/estimators.hpp"
#include "censtail/rng.hpp"
#include "censtail/stats.hpp"

namespace censtail {

namespace {

struct RepOutcome {
    // per estimator: point estimate and interval, or failure
    std::vector<bool> ok;
    std::vector<double> estimate;
    std::vector<double> lower;
    std::vector<double> upper;
};

std::vector<Estimator> canonical_order(const std::vector<Estimator>& requested) {
    std::vector<Estimator> out;
    for (Estimator e : kAllEstimators) {
        for (Estimator r : requested) {
            if (r == e) {
                out.push_back(e);
                break;
            }
        }
    }
    return out;
}

void validate(const StudyConfig& config) {
    if (config.estimators.empty())
        raise(ErrorCode::domain, "study requires at least one estimator");
    if (config.repetitions < 1) raise(ErrorCode::domain, "study requires R >= 1");
    if (config.bootstrap_replicates < 2) raise(ErrorCode::domain, "study requires B >= 2");
    if (!(config.k_fraction > 0.0) || !(config.k_fraction < 1.0))
        raise(ErrorCode::domain, "k fraction must lie in (0, 1)");
    if (!(config.alpha > 0.0) || !(config.alpha < 1.0))
        raise(ErrorCode::domain, "alpha must lie in (0, 1)");
    if (config.d < 1) raise(ErrorCode::domain, "block quota d must be at least 1");
    std::vector<bool> seen(kAllEstimators.size(), false);
    for (Estimator e : config.estimators) {
        auto idx = static_cast<std::size_t>(e);
        if (idx >= seen.size()) raise(ErrorCode::domain, "unknown estimator id");
        if (seen[idx]) raise(ErrorCode::domain, "duplicate estimator in study config");
        seen[idx] = true;
    }
}

}  // namespace

StudyMetrics run_study(const StudyConfig& config) {
    validate(config);
    const auto ids = canonical_order(config.estimators);
    const int k = k_from_fraction(config.n, config.k_fraction);
    const double gamma1 = config.model.gamma();
    const CensoringScheme scheme = CensoringScheme::for_model(config.model, config.target_p);
    const int reps = config.repetitions;
    const int boot = config.bootstrap_replicates;

    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

    const auto run_repetition = [&](int r) {
        RepOutcome& out = outcomes[static_cast<std::size_t>(r)];
        out.ok.assign(ids.size(), false);
        out.estimate.assign(ids.size(), 0.0);
        out.lower.assign(ids.size(), 0.0);
        out.upper.assign(ids.size(), 0.0);

        const std::uint64_t sample_seed =
            rng::derive(config.seed, rng::kStreamStudySample, static_cast<std::uint64_t>(r));
        const std::uint64_t ci_seed =
            rng::derive(config.seed, rng::kStreamStudyCi, static_cast<std::uint64_t>(r));
        const CensoredSample sample = generate_censored(config.model, scheme, config.n, sample_seed);
        const TailView view = make_tail_view(sample, k);

        std::vector<bool> point_ok(ids.size(), false);
        for (std::size_t e = 0; e < ids.size(); ++e) {
            try {
                const double value = evaluate(view, ids[e]).adapted;
                if (std::isfinite(value)) {
                    out.estimate[e] = value;
                    point_ok[e] = true;
                }
            } catch (const Error&) {
            }
        }

        try {
            const ReplicateSet rs = bootstrap_replicates(sample, ids, k, boot, config.d, ci_seed);
            for (std::size_t e = 0; e < ids.size(); ++e) {
                if (!point_ok[e]) continue;
                if (rs.dropped[e] * 20 > boot) continue;  // unstable bootstrap
                std::vector<double> values = rs.values[e];
                std::sort(values.begin(), values.end());
                out.lower[e] = interp_quantile(values, config.alpha / 2.0);
                out.upper[e] = interp_quantile(values, 1.0 - config.alpha / 2.0);
                out.ok[e] = true;
            }
        } catch (const Error&) {
            // block plan failed (one censoring class empty); repetition counts
            // as a failure for every estimator
        }
    };

    int workers = config.workers > 0 ? config.workers
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers > reps) workers = reps;

    if (workers == 1) {
        for (int r = 0; r < reps; ++r) run_repetition(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const int r = next.fetch_add(1);
                    if (r >= reps) return;
                    run_repetition(r);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    StudyMetrics metrics;
    metrics.gamma1 = gamma1;
    metrics.k = k;
    metrics.repetitions = reps;
    for (std::size_t e = 0; e < ids.size(); ++e) {
        EstimatorMetrics row;
        row.id = ids[e];
        std::vector<double> estimates, abs_dev, lengths;
        int contained = 0;
        for (const auto& out : outcomes) {
            if (!out.ok[e]) continue;
            estimates.push_back(out.estimate[e]);
            abs_dev.push_back(std::abs(out.estimate[e] - gamma1));
            lengths.push_back(out.upper[e] - out.lower[e]);
            if (out.lower[e] <= gamma1 && gamma1 <= out.upper[e]) ++contained;
        }
        row.failures = reps - static_cast<int>(estimates.size());
        if (estimates.empty()) {
            row.failed = true;
            row.mad = row.med_bias = row.median_estimate = row.coverage = row.avg_length =
                std::nan("");
        } else {
            row.median_estimate = median(estimates);
            row.med_bias = row.median_estimate - gamma1;
            row.mad = median(abs_dev);
            row.coverage = static_cast<double>(contained) / static_cast<double>(estimates.size());
            row.avg_length = config.median_length ? median(lengths) : mean(lengths);
        }
        metrics.rows.push_back(row);
    }
    return metrics;
}

namespace {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string emit_table(const StudyMetrics& metrics, TableFormat format) {
    switch (format) {
        case TableFormat::csv: {
            std::string out = "estimator,mad,med_bias,cp,avg_length,failures\n";
            for (const auto& row : metrics.rows) {
                out += std::string(estimator_name(row.id)) + "," + format_full(row.mad) + "," +
                       format_full(row.med_bias) + "," + format_full(row.coverage) + "," +
                       format_full(row.avg_length) + "," + std::to_string(row.failures) + "\n";
            }
            return out;
        }
        case TableFormat::json: {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& row : metrics.rows) {
                nlohmann::json j;
                j["estimator"] = std::string(estimator_name(row.id));
                if (row.failed) {
                    j["mad"] = nullptr;
                    j["med_bias"] = nullptr;
                    j["cp"] = nullptr;
                    j["avg_length"] = nullptr;
                } else {
                    j["mad"] = row.mad;
                    j["med_bias"] = row.med_bias;
                    j["cp"] = row.coverage;
                    j["avg_length"] = row.avg_length;
                }
                j["failures"] = row.failures;
                rows.push_back(j);
            }
            nlohmann::json doc;
            doc["gamma1"] = metrics.gamma1;
            doc["k"] = metrics.k;
            doc["repetitions"] = metrics.repetitions;
            doc["rows"] = rows;
            return doc.dump(2) + "\n";
        }
        case TableFormat::text: {
            char buf[128];
            std::string out;
            std::snprintf(buf, sizeof buf, "%-10s %8s %8s %6s %7s %6s\n", "Estimator", "MAD",
                          "MedBias", "CP", "L", "fail");
            out += buf;
            for (const auto& row : metrics.rows) {
                if (row.failed) {
                    std::snprintf(buf, sizeof buf, "%-10s %8s %8s %6s %7s %6d\n",
                                  std::string(estimator_name(row.id)).c_str(), "-", "-", "-", "-",
                                  row.failures);
                } else {
                    std::snprintf(buf, sizeof buf, "%-10s %8s %8s %6s %7s %6d\n",
                                  std::string(estimator_name(row.id)).c_str(),
                                  format_fixed(row.mad).c_str(), format_fixed(row.med_bias).c_str(),
                                  format_fixed(row.coverage).c_str(),
                                  format_fixed(row.avg_length).c_str(), row.failures);
                }
                out += buf;
            }
            return out;
        }
    }
    raise(ErrorCode::domain, "unknown table format");
}

}  // namespace censtail
