#include "censtail/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "censtail/core.hpp"
#include "censtail/gpd.hpp"
#include "censtail/regression.hpp"

namespace censtail {

namespace {

// mean of (log Z_{n-j+1,n} - log Z_{n-k,n})^power over j = 1..k
double excess_log_moment(const TailView& view, int power) {
    const double log_threshold = std::log(view.threshold());
    double sum = 0.0;
    for (int j = 1; j <= view.k(); ++j) {
        const double e = std::log(view.top(j)) - log_threshold;
        double term = e;
        for (int p = 1; p < power; ++p) term *= e;
        sum += term;
    }
    return sum / view.k();
}

}  // namespace

EviEstimate hill(const TailView& view) {
    const double raw = excess_log_moment(view, 1);
    return make_estimate(Estimator::hill, view.k(), raw, adapt_to_censoring(raw, view));
}

EviEstimate generalized_hill(const TailView& view) {
    const int k = view.k();
    if (k > view.n() - 2)
        raise(ErrorCode::domain, "generalized Hill requires k <= n-2 (UH at level k+1 "
                                 "needs the order statistic below the threshold)");

    // UH_{Z,j,n} = Z_{n-j,n} * H_{Z,j,n} with H the Hill statistic at level j.
    double cum_log = 0.0;
    double sum_log_uh = 0.0;
    double log_uh_kp1 = 0.0;
    for (int j = 1; j <= k + 1; ++j) {
        cum_log += std::log(view.top(j));
        const double h_j = cum_log / j - std::log(view.top(j + 1));
        const double uh_j = view.top(j + 1) * h_j;
        if (!(uh_j > 0.0))
            raise(ErrorCode::domain,
                  "nonpositive UH statistic at level " + std::to_string(j));
        if (j <= k)
            sum_log_uh += std::log(uh_j);
        else
            log_uh_kp1 = std::log(uh_j);
    }
    const double raw = sum_log_uh / k - log_uh_kp1;
    return make_estimate(Estimator::uh, k, raw, adapt_to_censoring(raw, view));
}

EviEstimate zipf(const TailView& view) {
    const int k = view.k();
    if (k < 2) raise(ErrorCode::domain, "Zipf estimator requires k >= 2");

    double w_mean = 0.0;
    for (int j = 1; j <= k; ++j) w_mean += std::log((k + 1.0) / (j + 1.0));
    w_mean /= k;

    double num = 0.0;
    double w_sq = 0.0;
    for (int j = 1; j <= k; ++j) {
        const double w = std::log((k + 1.0) / (j + 1.0));
        num += (w - w_mean) * std::log(view.top(j));
        w_sq += w * w;
    }
    num /= k;
    const double den = w_sq / k - w_mean * w_mean;
    if (!(den > 0.0)) raise(ErrorCode::domain, "degenerate Zipf weight variance");

    const double raw = num / den;
    return make_estimate(Estimator::zipf, k, raw, adapt_to_censoring(raw, view));
}

EviEstimate mvrb(const TailView& view, double beta, double rho) {
    if (!(rho < 0.0)) raise(ErrorCode::domain, "second-order rho must be negative");
    const double hill_raw = excess_log_moment(view, 1);
    const double ratio = static_cast<double>(view.k()) / view.n();
    const double raw = hill_raw * (1.0 - beta / (1.0 - rho) * std::pow(ratio, -rho));
    EviEstimate est = make_estimate(Estimator::mvrb, view.k(), raw, adapt_to_censoring(raw, view));
    est.beta = beta;
    est.rho = rho;
    return est;
}

namespace {

struct MomentPair {
    double m1, m2, denom;  // denom = 1 - m1^2 / m2
};

MomentPair moment_terms(const TailView& view) {
    if (view.k() < 2) raise(ErrorCode::domain, "moment estimators require k >= 2");
    const double m1 = excess_log_moment(view, 1);
    const double m2 = excess_log_moment(view, 2);
    if (!(m2 > 0.0))
        raise(ErrorCode::domain, "degenerate spacings: top-k observations are all equal");
    const double denom = 1.0 - m1 * m1 / m2;
    if (std::abs(denom) < 1e-15)
        raise(ErrorCode::domain, "degenerate spacings: moment denominator vanishes");
    return {m1, m2, denom};
}

}  // namespace

EviEstimate moment(const TailView& view) {
    const auto t = moment_terms(view);
    const double raw = t.m1 + 1.0 - 0.5 / t.denom;
    return make_estimate(Estimator::mom, view.k(), raw, adapt_to_censoring(raw, view));
}

EviEstimate moment_ratio(const TailView& view) {
    const auto t = moment_terms(view);
    const double raw = 0.5 * t.m2 / t.m1;
    return make_estimate(Estimator::mom_r, view.k(), raw, adapt_to_censoring(raw, view));
}

EviEstimate peng_moment(const TailView& view) {
    const auto t = moment_terms(view);
    const double raw = 0.5 * t.m2 / t.m1 + 1.0 - 0.5 / t.denom;
    return make_estimate(Estimator::p_mom, view.k(), raw, adapt_to_censoring(raw, view));
}

KaplanMeierCurve::KaplanMeierCurve(const std::vector<double>& z_sorted,
                                   const std::vector<unsigned char>& delta_sorted,
                                   SurvivalOf which) {
    const std::size_t n = z_sorted.size();
    points_ = z_sorted;
    prefix_.resize(n + 1);
    prefix_[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const bool jumps = which == SurvivalOf::event ? delta_sorted[j - 1] != 0
                                                      : delta_sorted[j - 1] == 0;
        const double factor =
            jumps ? static_cast<double>(n - j) / static_cast<double>(n - j + 1) : 1.0;
        prefix_[j] = prefix_[j - 1] * factor;
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (j + 1 < n && z_sorted[j + 1] == z_sorted[j]) continue;  // last of a tie run
        jumps_.push_back(z_sorted[j]);
        jump_survival_.push_back(prefix_[j + 1]);
        jump_left_.push_back(left_limit(z_sorted[j]));
    }
}

double KaplanMeierCurve::survival(double b) const {
    const auto it = std::upper_bound(points_.begin(), points_.end(), b);
    return prefix_[static_cast<std::size_t>(it - points_.begin())];
}

double KaplanMeierCurve::left_limit(double z) const {
    const auto it = std::lower_bound(points_.begin(), points_.end(), z);
    return prefix_[static_cast<std::size_t>(it - points_.begin())];
}

namespace {

// Common frame of the Worms-Worms estimators: 1 / (n * (1-F_hat(Z_{n-k,n})))
// and the Kaplan-Meier weights delta / (1-G_hat(z-)) for the top k terms.
double ww_weighted_sum(const TailView& view, const std::vector<double>& log_terms) {
    const KaplanMeierCurve surv_f(view.z_sorted(), view.delta_sorted(), SurvivalOf::event);
    const KaplanMeierCurve surv_g(view.z_sorted(), view.delta_sorted(), SurvivalOf::censor);

    const double sf = surv_f.survival(view.threshold());
    if (!(sf > 0.0))
        raise(ErrorCode::km_degenerate,
              "Kaplan-Meier survival of F vanishes at the threshold Z_{n-k,n}");

    double sum = 0.0;
    for (int j = 1; j <= view.k(); ++j) {
        if (view.top_delta(j) == 0) continue;
        const double sg = surv_g.left_limit(view.top(j));
        if (!(sg > 0.0))
            raise(ErrorCode::km_degenerate,
                  "Kaplan-Meier survival of G vanishes just below the " + std::to_string(j) +
                      "-th largest observation (z = " + std::to_string(view.top(j)) + ")");
        sum += log_terms[static_cast<std::size_t>(j - 1)] / sg;
    }
    return sum / (view.n() * sf);
}

}  // namespace

EviEstimate ww_km(const TailView& view) {
    const double log_threshold = std::log(view.threshold());
    std::vector<double> terms(static_cast<std::size_t>(view.k()));
    for (int j = 1; j <= view.k(); ++j)
        terms[static_cast<std::size_t>(j - 1)] = std::log(view.top(j)) - log_threshold;
    const double value = ww_weighted_sum(view, terms);
    return make_estimate(Estimator::ww_km, view.k(), value, value);
}

EviEstimate ww_leurgans(const TailView& view, LeurgansVariant variant) {
    const double log_threshold = std::log(view.threshold());
    std::vector<double> terms(static_cast<std::size_t>(view.k()));
    for (int j = 1; j <= view.k(); ++j) {
        const double base = variant == LeurgansVariant::as_printed
                                ? std::log(view.top(j)) - log_threshold
                                : std::log(view.top(j)) - std::log(view.top(j + 1));
        terms[static_cast<std::size_t>(j - 1)] = j * base;
    }
    const double value = ww_weighted_sum(view, terms);
    return make_estimate(Estimator::ww_l, view.k(), value, value);
}

EviEstimate evaluate(const TailView& view, Estimator id) {
    switch (id) {
        case Estimator::hill:
            return hill(view);
        case Estimator::zipf:
            return zipf(view);
        case Estimator::uh:
            return generalized_hill(view);
        case Estimator::mom:
            return moment(view);
        case Estimator::mom_r:
            return moment_ratio(view);
        case Estimator::p_mom:
            return peng_moment(view);
        case Estimator::ww_km:
            return ww_km(view);
        case Estimator::ww_l:
            return ww_leurgans(view);
        case Estimator::pot:
            return pot(view);
        case Estimator::pot_l:
            return pot_one_step(view);
        case Estimator::erm:
            return erm(view);
        case Estimator::mvrb: {
            double beta = 0.0;
            double rho = -1.0;
            if (view.n() >= 100) {
                try {
                    CensoredSample sorted(view.z_sorted(), view.delta_sorted());
                    const auto so = estimate_second_order(sorted);
                    beta = so.beta;
                    rho = so.rho;
                } catch (const Error&) {
                    beta = 0.0;  // fall back to the plain Hill estimator
                    rho = -1.0;
                }
            }
            return mvrb(view, beta, rho);
        }
    }
    raise(ErrorCode::domain, "unknown estimator");
}

}  // namespace censtail
