#ifndef CENSTAIL_ESTIMATORS_HPP
#define CENSTAIL_ESTIMATORS_HPP

#include <vector>

#include "censtail/types.hpp"

namespace censtail {

enum class SurvivalOf { event, censor };  // 1-F resp. 1-G

/// Kaplan-Meier product-limit estimate of a survival function under right
/// censoring, built from one sorted sample. For the event variable the
/// factor ((n-j)/(n-j+1)) enters with exponent delta_j, for the censoring
/// variable with exponent 1-delta_j. Supports point evaluation and the left
/// limit S(z-) = lim_{v up z} S(v); below the smallest jump both are 1.
class KaplanMeierCurve {
  public:
    KaplanMeierCurve(const std::vector<double>& z_sorted,
                     const std::vector<unsigned char>& delta_sorted, SurvivalOf which);

    double survival(double b) const;    // S(b), right-continuous
    double left_limit(double z) const;  // S(z-)

    const std::vector<double>& jump_points() const noexcept { return jumps_; }
    const std::vector<double>& jump_survival() const noexcept { return jump_survival_; }
    const std::vector<double>& jump_left_limits() const noexcept { return jump_left_; }

  private:
    std::vector<double> points_;   // all sorted observations
    std::vector<double> prefix_;   // prefix_[i] = product of first i factors
    std::vector<double> jumps_;    // unique observation values
    std::vector<double> jump_survival_;
    std::vector<double> jump_left_;
};

EviEstimate hill(const TailView& view);
EviEstimate generalized_hill(const TailView& view);   // requires k <= n-2
EviEstimate zipf(const TailView& view);               // requires k >= 2
EviEstimate mvrb(const TailView& view, double beta, double rho);  // rho < 0
EviEstimate moment(const TailView& view);             // requires k >= 2
EviEstimate moment_ratio(const TailView& view);
EviEstimate peng_moment(const TailView& view);

/// Hill estimator weighted by Kaplan-Meier survival estimates; natively
/// censoring-aware (adapted == raw).
EviEstimate ww_km(const TailView& view);

enum class LeurgansVariant {
    as_printed,            // weight j on log(Z_{n-j+1,n} / Z_{n-k,n})
    consecutive_spacings,  // weight j on log(Z_{n-j+1,n} / Z_{n-j,n})
};

EviEstimate ww_leurgans(const TailView& view,
                        LeurgansVariant variant = LeurgansVariant::as_printed);

/// Dispatch by estimator id. MVRB estimates its second-order pair from the
/// full sample when n >= 100 and falls back to beta = 0 (plain Hill) when
/// that estimation fails or the sample is too small.
EviEstimate evaluate(const TailView& view, Estimator id);

}  // namespace censtail

#endif
