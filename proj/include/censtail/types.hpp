#ifndef CENSTAIL_TYPES_HPP
#define CENSTAIL_TYPES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace censtail {

enum class ErrorCode {
    domain,
    fully_censored,
    km_degenerate,
    one_step_failed,
    second_order_failed,
    degenerate_sample,
    unstable_bootstrap,
    io,
};

/// All library failures are reported as Error; code() classifies them for
/// callers that dispatch (the C boundary maps codes to ct_status values).
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

/// Right-censored observations: z[i] = min(x, c) with delta[i] = 1 when the
/// event was observed (x <= c) and 0 when censored. Immutable after
/// construction; the constructor validates z > 0 finite and delta in {0,1}.
class CensoredSample {
  public:
    CensoredSample(std::vector<double> z, std::vector<unsigned char> delta);

    std::size_t size() const noexcept { return z_.size(); }
    const std::vector<double>& z() const noexcept { return z_; }
    const std::vector<unsigned char>& delta() const noexcept { return delta_; }

  private:
    std::vector<double> z_;
    std::vector<unsigned char> delta_;
};

/// Estimator identifiers, in the row order used by result tables.
enum class Estimator {
    hill,
    mvrb,
    zipf,
    uh,
    ww_km,
    ww_l,
    mom,
    mom_r,
    p_mom,
    pot,
    pot_l,
    erm,
};

inline constexpr std::array<Estimator, 12> kAllEstimators = {
    Estimator::hill, Estimator::mvrb,  Estimator::zipf, Estimator::uh,
    Estimator::ww_km, Estimator::ww_l, Estimator::mom,  Estimator::mom_r,
    Estimator::p_mom, Estimator::pot,  Estimator::pot_l, Estimator::erm,
};

/// Display name as used in result tables ("Hill", "WW.KM", ...).
std::string_view estimator_name(Estimator e);
/// Lower-case identifier accepted on the command line ("hill", "wwkm", ...).
std::string_view estimator_cli_name(Estimator e);
std::optional<Estimator> estimator_from_cli_name(std::string_view name);

/// Sorted order statistics of one sample together with the censoring flags
/// that travel with each observation, a threshold index k and the proportion
/// of noncensored observations among the k largest.
class TailView {
  public:
    TailView(std::vector<double> z_sorted, std::vector<unsigned char> delta_sorted,
             int k, double p_hat)
        : z_sorted_(std::move(z_sorted)), delta_sorted_(std::move(delta_sorted)),
          k_(k), p_hat_(p_hat) {}

    int n() const noexcept { return static_cast<int>(z_sorted_.size()); }
    int k() const noexcept { return k_; }
    double p_hat() const noexcept { return p_hat_; }

    const std::vector<double>& z_sorted() const noexcept { return z_sorted_; }
    const std::vector<unsigned char>& delta_sorted() const noexcept { return delta_sorted_; }

    /// Z_{n-j+1,n}, j = 1 is the sample maximum.
    double top(int j) const { return z_sorted_[static_cast<std::size_t>(n() - j)]; }
    unsigned char top_delta(int j) const {
        return delta_sorted_[static_cast<std::size_t>(n() - j)];
    }
    /// Z_{n-k,n}, the threshold order statistic.
    double threshold() const { return z_sorted_[static_cast<std::size_t>(n() - k_ - 1)]; }

  private:
    std::vector<double> z_sorted_;
    std::vector<unsigned char> delta_sorted_;
    int k_;
    double p_hat_;
};

/// One point estimate of the extreme value index. `raw` estimates the EVI of
/// the observed Z sample; `adapted` estimates gamma_1 of the underlying X.
/// Estimators that are natively censoring-aware store adapted == raw.
struct EviEstimate {
    Estimator id = Estimator::hill;
    int k = 0;
    double raw = 0.0;
    double adapted = 0.0;
    std::optional<double> sigma;
    std::optional<double> b;
    std::optional<double> rho;
    std::optional<double> beta;
    bool converged = true;
};

inline EviEstimate make_estimate(Estimator id, int k, double raw, double adapted) {
    EviEstimate e;
    e.id = id;
    e.k = k;
    e.raw = raw;
    e.adapted = adapted;
    return e;
}

}  // namespace censtail

#endif
