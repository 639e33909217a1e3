#ifndef CENSTAIL_GPD_HPP
#define CENSTAIL_GPD_HPP

#include <vector>

#include "censtail/types.hpp"

namespace censtail {

struct GpdFit {
    double gamma = 0.0;
    double sigma = 1.0;
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Generalized Pareto log-likelihood adapted to censoring: density term for
/// noncensored excesses, survival term for censored ones. With all flags set
/// this is the ordinary GPD log-likelihood. Requires sigma > 0 and
/// 1 + gamma*v/sigma > 0 for every excess.
double censored_gpd_loglik(const std::vector<double>& excesses,
                           const std::vector<unsigned char>& delta, double gamma,
                           double sigma);

/// Analytic gradient and Hessian of censored_gpd_loglik in (gamma, sigma).
/// grad is length 2, hess length 4 row-major.
void censored_gpd_derivatives(const std::vector<double>& excesses,
                              const std::vector<unsigned char>& delta, double gamma,
                              double sigma, double grad[2], double hess[4]);

/// Maximum likelihood fit of the (uncensored) GPD to positive excesses.
/// Quasi-Newton ascent with backtracking in (gamma, log sigma), then a Newton
/// polish; tolerance 1e-9 on the log-likelihood change, at most 500
/// iterations. |gamma| < 1e-8 is resolved through the exponential branch.
/// Non-convergence is reported through the flag, not an exception.
GpdFit fit_gpd_mle(const std::vector<double>& excesses);

/// POT estimate: GPD MLE on the k excesses over Z_{n-k,n} (zero excesses
/// from ties with the threshold are dropped), adapted by division with p_hat.
EviEstimate pot(const TailView& view);

/// One-step Newton update of the censored POT likelihood, started at the
/// adapted moment estimate with a mean-matched sigma. Natively adapted.
EviEstimate pot_one_step(const TailView& view);

}  // namespace censtail

#endif
