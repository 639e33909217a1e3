#ifndef CENSTAIL_REGRESSION_HPP
#define CENSTAIL_REGRESSION_HPP

#include <vector>

#include "censtail/types.hpp"

namespace censtail {

/// Scaled log-spacings R_j = j (log Z_{n-j+1,n} - log Z_{n-j,n}), j = 1..k.
std::vector<double> log_spacings(const TailView& view);

struct ErmFit {
    double gamma = 0.0;
    double b = 0.0;
    double rho = -1.0;
    double loglik = 0.0;
    bool converged = false;
    double grid_rho_used = -1.0;
};

enum class ErmRho {
    plugin,   // three-moment rho estimate at k1 = floor(n^0.995), clamped
              // into [-4, -0.05]; falls back to -1 when it cannot be formed
    fixed,    // use ErmOptions::fixed_rho
    profile,  // maximize over the grid {-4.00, -3.95, ..., -0.05}
};

struct ErmOptions {
    bool constrain_b_zero = false;
    ErmRho rho_source = ErmRho::plugin;
    double fixed_rho = -1.0;
};

/// Maximum likelihood fit of the exponential-regression model
/// R_j ~ (gamma + b (j/(k+1))^(-rho)) E_j: an inner (gamma, b) optimization
/// at a data-driven rho (see ErmRho). Ties in log-likelihood are broken
/// toward b closer to 0. When the inner optimization fails the fit falls
/// back to b = 0 (the Hill estimator) with converged = false. Requires
/// k >= 3.
ErmFit fit_erm(const TailView& view, const ErmOptions& options = {});

/// ERM estimate of the EVI: fitted gamma adapted by division with p_hat.
EviEstimate erm(const TailView& view);

struct SecondOrderPair {
    double beta = 0.0;
    double rho = -1.0;
    int k1 = 0;
};

/// Second-order parameters feeding the MVRB estimator, computed at the high
/// level k1 = floor(n^0.995). rho comes from the three-moment ratio statistic
///   T = (log M1 - (1/2) log(M2/2)) / ((1/2) log(M2/2) - (1/3) log(M3/6)),
///   rho = -|3(T-1)/(T-3)|,
/// and beta from the scaled-spacings regression at k1 given rho: with
/// U_i = i (log Z_{n-i+1,n} - log Z_{n-i,n}) and x_i = (i/k1)^(-rho),
///   beta = (k1/n)^rho *
///          (mean(x) mean(U) - mean(xU)) / (mean(x) mean(xU) - mean(x^2 U)).
/// Requires n >= 100.
SecondOrderPair estimate_second_order(const CensoredSample& sample);

}  // namespace censtail

#endif
