#ifndef CENSTAIL_DISTRIBUTIONS_HPP
#define CENSTAIL_DISTRIBUTIONS_HPP

#include <cstdint>
#include <vector>

#include "censtail/types.hpp"

namespace censtail {

enum class Family { burr, pareto, frechet };

/// Heavy-tailed model with survival functions
///   Burr(eta, tau, lambda): (eta / (eta + z^tau))^lambda,  gamma = 1/(tau*lambda)
///   Pareto(alpha):          z^(-alpha), z > 1,             gamma = 1/alpha
///   Frechet(alpha):         1 - exp(-z^(-alpha)), z > 0,   gamma = 1/alpha
struct TailModel {
    Family family = Family::pareto;
    double eta = 0.0;
    double tau = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;

    static TailModel burr(double eta, double tau, double lambda);
    static TailModel pareto(double alpha);
    static TailModel frechet(double alpha);
    /// Model with EVI gamma1. Burr uses (eta=1, tau=1/gamma1, lambda=1),
    /// which fixes the second-order parameter at rho = -1.
    static TailModel from_gamma(Family family, double gamma1);

    double gamma() const;
};

/// Inverse of the model distribution function at u in (0, 1).
double quantile(const TailModel& model, double u);

/// Inverse-transform sampling; identical output for identical (model, n, seed).
std::vector<double> sample(const TailModel& model, std::size_t n, std::uint64_t seed);

/// Censoring law calibrated so the right-tail censoring proportion converges
/// to target_p: gamma2 = gamma1 * (1 - target_p) / target_p, realized in the
/// same family as the event model (Burr keeps tau and scales lambda).
struct CensoringScheme {
    double target_p = 0.0;
    TailModel censor_model;

    static CensoringScheme for_model(const TailModel& event_model, double target_p);
};

/// Draws x from `event_model` and c independently from the scheme's censor
/// model, returning (min(x, c), 1{x <= c}) pairs.
CensoredSample generate_censored(const TailModel& event_model, const CensoringScheme& scheme,
                                 std::size_t n, std::uint64_t seed);

}  // namespace censtail

#endif
