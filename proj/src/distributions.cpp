#include "censtail/distributions.hpp"

#include <cmath>

#include "censtail/rng.hpp"

namespace censtail {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        raise(ErrorCode::domain, std::string(name) + " must be a positive finite value");
}

}  // namespace

TailModel TailModel::burr(double eta, double tau, double lambda) {
    check_positive(eta, "eta");
    check_positive(tau, "tau");
    check_positive(lambda, "lambda");
    TailModel m;
    m.family = Family::burr;
    m.eta = eta;
    m.tau = tau;
    m.lambda = lambda;
    return m;
}

TailModel TailModel::pareto(double alpha) {
    check_positive(alpha, "alpha");
    TailModel m;
    m.family = Family::pareto;
    m.alpha = alpha;
    return m;
}

TailModel TailModel::frechet(double alpha) {
    check_positive(alpha, "alpha");
    TailModel m;
    m.family = Family::frechet;
    m.alpha = alpha;
    return m;
}

TailModel TailModel::from_gamma(Family family, double gamma1) {
    check_positive(gamma1, "gamma1");
    switch (family) {
        case Family::burr:
            // tau fixed at 2 (so gamma1 = 0.5 is the Burr(1,2,1) reference
            // model); the second-order rate is rho = -1/lambda = -2*gamma1,
            // which makes small gamma1 the slow-convergence regime
            return burr(1.0, 2.0, 1.0 / (2.0 * gamma1));
        case Family::pareto:
            return pareto(1.0 / gamma1);
        case Family::frechet:
            return frechet(1.0 / gamma1);
    }
    raise(ErrorCode::domain, "unknown family");
}

double TailModel::gamma() const {
    switch (family) {
        case Family::burr:
            return 1.0 / (tau * lambda);
        case Family::pareto:
        case Family::frechet:
            return 1.0 / alpha;
    }
    raise(ErrorCode::domain, "unknown family");
}

double quantile(const TailModel& model, double u) {
    if (!(u > 0.0) || !(u < 1.0))
        raise(ErrorCode::domain, "quantile argument must lie in (0, 1)");
    switch (model.family) {
        case Family::burr:
            // invert (eta / (eta + z^tau))^lambda = 1 - u
            return std::pow(model.eta * (std::pow(1.0 - u, -1.0 / model.lambda) - 1.0),
                            1.0 / model.tau);
        case Family::pareto:
            return std::pow(1.0 - u, -1.0 / model.alpha);
        case Family::frechet:
            return std::pow(-std::log(u), -1.0 / model.alpha);
    }
    raise(ErrorCode::domain, "unknown family");
}

std::vector<double> sample(const TailModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 1) raise(ErrorCode::domain, "sample size must be at least 1");
    rng::Engine eng(rng::derive(seed, rng::kStreamDraw));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = quantile(model, eng.unit_open());
    return out;
}

CensoringScheme CensoringScheme::for_model(const TailModel& event_model, double target_p) {
    if (!(target_p > 0.0) || !(target_p < 1.0))
        raise(ErrorCode::domain, "censoring proportion must lie in (0, 1)");
    const double gamma1 = event_model.gamma();
    const double gamma2 = gamma1 * (1.0 - target_p) / target_p;

    CensoringScheme scheme;
    scheme.target_p = target_p;
    switch (event_model.family) {
        case Family::burr:
            // same tau; lambda scaled so gamma() == gamma2
            scheme.censor_model =
                TailModel::burr(event_model.eta, event_model.tau, 1.0 / (event_model.tau * gamma2));
            break;
        case Family::pareto:
            scheme.censor_model = TailModel::pareto(1.0 / gamma2);
            break;
        case Family::frechet:
            scheme.censor_model = TailModel::frechet(1.0 / gamma2);
            break;
    }
    return scheme;
}

CensoredSample generate_censored(const TailModel& event_model, const CensoringScheme& scheme,
                                 std::size_t n, std::uint64_t seed) {
    if (event_model.family != scheme.censor_model.family)
        raise(ErrorCode::domain, "event and censoring models must share a family");
    if (n < 1) raise(ErrorCode::domain, "sample size must be at least 1");

    rng::Engine event_eng(rng::derive(seed, rng::kStreamEventDraw));
    rng::Engine censor_eng(rng::derive(seed, rng::kStreamCensorDraw));

    std::vector<double> z(n);
    std::vector<unsigned char> delta(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = quantile(event_model, event_eng.unit_open());
        const double c = quantile(scheme.censor_model, censor_eng.unit_open());
        z[i] = std::min(x, c);
        delta[i] = x <= c ? 1 : 0;
    }
    return CensoredSample(std::move(z), std::move(delta));
}

}  // namespace censtail
