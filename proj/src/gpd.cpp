#include "censtail/gpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "censtail/core.hpp"
#include "censtail/estimators.hpp"

namespace censtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGammaZeroBranch = 1e-8;

// log1p(x) / x, stable near zero.
double log1p_over(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x / 2.0 + x * x / 3.0 - x * x * x / 4.0;
    return std::log1p(x) / x;
}

// (log1p(x) - x/(1+x)) / x^2, stable near zero; the shared kernel of the
// gamma-derivative terms.
double q_kernel(double x) {
    if (std::abs(x) < 1e-4) {
        // series: 1/2 - (2/3) x + (3/4) x^2 - (4/5) x^3
        return 0.5 - (2.0 / 3.0) * x + 0.75 * x * x - 0.8 * x * x * x;
    }
    return (std::log1p(x) - x / (1.0 + x)) / (x * x);
}

bool feasible(const std::vector<double>& v, double gamma, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(gamma) || !std::isfinite(sigma)) return false;
    if (gamma >= 0.0) return true;
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, x);
    return 1.0 + gamma * vmax / sigma > 1e-12;
}

}  // namespace

double censored_gpd_loglik(const std::vector<double>& excesses,
                           const std::vector<unsigned char>& delta, double gamma,
                           double sigma) {
    if (!(sigma > 0.0)) return -kInf;
    double ll = 0.0;
    for (std::size_t j = 0; j < excesses.size(); ++j) {
        const double u = excesses[j] / sigma;
        const double x = gamma * u;
        if (x <= -1.0) return -kInf;
        // log density = -log(sigma) - (1/gamma + 1) log(1 + x)
        // log survival = -(1/gamma) log(1 + x); both via L/gamma = u*log1p(x)/x
        const double l_over_gamma = u * log1p_over(x);
        if (delta[j]) {
            ll += -std::log(sigma) - std::log1p(x) - l_over_gamma;
        } else {
            ll += -l_over_gamma;
        }
    }
    return ll;
}

void censored_gpd_derivatives(const std::vector<double>& excesses,
                              const std::vector<unsigned char>& delta, double gamma,
                              double sigma, double grad[2], double hess[4]) {
    double g_gamma = 0.0, g_sigma = 0.0;
    double h_gg = 0.0, h_gs = 0.0, h_ss = 0.0;
    for (std::size_t j = 0; j < excesses.size(); ++j) {
        const double v = excesses[j];
        const double u = v / sigma;
        const double x = gamma * u;
        const double t = 1.0 / (sigma + gamma * v);  // 1/(sigma (1+x))
        const double a = v * t;                      // u / (1+x)
        const double d = delta[j] ? 1.0 : 0.0;
        const double q = u * u * q_kernel(x);        // (L - gamma a) / gamma^2

        g_gamma += q - d * a;
        g_sigma += ((1.0 + gamma * d) * a - d) / sigma;

        // d^2/dgamma^2 = (a^2 - 2q)/gamma + d a^2; series form when x ~ 0:
        // u^3 (-2/3 + (3/2) x - (12/5) x^2)
        double hgg_term;
        if (std::abs(x) < 1e-4) {
            hgg_term = u * u * u * (-2.0 / 3.0 + 1.5 * x - 2.4 * x * x) + d * a * a;
        } else {
            hgg_term = (a * a - 2.0 * q) / gamma + d * a * a;
        }
        h_gg += hgg_term;
        h_gs += -a * a / sigma + d * a * t;
        h_ss += d / (sigma * sigma) - (1.0 + gamma * d) * (a * t / sigma + a / (sigma * sigma));
    }
    grad[0] = g_gamma;
    grad[1] = g_sigma;
    hess[0] = h_gg;
    hess[1] = h_gs;
    hess[2] = h_gs;
    hess[3] = h_ss;
}

namespace {

// All-noncensored flags for reusing the censored formulas in the plain MLE.
std::vector<unsigned char> all_events(std::size_t n) {
    return std::vector<unsigned char>(n, 1);
}

struct Point {
    double gamma, log_sigma;
};

}  // namespace

GpdFit fit_gpd_mle(const std::vector<double>& excesses) {
    if (excesses.size() < 2)
        raise(ErrorCode::domain, "GPD fit requires at least 2 excesses");
    for (double v : excesses)
        if (!(v > 0.0) || !std::isfinite(v))
            raise(ErrorCode::domain, "GPD excesses must be positive finite values");

    const auto delta = all_events(excesses.size());
    const double m = static_cast<double>(excesses.size());

    double mean = 0.0, vmax = 0.0;
    for (double v : excesses) {
        mean += v;
        vmax = std::max(vmax, v);
    }
    mean /= m;
    double var = 0.0;
    for (double v : excesses) var += (v - mean) * (v - mean);
    var /= m;

    GpdFit fit;
    if (!(var > 1e-30 * mean * mean)) {
        fit.gamma = 0.0;
        fit.sigma = mean;
        fit.loglik = censored_gpd_loglik(excesses, delta, 0.0, mean);
        fit.converged = false;  // degenerate: all excesses equal
        return fit;
    }

    // Moment-matching start: mean^2/var = 1 - 2 gamma when gamma < 1/2.
    double gamma = 0.5 * (1.0 - mean * mean / var);
    double sigma = mean * (gamma < 1.0 ? 1.0 - gamma : 1.0);
    if (std::abs(gamma) < kGammaZeroBranch) gamma = std::copysign(kGammaZeroBranch, 1.0);
    if (!feasible(excesses, gamma, sigma)) {
        gamma = 0.1;
        sigma = mean;
    }

    const auto value = [&](const Point& p) {
        return censored_gpd_loglik(excesses, delta, p.gamma, std::exp(p.log_sigma));
    };
    const auto gradient = [&](const Point& p, double g[2]) {
        double grad[2], hess[4];
        const double s = std::exp(p.log_sigma);
        censored_gpd_derivatives(excesses, delta, p.gamma, s, grad, hess);
        g[0] = grad[0];
        g[1] = grad[1] * s;  // d/d log sigma
    };

    Point p{gamma, std::log(sigma)};
    double ll = value(p);
    double g[2];
    gradient(p, g);

    // BFGS (inverse-Hessian form) maximizing the log-likelihood.
    double B[4] = {1.0, 0.0, 0.0, 1.0};
    const int max_iter = 500;
    int iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        const double dir[2] = {B[0] * g[0] + B[1] * g[1], B[2] * g[0] + B[3] * g[1]};
        double slope = dir[0] * g[0] + dir[1] * g[1];
        double d0 = dir[0], d1 = dir[1];
        if (!(slope > 0.0)) {  // reset to steepest ascent
            d0 = g[0];
            d1 = g[1];
            slope = g[0] * g[0] + g[1] * g[1];
            B[0] = B[3] = 1.0;
            B[1] = B[2] = 0.0;
        }

        double step = 1.0;
        Point next{};
        double ll_next = -kInf;
        bool ok = false;
        for (int bt = 0; bt < 60; ++bt) {
            next = {p.gamma + step * d0, p.log_sigma + step * d1};
            if (std::abs(next.log_sigma) < 700.0 &&
                feasible(excesses, next.gamma, std::exp(next.log_sigma))) {
                ll_next = value(next);
                if (ll_next >= ll + 1e-4 * step * slope) {
                    ok = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!ok) break;

        double g_next[2];
        gradient(next, g_next);
        const double s0 = next.gamma - p.gamma;
        const double s1 = next.log_sigma - p.log_sigma;
        const double y0 = g[0] - g_next[0];  // negated for ascent
        const double y1 = g[1] - g_next[1];
        const double sy = s0 * y0 + s1 * y1;
        if (sy > 1e-12) {
            const double by0 = B[0] * y0 + B[1] * y1;
            const double by1 = B[2] * y0 + B[3] * y1;
            const double yby = y0 * by0 + y1 * by1;
            const double c1 = (sy + yby) / (sy * sy);
            B[0] += c1 * s0 * s0 - (by0 * s0 + s0 * by0) / sy;
            B[1] += c1 * s0 * s1 - (by0 * s1 + s0 * by1) / sy;
            B[2] = B[1];
            B[3] += c1 * s1 * s1 - (by1 * s1 + s1 * by1) / sy;
        }

        const bool small_change = std::abs(ll_next - ll) < 1e-9;
        p = next;
        ll = ll_next;
        g[0] = g_next[0];
        g[1] = g_next[1];
        if (small_change && std::max(std::abs(g[0]), std::abs(g[1])) < 1e-5) {
            converged = true;
            break;
        }
    }

    double cur_gamma = p.gamma;
    double cur_sigma = std::exp(p.log_sigma);

    if (std::abs(cur_gamma) < kGammaZeroBranch) {
        // exponential branch: closed-form MLE
        fit.gamma = 0.0;
        fit.sigma = mean;
        fit.loglik = censored_gpd_loglik(excesses, delta, 0.0, mean);
        fit.converged = converged;
        fit.iterations = iter;
        return fit;
    }

    // Newton polish in (gamma, sigma) down to a stationary point.
    for (int polish = 0; polish < 40; ++polish) {
        double grad[2], hess[4];
        censored_gpd_derivatives(excesses, delta, cur_gamma, cur_sigma, grad, hess);
        if (std::max(std::abs(grad[0]), std::abs(grad[1])) < 1e-10) break;
        const double det = hess[0] * hess[3] - hess[1] * hess[2];
        if (std::abs(det) < 1e-30) break;
        double step_g = (hess[3] * grad[0] - hess[1] * grad[1]) / det;
        double step_s = (-hess[2] * grad[0] + hess[0] * grad[1]) / det;
        double scale = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            const double ng = cur_gamma - scale * step_g;
            const double ns = cur_sigma - scale * step_s;
            if (feasible(excesses, ng, ns) && std::abs(ng) >= kGammaZeroBranch) {
                const double nll = censored_gpd_loglik(excesses, delta, ng, ns);
                if (nll >= ll - 1e-12) {
                    cur_gamma = ng;
                    cur_sigma = ns;
                    ll = nll;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!accepted) break;
    }

    {
        double grad[2], hess[4];
        censored_gpd_derivatives(excesses, delta, cur_gamma, cur_sigma, grad, hess);
        if (std::max(std::abs(grad[0]), std::abs(grad[1])) < 1e-7) converged = true;
    }

    fit.gamma = cur_gamma;
    fit.sigma = cur_sigma;
    fit.loglik = ll;
    fit.converged = converged;
    fit.iterations = iter;
    return fit;
}

namespace {

struct Excesses {
    std::vector<double> v;
    std::vector<unsigned char> delta;
};

// Excesses over Z_{n-k,n} with their censoring flags; ties with the
// threshold contribute zero excess and are dropped.
Excesses top_excesses(const TailView& view) {
    Excesses ex;
    const double threshold = view.threshold();
    for (int j = 1; j <= view.k(); ++j) {
        const double v = view.top(j) - threshold;
        if (v > 0.0) {
            ex.v.push_back(v);
            ex.delta.push_back(view.top_delta(j));
        }
    }
    return ex;
}

}  // namespace

EviEstimate pot(const TailView& view) {
    const auto ex = top_excesses(view);
    if (ex.v.size() < 2)
        raise(ErrorCode::domain, "POT requires at least 2 positive excesses");
    const GpdFit fit = fit_gpd_mle(ex.v);
    EviEstimate est = make_estimate(Estimator::pot, view.k(), fit.gamma,
                                    adapt_to_censoring(fit.gamma, view));
    est.sigma = fit.sigma;
    est.converged = fit.converged;
    return est;
}

EviEstimate pot_one_step(const TailView& view) {
    if (view.k() < 2) raise(ErrorCode::domain, "one-step POT requires k >= 2");
    const auto ex = top_excesses(view);
    if (ex.v.size() < 2)
        raise(ErrorCode::domain, "one-step POT requires at least 2 positive excesses");

    // Initial point: adapted moment estimate, sigma by GPD mean matching.
    const double gamma0_raw = moment(view).adapted;
    double gamma0 = gamma0_raw;
    if (!std::isfinite(gamma0))
        raise(ErrorCode::one_step_failed, "initial moment estimate is not finite");
    if (std::abs(gamma0) < kGammaZeroBranch)
        gamma0 = std::copysign(kGammaZeroBranch, gamma0 == 0.0 ? 1.0 : gamma0);

    double mean = 0.0;
    for (double v : ex.v) mean += v;
    mean /= static_cast<double>(ex.v.size());
    const double sigma0 = gamma0 < 1.0 ? (1.0 - gamma0) * mean : mean;

    if (!feasible(ex.v, gamma0, sigma0))
        raise(ErrorCode::one_step_failed,
              "initial point (gamma = " + std::to_string(gamma0_raw) +
                  ") is outside the likelihood support");

    double grad[2], hess[4];
    censored_gpd_derivatives(ex.v, ex.delta, gamma0, sigma0, grad, hess);

    const double scale = std::max({std::abs(hess[0]), std::abs(hess[1]), std::abs(hess[3])});
    const double det = hess[0] * hess[3] - hess[1] * hess[2];
    if (!(std::abs(det) > 1e-12 * scale * scale) || !std::isfinite(det))
        raise(ErrorCode::one_step_failed,
              "singular Hessian at the initial estimate gamma = " +
                  std::to_string(gamma0_raw));

    const double step_g = (hess[3] * grad[0] - hess[1] * grad[1]) / det;
    const double step_s = (-hess[2] * grad[0] + hess[0] * grad[1]) / det;

    const double gamma1 = gamma0 - step_g;
    EviEstimate est = make_estimate(Estimator::pot_l, view.k(), gamma1, gamma1);
    est.sigma = sigma0 - step_s;
    return est;
}

}  // namespace censtail
