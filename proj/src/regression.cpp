#include "censtail/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "censtail/core.hpp"

namespace censtail {

std::vector<double> log_spacings(const TailView& view) {
    std::vector<double> r(static_cast<std::size_t>(view.k()));
    for (int j = 1; j <= view.k(); ++j)
        r[static_cast<std::size_t>(j - 1)] =
            j * (std::log(view.top(j)) - std::log(view.top(j + 1)));
    return r;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log-likelihood of R_j ~ Exp(mean m_j), m_j = gamma + b x_j
double erm_loglik(const std::vector<double>& r, const std::vector<double>& x, double gamma,
                  double b) {
    double ll = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double m = gamma + b * x[j];
        if (!(m > 0.0)) return -kInf;
        ll += -std::log(m) - r[j] / m;
    }
    return ll;
}

bool erm_feasible(const std::vector<double>& x, double gamma, double b) {
    // m is linear in x, so positivity at both extremes covers all j
    return gamma + b * x.front() > 0.0 && gamma + b * x.back() > 0.0;
}

struct InnerFit {
    double gamma = 0.0;
    double b = 0.0;
    double loglik = -kInf;
    bool converged = false;
    bool ok = false;
};

// Fixed-rho inner optimization: damped reweighted least squares (weights
// 1/m_j^2, kept monotone in the likelihood) followed by one guarded Newton
// polish on the exact likelihood.
InnerFit fit_fixed_rho(const std::vector<double>& r, const std::vector<double>& x,
                       double gamma_start) {
    InnerFit fit;
    double gamma = gamma_start;
    double b = 0.0;
    double ll = erm_loglik(r, x, gamma, b);
    if (!std::isfinite(ll)) return fit;

    const int max_iter = 500;
    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        double sw = 0.0, swx = 0.0, swxx = 0.0, swr = 0.0, swxr = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double m = gamma + b * x[j];
            const double w = 1.0 / (m * m);
            sw += w;
            swx += w * x[j];
            swxx += w * x[j] * x[j];
            swr += w * r[j];
            swxr += w * x[j] * r[j];
        }
        const double det = sw * swxx - swx * swx;
        if (!(std::abs(det) > 1e-30) || !std::isfinite(det)) break;
        const double gamma_new = (swxx * swr - swx * swxr) / det;
        const double b_new = (sw * swxr - swx * swr) / det;

        // step toward the reweighted solution, halving until it improves
        double t = 1.0;
        double cg = gamma_new, cb = b_new, cll = -kInf;
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            cg = gamma + t * (gamma_new - gamma);
            cb = b + t * (b_new - b);
            if (erm_feasible(x, cg, cb)) {
                cll = erm_loglik(r, x, cg, cb);
                if (cll >= ll) {
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) break;
        const double delta = cll - ll;
        gamma = cg;
        b = cb;
        ll = cll;
        if (delta < 1e-9) {
            converged = true;
            break;
        }
    }

    // Newton polish on (gamma, b)
    {
        double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double m = gamma + b * x[j];
            const double resid = (r[j] - m) / (m * m);
            g0 += resid;
            g1 += resid * x[j];
            const double curv = (m - 2.0 * r[j]) / (m * m * m);
            h00 += curv;
            h01 += curv * x[j];
            h11 += curv * x[j] * x[j];
        }
        const double det = h00 * h11 - h01 * h01;
        if (std::abs(det) > 1e-30 && std::isfinite(det)) {
            const double step_g = (h11 * g0 - h01 * g1) / det;
            const double step_b = (-h01 * g0 + h00 * g1) / det;
            double t = 1.0;
            for (int half = 0; half < 40; ++half) {
                const double cg = gamma - t * step_g;
                const double cb = b - t * step_b;
                if (erm_feasible(x, cg, cb)) {
                    const double cll = erm_loglik(r, x, cg, cb);
                    if (cll >= ll) {
                        gamma = cg;
                        b = cb;
                        ll = cll;
                        break;
                    }
                }
                t *= 0.5;
            }
        }
    }

    fit.gamma = gamma;
    fit.b = b;
    fit.loglik = ll;
    fit.converged = converged;
    fit.ok = true;
    return fit;
}

// three-moment ratio estimate of the second-order rho at level k1, shared by
// the ERM plug-in and estimate_second_order
double rho_three_moment(const TailView& view_k1) {
    const int k1 = view_k1.k();
    const double log_threshold = std::log(view_k1.threshold());
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (int j = 1; j <= k1; ++j) {
        const double e = std::log(view_k1.top(j)) - log_threshold;
        m1 += e;
        m2 += e * e;
        m3 += e * e * e;
    }
    m1 /= k1;
    m2 /= k1;
    m3 /= k1;
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(m3 > 0.0))
        raise(ErrorCode::second_order_failed, "nonpositive tail moments at level k1");

    const double a1 = std::log(m1);
    const double a2 = 0.5 * std::log(m2 / 2.0);
    const double a3 = (1.0 / 3.0) * std::log(m3 / 6.0);
    const double t_den = a2 - a3;
    if (!(std::abs(t_den) > 1e-300))
        raise(ErrorCode::second_order_failed, "three-moment ratio statistic undefined");
    const double t = (a1 - a2) / t_den;
    if (!std::isfinite(t) || std::abs(t - 3.0) < 1e-12)
        raise(ErrorCode::second_order_failed,
              "three-moment ratio statistic degenerate (T = 3)");
    const double rho = -std::abs(3.0 * (t - 1.0) / (t - 3.0));
    if (!std::isfinite(rho) || !(rho < -1e-12))
        raise(ErrorCode::second_order_failed, "rho estimate is not negative");
    return rho;
}

int second_order_level(std::size_t n) {
    return static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.995)));
}

}  // namespace

ErmFit fit_erm(const TailView& view, const ErmOptions& options) {
    if (view.k() < 3)
        raise(ErrorCode::domain, "ERM fit requires k >= 3 (three parameters)");
    const auto r = log_spacings(view);

    double r_mean = 0.0;
    for (double v : r) r_mean += v;
    r_mean /= static_cast<double>(r.size());
    if (!(r_mean > 0.0))
        raise(ErrorCode::domain, "degenerate spacings: top-k observations are all equal");

    if (options.constrain_b_zero) {
        // with b = 0 the likelihood is maximized at gamma = mean(R), the Hill
        // estimator
        ErmFit fit;
        fit.gamma = r_mean;
        fit.b = 0.0;
        fit.rho = -1.0;
        fit.grid_rho_used = -1.0;
        fit.loglik = erm_loglik(r, std::vector<double>(r.size(), 1.0), r_mean, 0.0);
        fit.converged = true;
        return fit;
    }

    const int k = view.k();
    std::vector<double> log_base(r.size());
    for (int j = 1; j <= k; ++j)
        log_base[static_cast<std::size_t>(j - 1)] = std::log(j / (k + 1.0));

    std::vector<double> rho_grid;
    switch (options.rho_source) {
        case ErmRho::profile:
            for (int gi = 0; gi < 80; ++gi) rho_grid.push_back(-4.0 + 0.05 * gi);
            break;
        case ErmRho::fixed:
            if (!(options.fixed_rho < 0.0))
                raise(ErrorCode::domain, "ERM rho must be negative");
            rho_grid.push_back(options.fixed_rho);
            break;
        case ErmRho::plugin: {
            double rho = -1.0;
            const int k1 = std::min(second_order_level(view.z_sorted().size()),
                                    static_cast<int>(view.z_sorted().size()) - 1);
            if (k1 >= 3) {
                try {
                    rho = rho_three_moment(change_k(view, k1));
                } catch (const Error&) {
                    rho = -1.0;
                }
            }
            rho_grid.push_back(std::min(-0.05, std::max(-4.0, rho)));
            break;
        }
    }

    ErmFit best;
    bool have_best = false;
    std::vector<double> x(r.size());
    for (const double rho : rho_grid) {
        for (std::size_t j = 0; j < r.size(); ++j) x[j] = std::exp(-rho * log_base[j]);
        const InnerFit inner = fit_fixed_rho(r, x, r_mean);
        if (!inner.ok) continue;
        const bool better =
            !have_best || inner.loglik > best.loglik ||
            (inner.loglik == best.loglik && std::abs(inner.b) < std::abs(best.b));
        if (better) {
            best.gamma = inner.gamma;
            best.b = inner.b;
            best.rho = rho;
            best.grid_rho_used = rho;
            best.loglik = inner.loglik;
            best.converged = inner.converged;
            have_best = true;
        }
    }

    if (!have_best) {
        // fall back to the Hill model so pipelines never abort mid-table
        ErmFit fit;
        fit.gamma = r_mean;
        fit.b = 0.0;
        fit.rho = -1.0;
        fit.grid_rho_used = -1.0;
        fit.loglik = erm_loglik(r, std::vector<double>(r.size(), 1.0), r_mean, 0.0);
        fit.converged = false;
        return fit;
    }
    return best;
}

EviEstimate erm(const TailView& view) {
    const ErmFit fit = fit_erm(view);
    EviEstimate est = make_estimate(Estimator::erm, view.k(), fit.gamma,
                                    adapt_to_censoring(fit.gamma, view));
    est.b = fit.b;
    est.rho = fit.rho;
    est.converged = fit.converged;
    return est;
}

SecondOrderPair estimate_second_order(const CensoredSample& sample) {
    const std::size_t n = sample.size();
    if (n < 100)
        raise(ErrorCode::domain, "second-order estimation requires n >= 100");
    const int k1 = second_order_level(n);
    const TailView view = make_tail_view(sample, k1);
    const double rho = rho_three_moment(view);

    // scaled-spacings regression for beta at the same level, given rho
    double sx = 0.0, su = 0.0, sxu = 0.0, sxxu = 0.0;
    for (int i = 1; i <= k1; ++i) {
        const double u = i * (std::log(view.top(i)) - std::log(view.top(i + 1)));
        const double xi = std::pow(static_cast<double>(i) / k1, -rho);
        sx += xi;
        su += u;
        sxu += xi * u;
        sxxu += xi * xi * u;
    }
    sx /= k1;
    su /= k1;
    sxu /= k1;
    sxxu /= k1;
    const double den = sx * sxu - sxxu;
    if (!(std::abs(den) > 1e-300) || !std::isfinite(den))
        raise(ErrorCode::second_order_failed, "beta regression denominator vanishes");
    const double beta =
        std::pow(static_cast<double>(k1) / static_cast<double>(n), rho) * (sx * su - sxu) / den;
    if (!std::isfinite(beta))
        raise(ErrorCode::second_order_failed, "beta estimate is not finite");

    return SecondOrderPair{beta, rho, k1};
}

}  // namespace censtail
