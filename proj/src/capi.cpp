#include "censtail.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "censtail/bootstrap.hpp"
#include "censtail/core.hpp"
#include "censtail/distributions.hpp"
#include "censtail/estimators.hpp"
#include "censtail/simulation.hpp"
#include "censtail/threshold.hpp"
#include "censtail/types.hpp"

struct ct_sample {
    censtail::CensoredSample impl;
};

namespace {

thread_local std::string g_error;

ct_status map_code(censtail::ErrorCode code) {
    using censtail::ErrorCode;
    switch (code) {
        case ErrorCode::domain: return CT_E_DOMAIN;
        case ErrorCode::fully_censored: return CT_E_FULLY_CENSORED;
        case ErrorCode::km_degenerate: return CT_E_KM_DEGENERATE;
        case ErrorCode::one_step_failed: return CT_E_ONE_STEP;
        case ErrorCode::second_order_failed: return CT_E_SECOND_ORDER;
        case ErrorCode::degenerate_sample: return CT_E_DEGENERATE_SAMPLE;
        case ErrorCode::unstable_bootstrap: return CT_E_UNSTABLE_BOOTSTRAP;
        case ErrorCode::io: return CT_E_IO;
    }
    return CT_E_INVALID;
}

template <typename Fn>
ct_status guarded(Fn&& fn) {
    try {
        fn();
        return CT_OK;
    } catch (const censtail::Error& e) {
        g_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_error = "out of memory";
        return CT_E_NOMEM;
    } catch (const std::exception& e) {
        g_error = e.what();
        return CT_E_INVALID;
    }
}

ct_status invalid(const char* message) {
    g_error = message;
    return CT_E_INVALID;
}

censtail::Estimator to_estimator(ct_estimator e) {
    return static_cast<censtail::Estimator>(static_cast<int>(e));
}

bool estimator_in_range(int e) { return e >= 0 && e < CT_EST_COUNT; }

censtail::TailModel to_model(const ct_model& m) {
    using censtail::TailModel;
    switch (m.family) {
        case CT_DIST_BURR: return TailModel::burr(m.p1, m.p2, m.p3);
        case CT_DIST_PARETO: return TailModel::pareto(m.p1);
        case CT_DIST_FRECHET: return TailModel::frechet(m.p1);
        default: break;
    }
    censtail::raise(censtail::ErrorCode::domain, "unknown distribution family");
}

void fill_result(const censtail::EviEstimate& est, ct_estimate_result* out) {
    out->estimator = static_cast<int>(est.id);
    out->k = est.k;
    out->raw = est.raw;
    out->adapted = est.adapted;
    out->sigma = out->b = out->rho = out->beta = 0.0;
    out->aux_mask = 0;
    if (est.sigma) { out->sigma = *est.sigma; out->aux_mask |= CT_AUX_SIGMA; }
    if (est.b)     { out->b = *est.b;         out->aux_mask |= CT_AUX_B; }
    if (est.rho)   { out->rho = *est.rho;     out->aux_mask |= CT_AUX_RHO; }
    if (est.beta)  { out->beta = *est.beta;   out->aux_mask |= CT_AUX_BETA; }
    out->converged = est.converged ? 1 : 0;
}

}  // namespace

extern "C" {

const char* ct_error_message(void) { return g_error.c_str(); }

const char* ct_status_name(ct_status status) {
    switch (status) {
        case CT_OK: return "ok";
        case CT_E_DOMAIN: return "domain error";
        case CT_E_FULLY_CENSORED: return "fully censored tail";
        case CT_E_KM_DEGENERATE: return "Kaplan-Meier degenerate";
        case CT_E_ONE_STEP: return "one-step update failed";
        case CT_E_SECOND_ORDER: return "second-order estimation failed";
        case CT_E_DEGENERATE_SAMPLE: return "degenerate sample";
        case CT_E_UNSTABLE_BOOTSTRAP: return "unstable bootstrap";
        case CT_E_IO: return "io error";
        case CT_E_INVALID: return "invalid call";
        case CT_E_NOMEM: return "out of memory";
    }
    return "unknown";
}

const char* ct_estimator_name(ct_estimator e) {
    if (!estimator_in_range(e)) return "?";
    thread_local std::string name;
    name = std::string(censtail::estimator_name(to_estimator(e)));
    return name.c_str();
}

const char* ct_estimator_cli_name(ct_estimator e) {
    if (!estimator_in_range(e)) return "?";
    thread_local std::string name;
    name = std::string(censtail::estimator_cli_name(to_estimator(e)));
    return name.c_str();
}

ct_status ct_estimator_from_name(const char* name, ct_estimator* out) {
    if (name == nullptr || out == nullptr) return invalid("null argument");
    const auto id = censtail::estimator_from_cli_name(name);
    if (!id) {
        g_error = "unknown estimator name: " + std::string(name);
        return CT_E_DOMAIN;
    }
    *out = static_cast<ct_estimator>(static_cast<int>(*id));
    return CT_OK;
}

ct_status ct_sample_new(const double* z, const int* delta, size_t n, ct_sample** out) {
    if (z == nullptr || delta == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        std::vector<double> zv(z, z + n);
        std::vector<unsigned char> dv(n);
        for (size_t i = 0; i < n; ++i) {
            if (delta[i] != 0 && delta[i] != 1)
                censtail::raise(censtail::ErrorCode::domain,
                                "censoring flag " + std::to_string(i + 1) + " is not 0 or 1");
            dv[i] = static_cast<unsigned char>(delta[i]);
        }
        *out = new ct_sample{censtail::CensoredSample(std::move(zv), std::move(dv))};
    });
}

void ct_sample_free(ct_sample* sample) { delete sample; }

size_t ct_sample_size(const ct_sample* sample) {
    return sample == nullptr ? 0 : sample->impl.size();
}

ct_status ct_p_hat(const ct_sample* sample, int k, double* out) {
    if (sample == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] { *out = censtail::make_tail_view(sample->impl, k).p_hat(); });
}

ct_status ct_estimate(const ct_sample* sample, ct_estimator estimator, int k,
                      ct_estimate_result* out) {
    if (sample == nullptr || out == nullptr) return invalid("null argument");
    if (!estimator_in_range(estimator)) return invalid("estimator id out of range");
    return guarded([&] {
        const auto view = censtail::make_tail_view(sample->impl, k);
        fill_result(censtail::evaluate(view, to_estimator(estimator)), out);
    });
}

ct_status ct_bootstrap_ci(const ct_sample* sample, ct_estimator estimator, int k,
                          int replicates, double alpha, int d, uint64_t seed,
                          ct_interval* out) {
    if (sample == nullptr || out == nullptr) return invalid("null argument");
    if (!estimator_in_range(estimator)) return invalid("estimator id out of range");
    return guarded([&] {
        const auto ci = censtail::bootstrap_ci(sample->impl, to_estimator(estimator), k,
                                               replicates, alpha, d, seed);
        out->lower = ci.lower;
        out->upper = ci.upper;
        out->level = ci.level;
        out->replicates = ci.replicates;
        out->dropped = ci.dropped;
    });
}

ct_status ct_model_from_gamma(int family, double gamma1, ct_model* out) {
    if (out == nullptr) return invalid("null argument");
    return guarded([&] {
        censtail::Family f;
        switch (family) {
            case CT_DIST_BURR: f = censtail::Family::burr; break;
            case CT_DIST_PARETO: f = censtail::Family::pareto; break;
            case CT_DIST_FRECHET: f = censtail::Family::frechet; break;
            default:
                censtail::raise(censtail::ErrorCode::domain, "unknown distribution family");
        }
        const auto model = censtail::TailModel::from_gamma(f, gamma1);
        out->family = family;
        if (f == censtail::Family::burr) {
            out->p1 = model.eta;
            out->p2 = model.tau;
            out->p3 = model.lambda;
        } else {
            out->p1 = model.alpha;
            out->p2 = out->p3 = 0.0;
        }
    });
}

ct_status ct_model_gamma(const ct_model* model, double* out) {
    if (model == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] { *out = to_model(*model).gamma(); });
}

ct_status ct_model_quantile(const ct_model* model, double u, double* out) {
    if (model == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] { *out = censtail::quantile(to_model(*model), u); });
}

ct_status ct_generate_censored(const ct_model* model, double censor_p, size_t n,
                               uint64_t seed, ct_sample** out) {
    if (model == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        const auto event_model = to_model(*model);
        const auto scheme = censtail::CensoringScheme::for_model(event_model, censor_p);
        *out = new ct_sample{censtail::generate_censored(event_model, scheme, n, seed)};
    });
}

ct_status ct_run_study(const ct_study_config* config, const ct_estimator* estimators,
                       size_t n_estimators, ct_study_row* rows) {
    if (config == nullptr || estimators == nullptr || rows == nullptr)
        return invalid("null argument");
    if (n_estimators == 0) return invalid("estimator list is empty");
    return guarded([&] {
        censtail::StudyConfig cfg;
        cfg.model = to_model(config->model);
        cfg.target_p = config->censor_p;
        cfg.n = config->n;
        cfg.k_fraction = config->k_fraction;
        cfg.repetitions = config->repetitions;
        cfg.bootstrap_replicates = config->bootstrap_replicates;
        cfg.alpha = config->alpha;
        cfg.d = config->d;
        cfg.seed = config->seed;
        cfg.workers = config->workers;
        cfg.median_length = config->median_length != 0;
        for (size_t i = 0; i < n_estimators; ++i) {
            if (!estimator_in_range(estimators[i]))
                censtail::raise(censtail::ErrorCode::domain, "estimator id out of range");
            cfg.estimators.push_back(to_estimator(estimators[i]));
        }
        const auto metrics = censtail::run_study(cfg);
        for (size_t i = 0; i < metrics.rows.size(); ++i) {
            const auto& row = metrics.rows[i];
            rows[i].estimator = static_cast<int>(row.id);
            rows[i].mad = row.mad;
            rows[i].med_bias = row.med_bias;
            rows[i].coverage = row.coverage;
            rows[i].avg_length = row.avg_length;
            rows[i].failures = row.failures;
            rows[i].failed = row.failed ? 1 : 0;
        }
    });
}

ct_status ct_format_study_table(const ct_study_row* rows, size_t n_rows, ct_format format,
                                char** out) {
    if (rows == nullptr || out == nullptr) return invalid("null argument");
    return guarded([&] {
        censtail::StudyMetrics metrics;
        for (size_t i = 0; i < n_rows; ++i) {
            censtail::EstimatorMetrics row;
            if (!estimator_in_range(rows[i].estimator))
                censtail::raise(censtail::ErrorCode::domain, "estimator id out of range");
            row.id = static_cast<censtail::Estimator>(rows[i].estimator);
            row.mad = rows[i].mad;
            row.med_bias = rows[i].med_bias;
            row.coverage = rows[i].coverage;
            row.avg_length = rows[i].avg_length;
            row.failures = rows[i].failures;
            row.failed = rows[i].failed != 0;
            metrics.rows.push_back(row);
        }
        censtail::TableFormat f;
        switch (format) {
            case CT_FORMAT_TEXT: f = censtail::TableFormat::text; break;
            case CT_FORMAT_CSV: f = censtail::TableFormat::csv; break;
            case CT_FORMAT_JSON: f = censtail::TableFormat::json; break;
            default:
                censtail::raise(censtail::ErrorCode::domain, "unknown table format");
        }
        const std::string text = censtail::emit_table(metrics, f);
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (buf == nullptr) throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

void ct_string_free(char* s) { std::free(s); }

ct_status ct_kopt(const ct_sample* sample, const ct_estimator* estimators,
                  size_t n_estimators, int k_min, int k_max, int* k_opt_out,
                  double* objective, double* estimates) {
    if (sample == nullptr || estimators == nullptr || k_opt_out == nullptr)
        return invalid("null argument");
    if (n_estimators < 2) {
        g_error = "threshold selection requires at least 2 estimators";
        return CT_E_DOMAIN;
    }
    return guarded([&] {
        const auto n = sample->impl.size();
        if (k_min < 1 || k_max < k_min || static_cast<size_t>(k_max) > n - 1)
            censtail::raise(censtail::ErrorCode::domain,
                            "k range must satisfy 1 <= k_min <= k_max <= n-1");
        std::vector<censtail::Estimator> ids;
        for (size_t i = 0; i < n_estimators; ++i) {
            if (!estimator_in_range(estimators[i]))
                censtail::raise(censtail::ErrorCode::domain, "estimator id out of range");
            ids.push_back(to_estimator(estimators[i]));
        }

        const auto base = censtail::make_tail_view(sample->impl, k_min);
        const size_t width = static_cast<size_t>(k_max - k_min + 1);
        const double nan = std::nan("");

        int best_k = -1;
        double best = 0.0;
        for (int k = k_min; k <= k_max; ++k) {
            const auto view = censtail::change_k(base, k);
            const size_t col = static_cast<size_t>(k - k_min);
            bool all_ok = true;
            std::vector<double> values(ids.size(), nan);
            for (size_t e = 0; e < ids.size(); ++e) {
                try {
                    values[e] = censtail::evaluate(view, ids[e]).adapted;
                    if (!std::isfinite(values[e])) all_ok = false;
                } catch (const censtail::Error&) {
                    all_ok = false;
                }
                if (estimates != nullptr) estimates[e * width + col] = values[e];
            }
            double obj = nan;
            if (all_ok) {
                double sum = 0.0;
                for (size_t i = 0; i < values.size(); ++i)
                    for (size_t j = i + 1; j < values.size(); ++j)
                        sum += (values[i] - values[j]) * (values[i] - values[j]);
                obj = std::sqrt(sum);
                if (best_k < 0 || obj < best) {
                    best = obj;
                    best_k = k;
                }
            }
            if (objective != nullptr) objective[col] = obj;
        }
        if (best_k < 0)
            censtail::raise(censtail::ErrorCode::domain,
                            "no k in the range is valid for every selected estimator");
        *k_opt_out = best_k;
    });
}

}  // extern "C"
