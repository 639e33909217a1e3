#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "censtail.h"

namespace {

ct_sample* make_s4c() {
    const double e = std::exp(1.0);
    const double z[4] = {1.0, e, e * e, e * e * e};
    const int delta[4] = {1, 0, 1, 0};
    ct_sample* s = nullptr;
    REQUIRE(ct_sample_new(z, delta, 4, &s) == CT_OK);
    return s;
}

ct_sample* make_generated(double gamma1, double censor_p, size_t n, uint64_t seed) {
    ct_model model{};
    REQUIRE(ct_model_from_gamma(CT_DIST_BURR, gamma1, &model) == CT_OK);
    ct_sample* s = nullptr;
    REQUIRE(ct_generate_censored(&model, censor_p, n, seed, &s) == CT_OK);
    return s;
}

}  // namespace

TEST_CASE("sample lifecycle and validation") {
    ct_sample* s = make_s4c();
    CHECK(ct_sample_size(s) == 4);
    ct_sample_free(s);

    const double bad_z[2] = {1.0, -1.0};
    const int delta[2] = {1, 1};
    ct_sample* out = nullptr;
    CHECK(ct_sample_new(bad_z, delta, 2, &out) == CT_E_DOMAIN);
    CHECK(std::strlen(ct_error_message()) > 0);

    const double z[2] = {1.0, 2.0};
    const int bad_delta[2] = {1, 7};
    CHECK(ct_sample_new(z, bad_delta, 2, &out) == CT_E_DOMAIN);
    CHECK(ct_sample_new(nullptr, delta, 2, &out) == CT_E_INVALID);
}

TEST_CASE("p_hat and the Hill estimate through the C surface") {
    ct_sample* s = make_s4c();
    double p = 0.0;
    REQUIRE(ct_p_hat(s, 3, &p) == CT_OK);
    CHECK(p == doctest::Approx(1.0 / 3.0));
    CHECK(ct_p_hat(s, 4, &p) == CT_E_DOMAIN);

    ct_estimate_result r{};
    REQUIRE(ct_estimate(s, CT_EST_HILL, 3, &r) == CT_OK);
    CHECK(r.raw == doctest::Approx(2.0));
    CHECK(r.adapted == doctest::Approx(6.0));
    CHECK(r.k == 3);
    ct_sample_free(s);
}

TEST_CASE("fully censored tails map to the dedicated status") {
    const double z[4] = {1.0, 2.0, 3.0, 4.0};
    const int delta[4] = {1, 0, 0, 0};
    ct_sample* s = nullptr;
    REQUIRE(ct_sample_new(z, delta, 4, &s) == CT_OK);
    ct_estimate_result r{};
    CHECK(ct_estimate(s, CT_EST_HILL, 3, &r) == CT_E_FULLY_CENSORED);
    ct_sample_free(s);
}

TEST_CASE("every estimator evaluates on a generated sample") {
    ct_sample* s = make_generated(0.5, 0.35, 400, 99);
    for (int e = 0; e < CT_EST_COUNT; ++e) {
        ct_estimate_result r{};
        REQUIRE(ct_estimate(s, static_cast<ct_estimator>(e), 80, &r) == CT_OK);
        CHECK(std::isfinite(r.adapted));
        if (e == CT_EST_POT || e == CT_EST_POT_L) CHECK((r.aux_mask & CT_AUX_SIGMA) != 0u);
        if (e == CT_EST_ERM) {
            CHECK((r.aux_mask & CT_AUX_B) != 0u);
            CHECK((r.aux_mask & CT_AUX_RHO) != 0u);
        }
        if (e == CT_EST_MVRB) CHECK((r.aux_mask & CT_AUX_BETA) != 0u);
    }
    ct_sample_free(s);
}

TEST_CASE("estimator names round-trip") {
    for (int e = 0; e < CT_EST_COUNT; ++e) {
        ct_estimator back = CT_EST_COUNT;
        REQUIRE(ct_estimator_from_name(ct_estimator_cli_name(static_cast<ct_estimator>(e)),
                                       &back) == CT_OK);
        CHECK(back == e);
    }
    ct_estimator out;
    CHECK(ct_estimator_from_name("nope", &out) == CT_E_DOMAIN);
    CHECK(std::string(ct_estimator_name(CT_EST_WW_KM)) == "WW.KM");
}

TEST_CASE("bootstrap interval through the C surface") {
    ct_sample* s = make_generated(0.5, 0.2, 300, 7);
    ct_interval ci{};
    REQUIRE(ct_bootstrap_ci(s, CT_EST_HILL, 60, 100, 0.05, 1, 12345, &ci) == CT_OK);
    CHECK(ci.lower <= ci.upper);
    CHECK(ci.level == doctest::Approx(0.95));
    CHECK(ci.replicates + ci.dropped == 100);

    ct_interval again{};
    REQUIRE(ct_bootstrap_ci(s, CT_EST_HILL, 60, 100, 0.05, 1, 12345, &again) == CT_OK);
    CHECK(ci.lower == again.lower);
    CHECK(ci.upper == again.upper);

    CHECK(ct_bootstrap_ci(s, CT_EST_HILL, 60, 1, 0.05, 1, 1, &ci) == CT_E_DOMAIN);
    ct_sample_free(s);
}

TEST_CASE("model helpers") {
    ct_model model{};
    REQUIRE(ct_model_from_gamma(CT_DIST_PARETO, 0.5, &model) == CT_OK);
    CHECK(model.p1 == doctest::Approx(2.0));
    double g = 0.0;
    REQUIRE(ct_model_gamma(&model, &g) == CT_OK);
    CHECK(g == doctest::Approx(0.5));
    double q = 0.0;
    REQUIRE(ct_model_quantile(&model, 0.75, &q) == CT_OK);
    CHECK(q == doctest::Approx(2.0));
    CHECK(ct_model_quantile(&model, 1.5, &q) == CT_E_DOMAIN);
    CHECK(ct_model_from_gamma(77, 0.5, &model) == CT_E_DOMAIN);
}

TEST_CASE("study run and table formatting") {
    ct_study_config config{};
    REQUIRE(ct_model_from_gamma(CT_DIST_BURR, 0.5, &config.model) == CT_OK);
    config.censor_p = 0.35;
    config.n = 100;
    config.k_fraction = 0.2;
    config.repetitions = 5;
    config.bootstrap_replicates = 20;
    config.alpha = 0.05;
    config.d = 1;
    config.seed = 4242;
    config.workers = 1;

    const ct_estimator ests[2] = {CT_EST_MOM, CT_EST_HILL};
    ct_study_row rows[2];
    REQUIRE(ct_run_study(&config, ests, 2, rows) == CT_OK);
    CHECK(rows[0].estimator == CT_EST_HILL);  // table order
    CHECK(rows[1].estimator == CT_EST_MOM);

    char* text = nullptr;
    REQUIRE(ct_format_study_table(rows, 2, CT_FORMAT_CSV, &text) == CT_OK);
    CHECK(std::string(text).find("estimator,mad,med_bias,cp,avg_length,failures") == 0);
    ct_string_free(text);
}

TEST_CASE("threshold selection through the C surface") {
    // small n keeps MVRB on its beta = 0 fallback, identical to Hill
    ct_sample* s = make_generated(0.5, 0.2, 90, 11);
    const ct_estimator ests[2] = {CT_EST_HILL, CT_EST_MVRB};
    int selected = 0;
    std::vector<double> objective(31);
    std::vector<double> estimates(2 * 31);
    REQUIRE(ct_kopt(s, ests, 2, 10, 40, &selected, objective.data(), estimates.data()) == CT_OK);
    CHECK(selected == 10);  // all objectives zero, smallest k wins
    for (double v : objective) CHECK(v == doctest::Approx(0.0));
    CHECK(estimates[0] == estimates[31]);  // hill row == mvrb row at k=10

    CHECK(ct_kopt(s, ests, 2, 40, 10, &selected, nullptr, nullptr) == CT_E_DOMAIN);
    CHECK(ct_kopt(s, ests, 1, 10, 40, &selected, nullptr, nullptr) == CT_E_DOMAIN);
    ct_sample_free(s);
}
