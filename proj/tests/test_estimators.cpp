#include <doctest.h>

#include <cmath>

#include "censtail/core.hpp"
#include "censtail/distributions.hpp"
#include "censtail/estimators.hpp"
#include "censtail/rng.hpp"
#include "oracles.hpp"

using namespace censtail;

namespace {

const double kE = std::exp(1.0);

CensoredSample s4() {
    return CensoredSample({1.0, kE, kE * kE, kE * kE * kE}, {1, 1, 1, 1});
}

CensoredSample s4c() {
    return CensoredSample({1.0, kE, kE * kE, kE * kE * kE}, {1, 0, 1, 0});
}

oracle::Sorted as_oracle(const CensoredSample& s) {
    return oracle::sort_sample(s.z(), std::vector<int>(s.delta().begin(), s.delta().end()));
}

// deterministic Pareto-tail order statistics Z_{n-j+1,n} = (n/j)^gamma
CensoredSample pareto_grid(std::size_t n, double gamma) {
    std::vector<double> z(n);
    for (std::size_t j = 1; j <= n; ++j)
        z[j - 1] = std::pow(static_cast<double>(n) / static_cast<double>(j), gamma);
    return CensoredSample(std::move(z), std::vector<unsigned char>(n, 1));
}

CensoredSample random_pareto(std::uint64_t seed, std::size_t n, double gamma) {
    auto z = sample(TailModel::pareto(1.0 / gamma), n, seed);
    return CensoredSample(std::move(z), std::vector<unsigned char>(n, 1));
}

CensoredSample scaled(const CensoredSample& s, double c) {
    auto z = s.z();
    for (auto& v : z) v *= c;
    return CensoredSample(std::move(z), s.delta());
}

}  // namespace

TEST_CASE("Hill on the hand samples") {
    CHECK(hill(make_tail_view(s4(), 3)).raw == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(hill(make_tail_view(s4c(), 3)).adapted == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(hill(make_tail_view(scaled(s4(), 2.0), 3)).raw ==
          doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("generalized Hill matches the hand oracle and is consistent") {
    const auto view = make_tail_view(s4(), 2);
    const double expected = oracle::generalized_hill(as_oracle(s4()), 2);
    // hand value: 1.5 + log(1.5)/2 - log 2
    CHECK(expected == doctest::Approx(1.5 + 0.5 * std::log(1.5) - std::log(2.0)).epsilon(1e-12));
    CHECK(generalized_hill(view).raw == doctest::Approx(expected).epsilon(1e-12));
    CHECK(generalized_hill(view).adapted == generalized_hill(view).raw);  // p_hat = 1

    const auto grid = pareto_grid(1000, 0.5);
    CHECK(std::abs(generalized_hill(make_tail_view(grid, 100)).raw - 0.5) < 0.1);

    CHECK_THROWS_AS(generalized_hill(make_tail_view(s4(), 3)), Error);  // k = n-1
}

TEST_CASE("Zipf matches the least-squares oracle") {
    const auto view = make_tail_view(s4(), 3);
    const double expected = oracle::zipf(as_oracle(s4()), 3);
    CHECK(zipf(view).raw == doctest::Approx(expected).epsilon(1e-12));

    // deterministic Pareto quantiles z_j = ((n+1)/j)^0.5
    const std::size_t n = 1000;
    std::vector<double> z(n);
    for (std::size_t j = 1; j <= n; ++j)
        z[j - 1] = std::pow((n + 1.0) / static_cast<double>(j), 0.5);
    const CensoredSample quantiles(std::move(z), std::vector<unsigned char>(n, 1));
    CHECK(std::abs(zipf(make_tail_view(quantiles, 100)).raw - 0.5) < 0.05);

    // scale shift in log-space drops out through the centred weights
    const auto shifted = make_tail_view(scaled(s4(), 7.5), 3);
    CHECK(zipf(shifted).raw == doctest::Approx(zipf(view).raw).epsilon(1e-12));

    CHECK_THROWS_AS(zipf(make_tail_view(s4(), 1)), Error);
}

TEST_CASE("MVRB bias correction") {
    const auto view = make_tail_view(s4(), 3);
    CHECK(mvrb(view, 0.0, -1.0).raw == doctest::Approx(hill(view).raw).epsilon(1e-14));
    CHECK(mvrb(view, 0.5, -1.0).raw == doctest::Approx(1.625).epsilon(1e-13));
    CHECK_THROWS_AS(mvrb(view, 0.5, 0.0), Error);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto view2 = make_tail_view(random_pareto(seed, 200, 0.7), 50);
        CHECK(mvrb(view2, 0.0, -2.0).raw == doctest::Approx(hill(view2).raw).epsilon(1e-13));
    }
}

TEST_CASE("moment family on S4") {
    const auto view = make_tail_view(s4(), 3);
    // M1 = 2, M2 = 14/3
    CHECK(oracle::moment_m(as_oracle(s4()), 3, 1) == doctest::Approx(2.0));
    CHECK(oracle::moment_m(as_oracle(s4()), 3, 2) == doctest::Approx(14.0 / 3.0));
    CHECK(std::abs(moment(view).raw - (-0.5)) < 1e-12);
    CHECK(std::abs(moment_ratio(view).raw - 7.0 / 6.0) < 1e-12);
    CHECK(std::abs(peng_moment(view).raw - (-4.0 / 3.0)) < 1e-12);
}

TEST_CASE("Peng/moment algebra holds on random views") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto view = make_tail_view(random_pareto(seed, 120, 0.4), 40);
        const double m1 = oracle::moment_m(as_oracle(random_pareto(seed, 120, 0.4)), 40, 1);
        const double lhs = peng_moment(view).raw - moment_ratio(view).raw;
        const double rhs = moment(view).raw - m1;
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("degenerate spacings raise a domain error") {
    const CensoredSample flat({1.0, 5.0, 5.0, 5.0, 5.0}, {1, 1, 1, 1, 1});
    const auto view = make_tail_view(flat, 3);  // top-3 all equal
    CHECK_THROWS_AS(moment(view), Error);
    CHECK_THROWS_AS(moment_ratio(view), Error);
    CHECK_THROWS_AS(peng_moment(view), Error);
}

TEST_CASE("Kaplan-Meier products on the 3-point sample") {
    const CensoredSample s({1.0, 2.0, 3.0}, {1, 0, 1});
    const auto view = make_tail_view(s, 1);
    const KaplanMeierCurve f(view.z_sorted(), view.delta_sorted(), SurvivalOf::event);
    const KaplanMeierCurve g(view.z_sorted(), view.delta_sorted(), SurvivalOf::censor);
    CHECK(std::abs(f.survival(2.0) - 2.0 / 3.0) < 1e-12);
    CHECK(std::abs(g.survival(2.0) - 0.5) < 1e-12);
    CHECK(f.survival(0.5) == 1.0);
    CHECK(g.left_limit(1.0) == 1.0);  // left limit below the smallest jump
}

TEST_CASE("Kaplan-Meier telescoping under zero censoring") {
    for (std::size_t n : {3u, 10u, 57u}) {
        const auto s = random_pareto(n, n, 0.5);
        const auto view = make_tail_view(s, 1);
        const KaplanMeierCurve f(view.z_sorted(), view.delta_sorted(), SurvivalOf::event);
        for (std::size_t k = 1; k <= n - 1; ++k) {
            const double thr = view.z_sorted()[n - k - 1];
            CHECK(static_cast<double>(n) * f.survival(thr) ==
                  doctest::Approx(static_cast<double>(k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Kaplan-Meier curve shape invariants") {
    for (std::uint64_t seed = 3; seed <= 8; ++seed) {
        rng::Engine eng(seed);
        std::vector<double> z;
        std::vector<unsigned char> delta;
        for (int i = 0; i < 40; ++i) {
            z.push_back(1.0 + eng.below(12));  // forces ties
            delta.push_back(eng.unit_open() < 0.6 ? 1 : 0);
        }
        const CensoredSample s(z, delta);
        const auto view = make_tail_view(s, 10);
        for (auto which : {SurvivalOf::event, SurvivalOf::censor}) {
            const KaplanMeierCurve curve(view.z_sorted(), view.delta_sorted(), which);
            const auto& surv = curve.jump_survival();
            const auto& left = curve.jump_left_limits();
            double prev = 1.0;
            for (std::size_t i = 0; i < surv.size(); ++i) {
                CHECK(surv[i] <= prev + 1e-15);
                CHECK(left[i] >= surv[i]);
                prev = surv[i];
            }
            CHECK(curve.survival(1e-9) == 1.0);
        }
    }
}

TEST_CASE("WW.KM equals Hill under zero censoring") {
    const auto view = make_tail_view(s4(), 3);
    CHECK(std::abs(ww_km(view).raw - 2.0) < 1e-12);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto s = random_pareto(seed, 60, 0.5);
        const auto v = make_tail_view(s, 20);
        CHECK(std::abs(ww_km(v).raw - hill(v).raw) < 1e-12);
    }
}

TEST_CASE("WW estimators match the brute-force oracle on censored data") {
    const CensoredSample five({1.0, 2.0, 3.0, 4.0, 5.0}, {1, 1, 0, 1, 1});
    const auto view = make_tail_view(five, 3);
    const auto sorted = as_oracle(five);
    CHECK(ww_km(view).raw == doctest::Approx(oracle::ww_km(sorted, 3)).epsilon(1e-12));
    // hand value: (1/3) * (1.5 log 2.5 + 1.5 log 2) = 0.5 log 5
    CHECK(ww_km(view).raw == doctest::Approx(0.5 * std::log(5.0)).epsilon(1e-12));
    CHECK(ww_leurgans(view, LeurgansVariant::as_printed).raw ==
          doctest::Approx(oracle::ww_leurgans(sorted, 3, false)).epsilon(1e-12));
    CHECK(ww_leurgans(view, LeurgansVariant::consecutive_spacings).raw ==
          doctest::Approx(oracle::ww_leurgans(sorted, 3, true)).epsilon(1e-12));

    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        rng::Engine eng(seed);
        std::vector<double> z;
        std::vector<unsigned char> delta;
        for (int i = 0; i < 30; ++i) {
            z.push_back(std::pow(eng.unit_open(), -0.4));
            delta.push_back(eng.unit_open() < 0.65 ? 1 : 0);
        }
        const CensoredSample s(z, delta);
        const auto v = make_tail_view(s, 12);
        const auto o = as_oracle(s);
        if (v.p_hat() == 0.0) continue;
        CHECK(ww_km(v).raw == doctest::Approx(oracle::ww_km(o, 12)).epsilon(1e-11));
        CHECK(ww_leurgans(v, LeurgansVariant::as_printed).raw ==
              doctest::Approx(oracle::ww_leurgans(o, 12, false)).epsilon(1e-11));
        CHECK(ww_leurgans(v, LeurgansVariant::consecutive_spacings).raw ==
              doctest::Approx(oracle::ww_leurgans(o, 12, true)).epsilon(1e-11));
    }
}

TEST_CASE("WW.L reductions on S4") {
    const auto view = make_tail_view(s4(), 3);
    CHECK(std::abs(ww_leurgans(view, LeurgansVariant::consecutive_spacings).raw - 2.0) < 1e-12);
    CHECK(std::abs(ww_leurgans(view, LeurgansVariant::as_printed).raw - 10.0 / 3.0) < 1e-12);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto s = random_pareto(seed + 500, 60, 0.5);
        const auto v = make_tail_view(s, 20);
        CHECK(std::abs(ww_leurgans(v, LeurgansVariant::consecutive_spacings).raw - hill(v).raw) <
              1e-12);
    }
}

TEST_CASE("WW.KM reports a degenerate Kaplan-Meier denominator") {
    // tie spanning the threshold with a noncensored maximum drives
    // 1-F_hat(Z_{n-k,n}) to zero
    const CensoredSample tied({1.0, 2.0, 3.0, 3.0}, {1, 1, 0, 1});
    const auto view = make_tail_view(tied, 1);
    try {
        ww_km(view);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::km_degenerate);
    }
}

TEST_CASE("scale invariance of the log-based estimators") {
    const auto base = random_pareto(77, 300, 0.5);
    const auto big = scaled(base, 1000.0);
    const auto va = make_tail_view(base, 60);
    const auto vb = make_tail_view(big, 60);
    CHECK(va.p_hat() == vb.p_hat());
    CHECK(std::abs(hill(va).raw - hill(vb).raw) < 1e-12);
    CHECK(std::abs(generalized_hill(va).raw - generalized_hill(vb).raw) < 1e-12);
    CHECK(std::abs(zipf(va).raw - zipf(vb).raw) < 1e-12);
    CHECK(std::abs(moment(va).raw - moment(vb).raw) < 1e-12);
    CHECK(std::abs(moment_ratio(va).raw - moment_ratio(vb).raw) < 1e-12);
    CHECK(std::abs(peng_moment(va).raw - peng_moment(vb).raw) < 1e-12);
}

TEST_CASE("desk-scale consistency of every gamma>0 estimator") {
    const auto grid = pareto_grid(1000, 0.5);
    const auto view = make_tail_view(grid, 100);
    for (auto id : kAllEstimators) {
        // the printed WW.L form is not a gamma estimator, and noise-free
        // quantiles leave the ERM (gamma, b) split unidentified; ERM is
        // checked on a random sample below
        if (id == Estimator::ww_l || id == Estimator::erm) continue;
        const auto est = evaluate(view, id);
        INFO("estimator ", estimator_name(id));
        CHECK(std::abs(est.raw - 0.5) < 0.1);
    }
    const auto cs = ww_leurgans(view, LeurgansVariant::consecutive_spacings);
    CHECK(std::abs(cs.raw - 0.5) < 0.1);

    // ERM on random samples (the plug-in rho split wobbles on occasional
    // seeds, so assert the median over several)
    std::vector<double> erm_errs;
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
        const auto noisy = make_tail_view(random_pareto(seed * 3331, 1000, 0.5), 100);
        erm_errs.push_back(std::abs(evaluate(noisy, Estimator::erm).raw - 0.5));
    }
    std::sort(erm_errs.begin(), erm_errs.end());
    CHECK(erm_errs[4] < 0.1);
}
