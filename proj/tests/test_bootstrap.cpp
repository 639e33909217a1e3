#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "censtail/bootstrap.hpp"
#include "censtail/core.hpp"
#include "censtail/estimators.hpp"
#include "censtail/rng.hpp"

using namespace censtail;

namespace {

CensoredSample mixed_sample(std::size_t n, std::size_t censored, std::uint64_t seed) {
    rng::Engine eng(seed);
    std::vector<double> z(n);
    std::vector<unsigned char> delta(n, 1);
    for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(eng.unit_open(), -0.5);
    for (std::size_t i = 0; i < censored; ++i) delta[i] = 0;
    return CensoredSample(std::move(z), std::move(delta));
}

void check_partition(const BlockPlan& plan, std::size_t n) {
    std::set<std::uint32_t> seen;
    std::size_t total = 0;
    for (const auto& block : plan.blocks) {
        total += block.size();
        for (auto idx : block) {
            CHECK(idx < n);
            CHECK(seen.insert(idx).second);  // no index repeated
        }
    }
    CHECK(total == n);
    CHECK(seen.size() == n);
}

}  // namespace

TEST_CASE("block arithmetic for the worked examples") {
    {
        const auto s = mixed_sample(10, 2, 1);
        const auto plan = plan_blocks(s, 1, 99);
        CHECK(plan.s == 5);
        CHECK(plan.m == 2);
        REQUIRE(plan.blocks.size() == 2);
        for (const auto& block : plan.blocks) {
            CHECK(block.size() == 5);
            int censored = 0;
            for (auto idx : block) censored += s.delta()[idx] == 0 ? 1 : 0;
            CHECK(censored == 1);
        }
        check_partition(plan, 10);
    }
    {
        const auto s = mixed_sample(10, 3, 2);
        const auto plan = plan_blocks(s, 1, 99);
        CHECK(plan.s == 4);
        CHECK(plan.m == 3);
        REQUIRE(plan.blocks.size() == 3);
        CHECK(plan.blocks[0].size() == 4);
        CHECK(plan.blocks[1].size() == 4);
        CHECK(plan.blocks[2].size() == 2);
        check_partition(plan, 10);
    }
}

TEST_CASE("plans partition the indices for arbitrary shapes") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const std::size_t n = 20 + seed * 7 % 80;
        const std::size_t censored = 1 + seed % (n / 2);
        const auto s = mixed_sample(n, censored, seed);
        for (int d : {1, 2}) {
            if (static_cast<std::size_t>(d) > std::min(censored, n - censored)) continue;
            const auto plan = plan_blocks(s, d, seed * 13);
            check_partition(plan, n);
            CHECK(plan.blocks.size() == plan.m);
            for (std::size_t b = 0; b + 1 < plan.blocks.size(); ++b)
                CHECK(plan.blocks[b].size() == plan.s);
            // every block holds at least one minority-class observation
            for (const auto& block : plan.blocks) {
                int minority = 0;
                for (auto idx : block) {
                    const bool is_censored = s.delta()[idx] == 0;
                    if (is_censored == plan.censored_is_minority) ++minority;
                }
                CHECK(minority >= 1);
            }
        }
    }
}

TEST_CASE("majority-heavy censoring anchors blocks on the noncensored class") {
    const auto s = mixed_sample(1000, 650, 3);  // 65% censored
    const auto plan = plan_blocks(s, 1, 17);
    CHECK_FALSE(plan.censored_is_minority);
    check_partition(plan, 1000);
    CHECK(plan.s == 3);  // ceil(1000 / 350)
    CHECK(plan.m == 334);
}

TEST_CASE("degenerate samples are rejected") {
    const CensoredSample all_events({1.0, 2.0, 3.0}, {1, 1, 1});
    const CensoredSample all_censored({1.0, 2.0, 3.0}, {0, 0, 0});
    for (const auto* s : {&all_events, &all_censored}) {
        try {
            plan_blocks(*s, 1, 1);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::degenerate_sample);
        }
    }
    const auto s = mixed_sample(10, 2, 4);
    CHECK_THROWS_AS(plan_blocks(s, 3, 1), Error);  // d exceeds the minority class
    CHECK_THROWS_AS(plan_blocks(s, 0, 1), Error);
}

TEST_CASE("single-block plans resample to a permutation") {
    const auto s = mixed_sample(12, 2, 5);
    const auto plan = plan_blocks(s, 2, 8);  // d = n_minority forces s = n
    CHECK(plan.m == 1);
    const auto rs = resample(plan, s, 123);
    CHECK(rs.size() == s.size());
    auto a = rs.z();
    auto b = s.z();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("every resample keeps both censoring classes") {
    const auto s = mixed_sample(10, 2, 6);
    const auto plan = plan_blocks(s, 1, 31);
    for (int i = 0; i < 1000; ++i) {
        const auto rs = resample(plan, s, static_cast<std::uint64_t>(i));
        CHECK(rs.size() == 10);
        int censored = 0, events = 0;
        for (auto d : rs.delta()) (d ? events : censored) += 1;
        CHECK(censored >= 1);
        CHECK(events >= 1);
    }
}

TEST_CASE("the conditional guarantee survives a single-class remainder block") {
    // n = 7 with 3 minority and d = 1 gives sizes (3, 3, 1) and a remainder
    // block holding one minority observation only
    const auto s = mixed_sample(7, 3, 12);
    const auto plan = plan_blocks(s, 1, 5);
    REQUIRE(plan.m == 3);
    CHECK(plan.blocks[2].size() == 1);
    for (int i = 0; i < 2000; ++i) {
        const auto rs = resample(plan, s, static_cast<std::uint64_t>(i) * 7919);
        int censored = 0, events = 0;
        for (auto d : rs.delta()) (d ? events : censored) += 1;
        CHECK(censored >= 1);
        CHECK(events >= 1);
    }
}

TEST_CASE("resampling is deterministic in the seed") {
    const auto s = mixed_sample(40, 10, 7);
    const auto plan = plan_blocks(s, 1, 77);
    const auto a = resample(plan, s, 1001);
    const auto b = resample(plan, s, 1001);
    CHECK(a.z() == b.z());
    CHECK(a.delta() == b.delta());
    const auto c = resample(plan, s, 1002);
    CHECK(a.z() != c.z());
}

TEST_CASE("percentile interval basics") {
    const auto s = mixed_sample(60, 12, 9);

    SUBCASE("constant statistic collapses the interval") {
        const auto ci = bootstrap_ci(s, 20, 50, 0.05, 1, 11,
                                     [](const CensoredSample&, int) { return 0.42; });
        CHECK(ci.lower == 0.42);
        CHECK(ci.upper == 0.42);
        CHECK(ci.replicates == 50);
        CHECK(ci.dropped == 0);
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS(bootstrap_ci(s, Estimator::hill, 20, 1, 0.05, 1, 11), Error);
        CHECK_THROWS_AS(bootstrap_ci(s, Estimator::hill, 20, 100, 0.0, 1, 11), Error);
        CHECK_THROWS_AS(bootstrap_ci(s, Estimator::hill, 20, 100, 1.0, 1, 11), Error);
    }

    SUBCASE("interval ordering and nominal monotonicity") {
        const auto narrow = bootstrap_ci(s, Estimator::hill, 20, 400, 0.10, 1, 13);
        const auto wide = bootstrap_ci(s, Estimator::hill, 20, 400, 0.05, 1, 13);
        CHECK(narrow.lower <= narrow.upper);
        CHECK(wide.lower <= narrow.lower);
        CHECK(narrow.upper <= wide.upper);
        CHECK(wide.level == doctest::Approx(0.95));
    }

    SUBCASE("failing statistics trip the stability guard") {
        try {
            bootstrap_ci(s, 20, 50, 0.05, 1, 11, [](const CensoredSample&, int) -> double {
                raise(ErrorCode::domain, "always fails");
            });
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::unstable_bootstrap);
        }
    }
}

TEST_CASE("single-estimator interval equals the shared-resample path") {
    const auto s = mixed_sample(80, 20, 21);
    const std::uint64_t seed = 20240517;
    const auto single = bootstrap_ci(s, Estimator::hill, 25, 60, 0.05, 1, seed);

    const auto reps = bootstrap_replicates(s, {Estimator::hill, Estimator::mom}, 25, 60, 1, seed);
    auto values = reps.values[0];
    std::sort(values.begin(), values.end());
    const auto single_again = bootstrap_ci(s, Estimator::hill, 25, 60, 0.05, 1, seed);
    CHECK(single.lower == single_again.lower);
    CHECK(values.size() == static_cast<std::size_t>(single.replicates));

    // same replicate values regardless of which estimators ride along
    const auto solo = bootstrap_replicates(s, {Estimator::hill}, 25, 60, 1, seed);
    CHECK(solo.values[0] == reps.values[0]);
}
