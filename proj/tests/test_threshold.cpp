#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "censtail/threshold.hpp"

using namespace censtail;

namespace {

KPath path_of(Estimator id, int k_min, int k_max, const std::function<double(int)>& f) {
    KPath p;
    p.id = id;
    for (int k = k_min; k <= k_max; ++k) {
        p.k_values.push_back(k);
        p.estimates.push_back(f(k));
    }
    return p;
}

}  // namespace

TEST_CASE("identical paths tie-break to the smallest k") {
    const auto f = [](int k) { return 0.3 + 0.001 * k; };
    const auto a = path_of(Estimator::hill, 10, 50, f);
    const auto b = path_of(Estimator::mom, 10, 50, f);
    CHECK(k_opt({a, b}, 10, 50) == 10);
    CHECK(agreement_objective({a, b}, 25) == 0.0);
}

TEST_CASE("a unique agreement point wins") {
    const auto a = path_of(Estimator::hill, 1, 100, [](int k) { return 0.5 + 0.01 * (k - 42); });
    const auto b = path_of(Estimator::mom, 1, 100, [](int k) { return 0.5 - 0.01 * (k - 42); });
    CHECK(k_opt({a, b}, 1, 100) == 42);
}

TEST_CASE("objective is invariant to path order and common shifts") {
    const auto a = path_of(Estimator::hill, 5, 30, [](int k) { return 0.4 + 0.003 * k; });
    const auto b = path_of(Estimator::mom, 5, 30, [](int k) { return 0.6 - 0.002 * k; });
    const auto c = path_of(Estimator::erm, 5, 30, [](int k) { return 0.5 + 0.03 * std::sin(k); });

    CHECK(k_opt({a, b, c}, 5, 30) == k_opt({c, a, b}, 5, 30));
    for (int k : {5, 17, 30})
        CHECK(agreement_objective({a, b, c}, k) ==
              doctest::Approx(agreement_objective({c, b, a}, k)).epsilon(1e-15));

    auto shifted_a = a;
    auto shifted_b = b;
    auto shifted_c = c;
    for (std::size_t i = 0; i < shifted_a.estimates.size(); ++i) {
        shifted_a.estimates[i] += 10.0;
        shifted_b.estimates[i] += 10.0;
        shifted_c.estimates[i] += 10.0;
    }
    for (int k : {5, 17, 30})
        CHECK(agreement_objective({shifted_a, shifted_b, shifted_c}, k) ==
              doctest::Approx(agreement_objective({a, b, c}, k)).epsilon(1e-9));
}

TEST_CASE("coverage gaps and bad arguments are rejected") {
    const auto a = path_of(Estimator::hill, 10, 50, [](int) { return 0.5; });
    auto gappy = path_of(Estimator::mom, 10, 50, [](int) { return 0.5; });
    gappy.k_values.erase(gappy.k_values.begin() + 20);
    gappy.estimates.erase(gappy.estimates.begin() + 20);
    CHECK_THROWS_AS(k_opt({a, gappy}, 10, 50), Error);

    CHECK_THROWS_AS(k_opt({a}, 10, 50), Error);
    CHECK_THROWS_AS(k_opt({a, a}, 50, 10), Error);
}
