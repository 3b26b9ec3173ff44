#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lobexec/closedform.hpp"
#include "lobexec/cost.hpp"
#include "lobexec/dp.hpp"
#include "suites.hpp"

using namespace lobexec;

namespace {

LiquidityProfile constant_profile() {
    return LiquidityProfile::constant(1.0, Resilience::constant(2.0), 1.0);
}

LiquidityProfile exponential_profile(double nu) {
    return LiquidityProfile::exponential(1.0, nu, Resilience::constant(2.0), 1.0);
}

}  // namespace

TEST_CASE("f_profile") {
    SUBCASE("constant K: f = 1/2, f' = 0") {
        FProfile fp = f_profile(constant_profile(), 100);
        REQUIRE(fp.valid);
        for (std::size_t i = 0; i < fp.times.size(); ++i) {
            CHECK(fp.f[i] == doctest::Approx(0.5));
            CHECK(fp.f_slope[i] == doctest::Approx(0.0));
        }
    }
    SUBCASE("exponential: f = (nu+1)/(nu+2)") {
        for (double nu : {-1.5, -1.0, 0.5, 3.0}) {
            FProfile fp = f_profile(exponential_profile(nu), 100);
            REQUIRE(fp.valid);
            for (double f : fp.f) CHECK(f == doctest::Approx((nu + 1.0) / (nu + 2.0)).epsilon(1e-12));
        }
    }
    SUBCASE("straight-line plug-in at t = 0") {
        auto p = LiquidityProfile::straight_line(1.0, 0.5, Resilience::constant(2.0), 1.0);
        FProfile fp = f_profile(p, 100);
        CHECK(fp.f.front() == doctest::Approx(5.0 / 9.0));
    }
    SUBCASE("fast-falling exponential is flagged invalid") {
        FProfile fp = f_profile(exponential_profile(-2.5), 100);
        CHECK_FALSE(fp.valid);
        CHECK(fp.first_violation == 0.0);
    }
}

TEST_CASE("classify_manipulation") {
    SUBCASE("constant K is clean") {
        CHECK(classify_manipulation(constant_profile()).regime == Regime::Clean);
    }
    SUBCASE("exponential regime table") {
        for (double nu : {-1.0, 0.5, 3.0})
            CHECK(classify_manipulation(exponential_profile(nu)).regime == Regime::Clean);
        CHECK(classify_manipulation(exponential_profile(-1.5)).regime ==
              Regime::TransactionTriggered);
        ManipulationVerdict pm = classify_manipulation(exponential_profile(-2.5));
        CHECK(pm.regime == Regime::PriceManipulation);
        REQUIRE(pm.round_trip.has_value());
        CHECK(pm.round_trip->cost < 0.0);
        auto [witness, cost] = round_trip_witness(exponential_profile(-2.5), pm.round_trip->t,
                                                  pm.round_trip->eps);
        CHECK(zero_spread_cost(exponential_profile(-2.5), witness, 0.0) ==
              doctest::Approx(cost).epsilon(1e-12));
        CHECK(cost == doctest::Approx(pm.round_trip->cost).epsilon(1e-12));
    }
    SUBCASE("exponential nu = -2 sits on the boundary") {
        CHECK(classify_manipulation(exponential_profile(-2.0)).regime == Regime::Boundary);
    }
    SUBCASE("straight-line regimes follow the computed thresholds") {
        auto line = [](double m) {
            return LiquidityProfile::straight_line(1.0, m, Resilience::constant(2.0), 1.0);
        };
        // kappa=1, rho=2, T=1: PM on (-1, -0.8), TTPM on (-0.8, -4/7), clean above
        CHECK(classify_manipulation(line(-0.9)).regime == Regime::PriceManipulation);
        CHECK(classify_manipulation(line(-0.7)).regime == Regime::TransactionTriggered);
        CHECK(classify_manipulation(line(-0.4)).regime == Regime::Clean);
        CHECK(classify_manipulation(line(0.5)).regime == Regime::Clean);
    }
}

TEST_CASE("zero_spread_optimal") {
    SUBCASE("constant K reproduces (25, rate 50, 25) and value 2500") {
        ZeroSpreadSolution sol = zero_spread_optimal(constant_profile(), 0.0, 100.0);
        CHECK(sol.strategy.initial_trade == doctest::Approx(25.0).epsilon(1e-10));
        CHECK(sol.strategy.terminal_trade == doctest::Approx(25.0).epsilon(1e-10));
        for (double r : sol.strategy.rate_values) CHECK(r == doctest::Approx(50.0).epsilon(1e-10));
        CHECK(sol.deviation == doctest::Approx(50.0).epsilon(1e-10));
        CHECK(sol.value == doctest::Approx(2500.0).epsilon(1e-10));
    }
    SUBCASE("nu = -1: buy everything at T") {
        ZeroSpreadSolution sol = zero_spread_optimal(exponential_profile(-1.0), 0.0, 10.0);
        CHECK(sol.strategy.initial_trade == doctest::Approx(0.0).epsilon(1e-9));
        for (double r : sol.strategy.rate_values) CHECK(std::abs(r) < 1e-7);
        CHECK(sol.strategy.terminal_trade == doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("precondition violation throws with the violating time") {
        CHECK_THROWS_AS(zero_spread_optimal(exponential_profile(-2.5), 0.0, 1.0),
                        ConditionViolated);
    }
}

TEST_CASE("zero-spread value identity against realized cost") {
    for (double nu : {0.0, 0.5, 1.5}) {
        LiquidityProfile p = nu == 0.0 ? constant_profile() : exponential_profile(nu);
        ZeroSpreadSolution sol = zero_spread_optimal(p, 0.3, 100.0);
        DiscreteStrategy ds = sol.strategy.discretize(p, 200000);
        CHECK(zero_spread_cost(p, ds, 0.3) ==
              doctest::Approx(sol.value).epsilon(1e-5));
    }
}

TEST_CASE("continuous_barrier") {
    SUBCASE("constant K: c(t) = (1 + rho (T - t)) / kappa") {
        auto p = constant_profile();
        CHECK(continuous_barrier(p, 0.0) == doctest::Approx(3.0).epsilon(1e-8));
        CHECK(continuous_barrier(p, 0.5) == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(continuous_barrier(p, 1.0) == 0.0);
    }
    SUBCASE("nu = -1: infinite before T") {
        auto p = exponential_profile(-1.0);
        CHECK(std::isinf(continuous_barrier(p, 0.0)));
        CHECK(std::isinf(continuous_barrier(p, 0.9)));
        CHECK(continuous_barrier(p, 1.0) == 0.0);
    }
    SUBCASE("the barrier jumps at T") {
        auto p = constant_profile();
        // limit (1 - f_T)/(f_T K_T) = 1 while c(T) = 0
        CHECK(continuous_barrier(p, 1.0 - 1e-6) == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("condition violations are refused") {
        CHECK_THROWS_AS(continuous_barrier(exponential_profile(-1.5), 0.0), ConditionViolated);
    }
}

TEST_CASE("infinite_barrier_check") {
    CHECK(infinite_barrier_check(exponential_profile(-1.5), 0.0));
    CHECK(infinite_barrier_check(exponential_profile(-1.5), 0.5));
    CHECK_FALSE(infinite_barrier_check(constant_profile(), 0.0));
    CHECK_FALSE(infinite_barrier_check(constant_profile(), 0.5));
    // straight line inside the infinite-barrier interval
    auto p = LiquidityProfile::straight_line(1.0, -0.93, Resilience::constant(2.0), 1.0);
    CHECK(infinite_barrier_check(p, 0.0));
}

TEST_CASE("analytic_example_constant matches quadrature to 1e-9") {
    AnalyticExample ex = analytic_example_constant(1.0, 2.0, 1.0, 100.0);
    ZeroSpreadSolution sol = zero_spread_optimal(constant_profile(), 0.0, 100.0);
    CHECK(ex.strategy.initial_trade == doctest::Approx(sol.strategy.initial_trade).epsilon(1e-9));
    CHECK(ex.strategy.terminal_trade == doctest::Approx(sol.strategy.terminal_trade).epsilon(1e-9));
    CHECK(ex.strategy.rate_values.front() == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(ex.barrier(0.0) == doctest::Approx(3.0));
    CHECK(ex.barrier(0.5) == doctest::Approx(2.0));
    CHECK(ex.barrier(1.0) == 0.0);
    CHECK_THROWS(analytic_example_constant(-1.0, 2.0, 1.0, 100.0));
}

TEST_CASE("analytic_example_exponential") {
    AnalyticExample ex = analytic_example_exponential(1.0, 0.5, 2.0, 1.0, 100.0);
    double denom = 2.25 - std::exp(-1.0);
    CHECK(ex.strategy.initial_trade == doctest::Approx(100.0 * 0.5 * 1.5 / denom));
    CHECK(ex.strategy.initial_trade == doctest::Approx(39.8486).epsilon(1e-4));

    // regimes: PM below -2, TTPM on (-2, -1), clean at and above -1
    REQUIRE(ex.regimes.has_value());
    CHECK(ex.regimes->pm_hi == doctest::Approx(-2.0));
    CHECK(ex.regimes->ttpm_hi == doctest::Approx(-1.0));

    // cross-check strategy and barrier against the quadrature route
    ZeroSpreadSolution sol = zero_spread_optimal(exponential_profile(0.5), 0.0, 100.0);
    CHECK(ex.strategy.initial_trade == doctest::Approx(sol.strategy.initial_trade).epsilon(1e-8));
    CHECK(ex.strategy.terminal_trade == doctest::Approx(sol.strategy.terminal_trade).epsilon(1e-8));
    for (double t : {0.0, 0.3, 0.7})
        CHECK(ex.barrier(t) ==
              doctest::Approx(continuous_barrier(exponential_profile(0.5), t)).epsilon(1e-7));

    // nu = -1 buys everything at T; barrier infinite before T
    AnalyticExample edge = analytic_example_exponential(1.0, -1.0, 2.0, 1.0, 100.0);
    CHECK(edge.strategy.initial_trade == doctest::Approx(0.0));
    CHECK(edge.strategy.terminal_trade == doctest::Approx(100.0));
    CHECK(std::isinf(edge.barrier(0.5)));

    CHECK_THROWS(analytic_example_exponential(1.0, -2.5, 2.0, 1.0, 100.0));
}

TEST_CASE("analytic_example_straight_line") {
    AnalyticExample ex = analytic_example_straight_line(1.0, 0.5, 2.0, 1.0, 100.0);
    REQUIRE(ex.regimes.has_value());
    // ordering -kappa/T < -2 rho kappa/(1+2 rho T) < -2 rho kappa/(3+2 rho T)
    CHECK(ex.regimes->pm_lo < ex.regimes->pm_hi);
    CHECK(ex.regimes->pm_hi < ex.regimes->ttpm_hi);
    CHECK(ex.regimes->pm_lo == doctest::Approx(-1.0));
    CHECK(ex.regimes->pm_hi == doctest::Approx(-0.8));
    CHECK(ex.regimes->ttpm_hi == doctest::Approx(-4.0 / 7.0));
    REQUIRE(ex.infinite_barrier_interval.has_value());
    CHECK(ex.infinite_barrier_interval->first == doctest::Approx(-1.0));
    CHECK(ex.infinite_barrier_interval->second == doctest::Approx(-(1.0 - std::exp(-2.0))));

    // strategy and barrier agree with the quadrature route
    auto p = LiquidityProfile::straight_line(1.0, 0.5, Resilience::constant(2.0), 1.0);
    ZeroSpreadSolution sol = zero_spread_optimal(p, 0.0, 100.0);
    CHECK(ex.strategy.initial_trade == doctest::Approx(sol.strategy.initial_trade).epsilon(1e-7));
    CHECK(ex.strategy.terminal_trade == doctest::Approx(sol.strategy.terminal_trade).epsilon(1e-7));
    for (double t : {0.0, 0.4, 0.9})
        CHECK(ex.barrier(t) == doctest::Approx(continuous_barrier(p, t)).epsilon(1e-6));

    CHECK_THROWS(analytic_example_straight_line(1.0, -1.1, 2.0, 1.0, 100.0));
    CHECK_THROWS(analytic_example_straight_line(1.0, -0.9, 2.0, 1.0, 100.0));  // PM regime
}

TEST_CASE("round_trip_witness") {
    auto p = constant_profile();
    auto [s1, c1] = round_trip_witness(p, 0.0, 0.1);
    CHECK(c1 == doctest::Approx(1.0 - std::exp(-0.2)));
    CHECK(c1 > 0.0);
    CHECK(s1.total() == doctest::Approx(0.0));

    auto [s2, c2] = round_trip_witness(p, 0.0, 1.0);
    CHECK(c2 == doctest::Approx(1.0 - std::exp(-2.0)));

    auto pneg = exponential_profile(-2.5);
    auto [s3, c3] = round_trip_witness(pneg, 0.0, 0.05);
    CHECK(c3 < 0.0);

    CHECK_THROWS(round_trip_witness(p, 0.9, 0.2));
    CHECK_THROWS(round_trip_witness(p, 0.5, 0.0));
}

TEST_CASE("chi positivity: barrier tails stay positive for clean profiles") {
    std::mt19937 rng(51);
    for (int i = 0; i < 50; ++i) {
        LiquidityProfile p = testing::random_profile(rng, /*clean_only=*/true);
        for (double frac : {0.0, 0.25, 0.5, 0.75, 0.95}) {
            double c = continuous_barrier(p, frac * p.horizon(), 2000);
            CHECK(c > 0.0);
        }
    }
}

TEST_CASE("perturbing the optimum with round trips never helps") {
    std::mt19937 rng(52);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto p = exponential_profile(0.5);
    ZeroSpreadSolution sol = zero_spread_optimal(p, 0.0, 10.0);
    DiscreteStrategy base = sol.strategy.discretize(p, 2000);
    double base_cost = zero_spread_cost(p, base, 0.0);
    for (int i = 0; i < 100; ++i) {
        double z = 0.2 + 0.8 * u01(rng);
        std::size_t n1 = static_cast<std::size_t>(u01(rng) * 1500.0);
        std::size_t n2 = n1 + 400 + static_cast<std::size_t>(u01(rng) * 100.0);
        DiscreteStrategy perturbed{base.grid, base.trades};
        perturbed.trades[n1] += z;
        perturbed.trades[n2] -= z;
        CHECK(zero_spread_cost(p, perturbed, 0.0) >= base_cost - 1e-9);
    }
}

TEST_CASE("dynamic-spread transfer: dp matches the closed form for clean profiles") {
    auto p = exponential_profile(0.5);
    double x = 100.0, delta = 5.0;
    CHECK(delta <= x / continuous_barrier(p, 0.0));
    ZeroSpreadSolution sol = zero_spread_optimal(p, delta, x);
    SolveResult result = solve(p, TimeGrid::uniform(p, 1000));
    CHECK(dp_value(result, 0, delta, x) == doctest::Approx(sol.value).epsilon(0.01));
}
