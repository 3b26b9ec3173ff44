#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "lobexec/dp.hpp"
#include "lobexec/impact.hpp"
#include "lobexec/liquidity.hpp"

namespace lobexec {

/// Raised when a profile fails an analytic applicability condition; carries
/// the first violating time.
class ConditionViolated : public std::runtime_error {
public:
    ConditionViolated(const std::string& what, double t)
        : std::runtime_error(what + " (first violation at t = " + std::to_string(t) + ")"),
          violating_time(t) {}
    double violating_time;
};

/// The ratio f = (K' + rho K) / (K' + 2 rho K) and its derivative, tabulated
/// on a uniform sampling grid. Defined only while K' + 2 rho K > 0.
struct FProfile {
    std::vector<double> times;
    std::vector<double> f;
    std::vector<double> f_slope;
    bool valid = true;
    double first_violation = 0.0;  // meaningful when !valid

    double eval(double t) const;
    double eval_slope(double t) const;
};

enum class Regime { Clean, TransactionTriggered, PriceManipulation, Boundary };

std::string to_string(Regime regime);

/// Buy-then-sell round trip of one share and its zero-spread cost.
struct RoundTrip {
    double t;
    double eps;
    double cost;
};

struct ManipulationVerdict {
    Regime regime;
    std::optional<double> witness_time;    // violating sample time
    std::optional<RoundTrip> round_trip;   // profitable witness when regime == PriceManipulation
};

FProfile f_profile(const LiquidityProfile& profile, std::size_t samples = 10000);

/// Sampling-based regime classification:
///   PriceManipulation  if K' + 2 rho K < 0 somewhere,
///   TransactionTriggered if f_0 < 0 or f' + rho f < 0 somewhere,
///   Boundary           if min(K' + 2 rho K) is within 1e-9 of zero,
///   Clean              otherwise.
ManipulationVerdict classify_manipulation(const LiquidityProfile& profile,
                                          std::size_t samples = 10000);

struct ZeroSpreadSolution {
    ContinuousStrategy strategy;
    double value;
    double deviation;  // the constant deviation level delta-updown
};

/// Unique optimal zero-spread strategy, its cost and the deviation level.
/// Requires K' + 2 rho K > 0 on [0, T]; throws ConditionViolated otherwise.
ZeroSpreadSolution zero_spread_optimal(const LiquidityProfile& profile, double delta, double x,
                                       std::size_t panels = 10000);

/// Closed-form barrier c(t) = (1/f_t)(int_t^T (f' + rho f)/K + (1 - f_T)/K_T);
/// +inf where f_t = 0, and c(T) = 0. Requires K' + rho K >= 0 and
/// f' + rho f >= 0 on the sampling grid.
double continuous_barrier(const LiquidityProfile& profile, double t, std::size_t panels = 10000);

/// Sufficient (sampling-based) check for an infinite barrier at t: either
/// K' + rho K < 0 at t, or some later sample t2 has K_t exp(-int rho) > K_t2.
bool infinite_barrier_check(const LiquidityProfile& profile, double t,
                            std::size_t samples = 10000);

/// Regime interval endpoints in the family parameter: price manipulation on
/// (pm_lo, pm_hi), transaction-triggered on (pm_hi, ttpm_hi), clean at and
/// above ttpm_hi.
struct RegimeIntervals {
    double pm_lo;
    double pm_hi;
    double ttpm_hi;
};

/// Literal closed forms for the three analytic families, bypassing quadrature.
struct AnalyticExample {
    ContinuousStrategy strategy;
    std::function<double(double)> barrier;            // c(t), +inf allowed
    std::optional<RegimeIntervals> regimes;           // none for constant K
    std::optional<std::pair<double, double>> infinite_barrier_interval;  // straight line only
};

AnalyticExample analytic_example_constant(double kappa, double rho, double horizon, double x);
AnalyticExample analytic_example_exponential(double kappa, double nu, double rho, double horizon,
                                             double x);
AnalyticExample analytic_example_straight_line(double kappa, double m, double rho, double horizon,
                                               double x);

/// Buy one share at t, sell it at t + eps, plus the round trip's zero-spread
/// cost (K_t + K_{t+eps})/2 - K_t exp(-int rho).
std::pair<DiscreteStrategy, double> round_trip_witness(const LiquidityProfile& profile, double t,
                                                       double eps);

}  // namespace lobexec
