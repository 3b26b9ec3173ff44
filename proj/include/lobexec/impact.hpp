#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lobexec/liquidity.hpp"

namespace lobexec {

/// Trade schedule on a grid: trades[n] executes at nodes[n]. Signed trades are
/// allowed for zero-spread use; one-sided and dynamic-spread paths require
/// nonnegative entries.
struct DiscreteStrategy {
    TimeGrid grid;
    std::vector<double> trades;  // size grid.nodes.size()

    double total() const;
};

/// Impulse-at-the-ends strategy with an absolutely continuous part on (0, T),
/// stored as a dense tabulation of the trade rate.
struct ContinuousStrategy {
    double initial_trade = 0.0;
    std::vector<double> rate_times;   // covering (0, T)
    std::vector<double> rate_values;  // shares per unit time
    double terminal_trade = 0.0;

    /// Map onto a uniform evaluation grid; interior cells get the trapezoid
    /// integral of the rate. Error is O(1/steps).
    DiscreteStrategy discretize(const LiquidityProfile& profile, std::size_t steps = 10000) const;

    double total() const;
};

/// Price deviation along the grid. values[n] is the deviation immediately
/// before the trade at nodes[n] (D is caglad); terminal holds D at T+,
/// after the last trade.
struct ImpactPath {
    std::vector<double> times;
    std::vector<double> values;
    double terminal = 0.0;
};

/// Ask-side deviation for a buys-only strategy with gamma = 0 semantics:
/// D_{n+1} = (D_n + K_n xi_n) a_n. Requires delta0 >= 0 and trades >= 0.
ImpactPath one_sided_impact(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                            double delta0);

/// Ask and bid deviations in the dynamic spread model for simultaneous buy and
/// sell schedules on the same grid.
std::pair<ImpactPath, ImpactPath> two_sided_impact(const LiquidityProfile& profile,
                                                   const DiscreteStrategy& buys,
                                                   const DiscreteStrategy& sells, double d0,
                                                   double dtilde0);

/// Deviation in the zero spread model; trades and delta0 may be any reals.
ImpactPath zero_spread_impact(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                              double delta0);

}  // namespace lobexec
