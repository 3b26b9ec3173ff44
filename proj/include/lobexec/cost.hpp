#pragma once

#include "lobexec/impact.hpp"
#include "lobexec/liquidity.hpp"

namespace lobexec {

/// Execution cost split into its three additive parts.
struct CostBreakdown {
    double unaffected;  // A0 * x
    double permanent;   // gamma/2 * x^2
    double temporary;   // impact cost J
    double total;
};

/// Temporary impact cost sum_n (D_n + K_n/2 xi_n) xi_n of a buys-only
/// strategy with initial deviation delta0 >= 0.
double temp_cost(const LiquidityProfile& profile, const DiscreteStrategy& strategy, double delta0);

/// Total cost in the dynamic spread model: buys hit the ask leg, sells the
/// bid leg, each at the average fill price with book height 1/(gamma + K).
double total_cost_dynamic_spread(const LiquidityProfile& profile, const DiscreteStrategy& buys,
                                 const DiscreteStrategy& sells, double d0, double dtilde0,
                                 double a0, double b0);

/// Temporary impact cost of a signed strategy in the zero spread model.
double zero_spread_cost(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                        double delta0);

/// Independent route to the same cost via the deviation path:
///   1/2 [ D_{T+}^2/K_T - delta^2/K_0 + int (K' + 2 rho K) D^2/K^2 dt ].
/// Composite trapezoid on a refinement of the strategy grid with the decay
/// applied exactly between trades. Requires a differentiable profile.
double cost_via_impact_identity(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                                double delta0, std::size_t eval_nodes = 10000);

/// Breakdown (A0 x, gamma/2 x^2, temp cost, total) of a buys-only strategy.
CostBreakdown cost_decomposition(const LiquidityProfile& profile, const DiscreteStrategy& buys,
                                 double delta0, double a0);

}  // namespace lobexec
