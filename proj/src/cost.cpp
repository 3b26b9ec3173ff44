#include "lobexec/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobexec {

double temp_cost(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                 double delta0) {
    for (double xi : strategy.trades)
        if (xi < 0.0) throw std::invalid_argument("temp_cost: trades must be nonnegative");
    if (delta0 < 0.0) throw std::invalid_argument("temp_cost: delta0 must be nonnegative");
    return zero_spread_cost(profile, strategy, delta0);
}

double zero_spread_cost(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                        double delta0) {
    ImpactPath path = zero_spread_impact(profile, strategy, delta0);
    double cost = 0.0;
    for (std::size_t n = 0; n < strategy.trades.size(); ++n) {
        double xi = strategy.trades[n];
        if (xi == 0.0) continue;
        double k = profile.impact(strategy.grid.nodes[n]);
        cost += (path.values[n] + 0.5 * k * xi) * xi;
    }
    return cost;
}

double total_cost_dynamic_spread(const LiquidityProfile& profile, const DiscreteStrategy& buys,
                                 const DiscreteStrategy& sells, double d0, double dtilde0,
                                 double a0, double b0) {
    if (b0 > a0) throw std::invalid_argument("total_cost_dynamic_spread: requires B0 <= A0");
    auto [ask, bid] = two_sided_impact(profile, buys, sells, d0, dtilde0);
    const double gamma = profile.permanent_impact();
    double cost = 0.0;
    for (std::size_t n = 0; n < buys.trades.size(); ++n) {
        double k = profile.impact(buys.grid.nodes[n]);
        double half_depth = 0.5 * (gamma + k);  // 1/(2 q_n)
        double xi = buys.trades[n];
        double eta = sells.trades[n];
        if (xi != 0.0) cost += (a0 + ask.values[n] + half_depth * xi) * xi;
        if (eta != 0.0) cost -= (b0 - bid.values[n] - half_depth * eta) * eta;
    }
    return cost;
}

double cost_via_impact_identity(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                                double delta0, std::size_t eval_nodes) {
    const auto& nodes = strategy.grid.nodes;
    const double T = profile.horizon();
    const double k0 = profile.impact(nodes.front());
    const double kT = profile.impact(T);

    ImpactPath path = zero_spread_impact(profile, strategy, delta0);

    auto integrand = [&](double t, double d) {
        auto [kp, kpp] = profile.impact_derivatives(t);
        (void)kpp;
        double k = profile.impact(t);
        return (kp + 2.0 * profile.resilience(t) * k) * d * d / (k * k);
    };

    // Trapezoid per grid cell, subdivided so the overall resolution matches
    // eval_nodes; D decays exactly from its post-trade value within each cell.
    double integral = 0.0;
    for (std::size_t n = 0; n + 1 < nodes.size(); ++n) {
        double t_lo = nodes[n];
        double t_hi = nodes[n + 1];
        double d_post = path.values[n] + profile.impact(t_lo) * strategy.trades[n];
        std::size_t sub = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil((t_hi - t_lo) / T * static_cast<double>(eval_nodes))));
        double prev_t = t_lo;
        double prev_g = integrand(t_lo, d_post);
        for (std::size_t j = 1; j <= sub; ++j) {
            double t = t_lo + (t_hi - t_lo) * static_cast<double>(j) / static_cast<double>(sub);
            double d = d_post * profile.decay(t_lo, t);
            double g = integrand(t, d);
            integral += 0.5 * (prev_g + g) * (t - prev_t);
            prev_t = t;
            prev_g = g;
        }
    }

    return 0.5 * (path.terminal * path.terminal / kT - delta0 * delta0 / k0 + integral);
}

CostBreakdown cost_decomposition(const LiquidityProfile& profile, const DiscreteStrategy& buys,
                                 double delta0, double a0) {
    double x = buys.total();
    double j = temp_cost(profile, buys, delta0);
    CostBreakdown out;
    out.unaffected = a0 * x;
    out.permanent = 0.5 * profile.permanent_impact() * x * x;
    out.temporary = j;
    out.total = out.unaffected + out.permanent + out.temporary;
    return out;
}

}  // namespace lobexec
