#include "lobexec/impact.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lobexec {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": entries must be finite");
}

void require_nonnegative(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (x < 0.0) throw std::invalid_argument(std::string(what) + ": trades must be nonnegative");
}

void check_strategy(const DiscreteStrategy& s) {
    if (s.trades.size() != s.grid.nodes.size())
        throw std::invalid_argument("strategy: one trade per grid node expected");
    require_finite(s.trades, "strategy");
}

}  // namespace

double DiscreteStrategy::total() const {
    return std::accumulate(trades.begin(), trades.end(), 0.0);
}

double ContinuousStrategy::total() const {
    double mass = initial_trade + terminal_trade;
    for (std::size_t i = 1; i < rate_times.size(); ++i)
        mass += 0.5 * (rate_values[i] + rate_values[i - 1]) * (rate_times[i] - rate_times[i - 1]);
    return mass;
}

DiscreteStrategy ContinuousStrategy::discretize(const LiquidityProfile& profile,
                                                std::size_t steps) const {
    if (rate_times.size() != rate_values.size())
        throw std::invalid_argument("rate tabulation columns must match");
    TimeGrid grid = TimeGrid::uniform(profile, steps);
    std::vector<double> trades(grid.nodes.size(), 0.0);
    trades.front() = initial_trade;
    trades.back() = terminal_trade;
    if (!rate_times.empty()) {
        auto rate_at = [&](double t) {
            if (t <= rate_times.front()) return rate_values.front();
            if (t >= rate_times.back()) return rate_values.back();
            auto it = std::upper_bound(rate_times.begin(), rate_times.end(), t);
            std::size_t i = static_cast<std::size_t>(it - rate_times.begin()) - 1;
            double w = (t - rate_times[i]) / (rate_times[i + 1] - rate_times[i]);
            return rate_values[i] + w * (rate_values[i + 1] - rate_values[i]);
        };
        // mass of cell (t_{n-1}, t_n] is booked at t_n
        for (std::size_t n = 1; n < grid.nodes.size(); ++n) {
            double a = grid.nodes[n - 1];
            double b = grid.nodes[n];
            trades[n] += 0.5 * (rate_at(a) + rate_at(b)) * (b - a);
        }
    }
    return DiscreteStrategy{std::move(grid), std::move(trades)};
}

ImpactPath one_sided_impact(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                            double delta0) {
    check_strategy(strategy);
    require_nonnegative(strategy.trades, "one_sided_impact");
    if (delta0 < 0.0) throw std::invalid_argument("one_sided_impact: delta0 must be nonnegative");
    return zero_spread_impact(profile, strategy, delta0);
}

ImpactPath zero_spread_impact(const LiquidityProfile& profile, const DiscreteStrategy& strategy,
                              double delta0) {
    check_strategy(strategy);
    const auto& nodes = strategy.grid.nodes;
    ImpactPath path;
    path.times = nodes;
    path.values.resize(nodes.size());
    double d = delta0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        path.values[n] = d;
        d += profile.impact(nodes[n]) * strategy.trades[n];
        if (n + 1 < nodes.size()) d *= strategy.grid.decay_factors[n];
    }
    path.terminal = d;
    return path;
}

std::pair<ImpactPath, ImpactPath> two_sided_impact(const LiquidityProfile& profile,
                                                   const DiscreteStrategy& buys,
                                                   const DiscreteStrategy& sells, double d0,
                                                   double dtilde0) {
    check_strategy(buys);
    check_strategy(sells);
    if (!buys.grid.same_nodes(sells.grid))
        throw std::invalid_argument("two_sided_impact: buys and sells must share the same grid");
    require_nonnegative(buys.trades, "two_sided_impact buys");
    require_nonnegative(sells.trades, "two_sided_impact sells");
    if (d0 < 0.0 || dtilde0 < 0.0)
        throw std::invalid_argument("two_sided_impact: initial deviations must be nonnegative");

    const auto& nodes = buys.grid.nodes;
    const double gamma = profile.permanent_impact();

    // Deviation = permanent component + transient component. A buy xi adds
    // gamma*xi permanently and K*xi transiently to the ask; a sell adds
    // -gamma*xi permanently and gamma*xi transiently (the spread closes at
    // rate rho), and symmetrically for the bid.
    ImpactPath ask, bid;
    ask.times = nodes;
    bid.times = nodes;
    ask.values.resize(nodes.size());
    bid.values.resize(nodes.size());
    double perm = 0.0;
    double ask_trans = d0;
    double bid_trans = dtilde0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        ask.values[n] = perm + ask_trans;
        bid.values[n] = -perm + bid_trans;
        double k = profile.impact(nodes[n]);
        perm += gamma * (buys.trades[n] - sells.trades[n]);
        ask_trans += k * buys.trades[n] + gamma * sells.trades[n];
        bid_trans += k * sells.trades[n] + gamma * buys.trades[n];
        if (n + 1 < nodes.size()) {
            double a = buys.grid.decay_factors[n];
            ask_trans *= a;
            bid_trans *= a;
        }
    }
    ask.terminal = perm + ask_trans;
    bid.terminal = -perm + bid_trans;
    return {std::move(ask), std::move(bid)};
}

}  // namespace lobexec
