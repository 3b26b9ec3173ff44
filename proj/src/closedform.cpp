#include "lobexec/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobexec {

namespace {

constexpr double kBoundaryTol = 1e-9;

// K' + rho K and K' + 2 rho K at t.
std::pair<double, double> impact_growth(const LiquidityProfile& profile, double t) {
    auto [kp, kpp] = profile.impact_derivatives(t);
    (void)kpp;
    double rk = profile.resilience(t) * profile.impact(t);
    return {kp + rk, kp + 2.0 * rk};
}

double interp(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
    if (t <= ts.front()) return vs.front();
    if (t >= ts.back()) return vs.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
    double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return vs[i] + w * (vs[i + 1] - vs[i]);
}

// Composite Simpson of g over [lo, hi] with an even panel count.
double simpson(const std::function<double(double)>& g, double lo, double hi, std::size_t panels) {
    if (hi <= lo) return 0.0;
    if (panels % 2 == 1) ++panels;
    panels = std::max<std::size_t>(panels, 2);
    double h = (hi - lo) / static_cast<double>(panels);
    double sum = g(lo) + g(hi);
    for (std::size_t i = 1; i < panels; ++i)
        sum += g(lo + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::Clean: return "Clean";
        case Regime::TransactionTriggered: return "TransactionTriggered";
        case Regime::PriceManipulation: return "PriceManipulation";
        case Regime::Boundary: return "Boundary";
    }
    return "?";
}

double FProfile::eval(double t) const { return interp(times, f, t); }
double FProfile::eval_slope(double t) const { return interp(times, f_slope, t); }

FProfile f_profile(const LiquidityProfile& profile, std::size_t samples) {
    samples = std::max<std::size_t>(samples, 2);
    const double T = profile.horizon();
    FProfile out;
    out.times.resize(samples + 1);
    out.f.resize(samples + 1);
    out.f_slope.resize(samples + 1);
    for (std::size_t i = 0; i <= samples; ++i) {
        double t = T * static_cast<double>(i) / static_cast<double>(samples);
        out.times[i] = t;
        auto [kp, kpp] = profile.impact_derivatives(t);
        double k = profile.impact(t);
        double r = profile.resilience(t);
        double rp = profile.resilience_slope(t);
        double g1 = kp + r * k;            // K' + rho K
        double g2 = kp + 2.0 * r * k;      // K' + 2 rho K
        if (!(g2 > 0.0)) {
            out.valid = false;
            out.first_violation = t;
            return out;
        }
        double g1p = kpp + rp * k + r * kp;
        double g2p = kpp + 2.0 * rp * k + 2.0 * r * kp;
        out.f[i] = g1 / g2;
        out.f_slope[i] = (g1p * g2 - g1 * g2p) / (g2 * g2);
    }
    return out;
}

std::pair<DiscreteStrategy, double> round_trip_witness(const LiquidityProfile& profile, double t,
                                                       double eps) {
    const double T = profile.horizon();
    if (!(eps > 0.0) || t < 0.0 || t + eps > T * (1.0 + 1e-12))
        throw std::invalid_argument("round_trip_witness: need 0 <= t < t+eps <= T");
    double u = std::min(t + eps, T);

    std::vector<double> nodes;
    std::vector<double> trades;
    auto push = [&](double time, double trade) {
        if (!nodes.empty() && time <= nodes.back()) {
            trades.back() += trade;
            return;
        }
        nodes.push_back(time);
        trades.push_back(trade);
    };
    push(0.0, 0.0);
    push(t, 1.0);
    push(u, -1.0);
    push(T, 0.0);

    DiscreteStrategy strategy{TimeGrid::from_nodes(profile, std::move(nodes)), std::move(trades)};
    double cost = 0.5 * (profile.impact(t) + profile.impact(u)) - profile.impact(t) * profile.decay(t, u);
    return {std::move(strategy), cost};
}

ManipulationVerdict classify_manipulation(const LiquidityProfile& profile, std::size_t samples) {
    samples = std::max<std::size_t>(samples, 2);
    const double T = profile.horizon();

    double min_g2 = std::numeric_limits<double>::infinity();
    double argmin_t = 0.0;
    for (std::size_t i = 0; i <= samples; ++i) {
        double t = T * static_cast<double>(i) / static_cast<double>(samples);
        double g2 = impact_growth(profile, t).second;
        if (g2 < min_g2) {
            min_g2 = g2;
            argmin_t = t;
        }
    }

    double scale = profile.impact(0.0) * profile.resilience(0.0);
    if (min_g2 < -kBoundaryTol * (1.0 + scale)) {
        ManipulationVerdict verdict{Regime::PriceManipulation, argmin_t, std::nullopt};
        double t = std::min(argmin_t, T * (1.0 - 1.0 / static_cast<double>(samples)));
        double eps = std::min(0.1 * T, T - t);
        for (int halving = 0; halving < 60; ++halving) {
            auto [strategy, cost] = round_trip_witness(profile, t, eps);
            (void)strategy;
            if (cost < 0.0) {
                verdict.round_trip = RoundTrip{t, eps, cost};
                break;
            }
            eps *= 0.5;
        }
        return verdict;
    }
    if (std::abs(min_g2) <= kBoundaryTol * (1.0 + scale))
        return {Regime::Boundary, argmin_t, std::nullopt};

    FProfile fp = f_profile(profile, samples);
    double tol = kBoundaryTol * (1.0 + profile.resilience(0.0));
    if (fp.f.front() < -tol) return {Regime::TransactionTriggered, 0.0, std::nullopt};
    for (std::size_t i = 0; i < fp.times.size(); ++i) {
        double drive = fp.f_slope[i] + profile.resilience(fp.times[i]) * fp.f[i];
        if (drive < -tol) return {Regime::TransactionTriggered, fp.times[i], std::nullopt};
    }
    return {Regime::Clean, std::nullopt, std::nullopt};
}

ZeroSpreadSolution zero_spread_optimal(const LiquidityProfile& profile, double delta, double x,
                                       std::size_t panels) {
    FProfile fp = f_profile(profile, panels);
    if (!fp.valid)
        throw ConditionViolated("zero_spread_optimal requires K' + 2 rho K > 0", fp.first_violation);

    const double T = profile.horizon();
    const double k0 = profile.impact(0.0);
    const double kT = profile.impact(T);
    const double f0 = fp.f.front();
    const double fT = fp.f.back();

    auto buy_rate_unit = [&](double t) {  // (f' + rho f) / K, the rate per unit deviation
        return (fp.eval_slope(t) + profile.resilience(t) * fp.eval(t)) / profile.impact(t);
    };
    double c = simpson(buy_rate_unit, 0.0, T, panels) + f0 / k0 + (1.0 - fT) / kT;
    double dev = (x + delta / k0) / c;

    ZeroSpreadSolution sol;
    sol.deviation = dev;
    sol.strategy.initial_trade = dev * f0 / k0 - delta / k0;
    sol.strategy.terminal_trade = dev * (1.0 - fT) / kT;
    sol.strategy.rate_times = fp.times;
    sol.strategy.rate_values.resize(fp.times.size());
    for (std::size_t i = 0; i < fp.times.size(); ++i)
        sol.strategy.rate_values[i] = dev * buy_rate_unit(fp.times[i]);

    auto value_integrand = [&](double t) {
        double k = profile.impact(t);
        double f = fp.eval(t);
        double g2 = impact_growth(profile, t).second;
        return g2 * f * f / (2.0 * k * k);
    };
    sol.value = dev * dev * (simpson(value_integrand, 0.0, T, panels) + 0.5 / kT) -
                delta * delta / (2.0 * k0);
    return sol;
}

double continuous_barrier(const LiquidityProfile& profile, double t, std::size_t panels) {
    const double T = profile.horizon();
    if (t < 0.0 || t > T) throw std::domain_error("continuous_barrier: t outside [0, T]");
    if (t == T) return 0.0;

    FProfile fp = f_profile(profile, panels);
    if (!fp.valid)
        throw ConditionViolated("continuous_barrier requires K' + 2 rho K > 0", fp.first_violation);

    // equivalent form of the no-manipulation condition: K' + rho K >= 0 and
    // f' + rho f >= 0 on the sampling grid
    double tol = kBoundaryTol * (1.0 + profile.resilience(0.0) * (1.0 + profile.impact(0.0)));
    for (std::size_t i = 0; i < fp.times.size(); ++i) {
        double g1 = impact_growth(profile, fp.times[i]).first;
        if (g1 < -tol)
            throw ConditionViolated("continuous_barrier requires K' + rho K >= 0", fp.times[i]);
        double drive = fp.f_slope[i] + profile.resilience(fp.times[i]) * fp.f[i];
        if (drive < -tol)
            throw ConditionViolated("continuous_barrier requires f' + rho f >= 0", fp.times[i]);
    }

    double ft = fp.eval(t);
    if (std::abs(ft) <= 1e-14) return kInfiniteBarrier;

    auto buy_rate_unit = [&](double s) {
        return (fp.eval_slope(s) + profile.resilience(s) * fp.eval(s)) / profile.impact(s);
    };
    double tail = simpson(buy_rate_unit, t, T, panels) + (1.0 - fp.f.back()) / profile.impact(T);
    return tail / ft;
}

bool infinite_barrier_check(const LiquidityProfile& profile, double t, std::size_t samples) {
    const double T = profile.horizon();
    if (t < 0.0 || t >= T) return false;
    if (impact_growth(profile, t).first < 0.0) return true;
    double kt = profile.impact(t);
    for (std::size_t i = 1; i <= samples; ++i) {
        double t2 = t + (T - t) * static_cast<double>(i) / static_cast<double>(samples);
        if (kt * profile.decay(t, t2) > profile.impact(t2) * (1.0 + 1e-12)) return true;
    }
    return false;
}

namespace {

ContinuousStrategy tabulate_rate(double initial, double terminal,
                                 const std::function<double(double)>& rate, double T,
                                 std::size_t points = 4000) {
    ContinuousStrategy s;
    s.initial_trade = initial;
    s.terminal_trade = terminal;
    s.rate_times.resize(points + 1);
    s.rate_values.resize(points + 1);
    for (std::size_t i = 0; i <= points; ++i) {
        double t = T * static_cast<double>(i) / static_cast<double>(points);
        s.rate_times[i] = t;
        s.rate_values[i] = rate(t);
    }
    return s;
}

}  // namespace

AnalyticExample analytic_example_constant(double kappa, double rho, double horizon, double x) {
    if (!(kappa > 0.0) || !(rho > 0.0) || !(horizon > 0.0))
        throw std::domain_error("analytic_example_constant: kappa, rho, T must be positive");
    double impulse = x / (rho * horizon + 2.0);
    AnalyticExample ex;
    ex.strategy = tabulate_rate(impulse, impulse, [=](double) { return x * rho / (rho * horizon + 2.0); },
                                horizon);
    ex.barrier = [=](double t) {
        if (t >= horizon) return 0.0;
        return (1.0 + rho * (horizon - t)) / kappa;
    };
    return ex;
}

AnalyticExample analytic_example_exponential(double kappa, double nu, double rho, double horizon,
                                             double x) {
    if (!(kappa > 0.0) || !(rho > 0.0) || !(horizon > 0.0))
        throw std::domain_error("analytic_example_exponential: kappa, rho, T must be positive");
    if (nu == 0.0) {
        AnalyticExample ex = analytic_example_constant(kappa, rho, horizon, x);
        ex.regimes = RegimeIntervals{-std::numeric_limits<double>::infinity(), -2.0, -1.0};
        return ex;
    }
    AnalyticExample ex;
    ex.regimes = RegimeIntervals{-std::numeric_limits<double>::infinity(), -2.0, -1.0};

    if (nu <= -2.0)
        throw std::domain_error("analytic_example_exponential: no optimal strategy for nu <= -2");

    double denom = (nu + 1.0) * (nu + 1.0) - std::exp(-nu * rho * horizon);
    double initial = x * nu * (nu + 1.0) / denom;
    double terminal = x * nu * std::exp(-nu * rho * horizon) / denom;
    ex.strategy = tabulate_rate(
        initial, terminal,
        [=](double t) { return x * nu * (nu + 1.0) * rho * std::exp(-nu * rho * t) / denom; },
        horizon);
    ex.barrier = [=](double t) {
        if (t >= horizon) return 0.0;
        if (nu <= -1.0) return kInfiniteBarrier;  // dynamic spread: buy region empty before T
        return ((nu + 1.0) * std::exp(-nu * rho * t) - std::exp(-nu * rho * horizon)) /
               (kappa * nu * (nu + 1.0));
    };
    return ex;
}

AnalyticExample analytic_example_straight_line(double kappa, double m, double rho, double horizon,
                                               double x) {
    if (!(kappa > 0.0) || !(rho > 0.0) || !(horizon > 0.0))
        throw std::domain_error("analytic_example_straight_line: kappa, rho, T must be positive");
    if (!(m > -kappa / horizon))
        throw std::domain_error("analytic_example_straight_line: requires m > -kappa/T");

    AnalyticExample ex;
    double pm_hi = -2.0 * rho * kappa / (1.0 + 2.0 * rho * horizon);
    double ttpm_hi = -2.0 * rho * kappa / (3.0 + 2.0 * rho * horizon);
    ex.regimes = RegimeIntervals{-kappa / horizon, pm_hi, ttpm_hi};
    double wait_hi = -(kappa / horizon) * (1.0 - std::exp(-rho * horizon));
    ex.infinite_barrier_interval = {-kappa / horizon, wait_hi};

    if (m == 0.0) {
        AnalyticExample base = analytic_example_constant(kappa, rho, horizon, x);
        ex.strategy = std::move(base.strategy);
        ex.barrier = std::move(base.barrier);
        return ex;
    }
    if (m <= pm_hi)
        throw std::domain_error("analytic_example_straight_line: no optimal strategy for m <= -2 rho kappa/(1+2 rho T)");

    double m_tilde = 2.0 * m + kappa * rho *
                                   std::log((m + 2.0 * kappa * rho + 2.0 * m * rho * horizon) /
                                            (m + 2.0 * kappa * rho));
    double initial = 2.0 * m * (m + kappa * rho) * x / ((m + 2.0 * kappa * rho) * m_tilde);
    double terminal =
        2.0 * m * kappa * rho * x / ((m + 2.0 * kappa * rho + 2.0 * m * rho * horizon) * m_tilde);
    ex.strategy = tabulate_rate(
        initial, terminal,
        [=](double t) {
            double den = m + 2.0 * kappa * rho + 2.0 * m * rho * t;
            return 2.0 * m * kappa * rho * rho * (2.0 * kappa * rho + m * (3.0 + 2.0 * rho * t)) *
                   x / (den * den * m_tilde);
        },
        horizon);

    if (m >= ttpm_hi) {
        ex.barrier = [=](double t) {
            if (t >= horizon) return 0.0;
            double num = m + 2.0 * kappa * rho + 2.0 * m * rho * t;
            double den_T = m + 2.0 * kappa * rho + 2.0 * m * rho * horizon;
            return rho * (2.0 * m - num * std::log(num / den_T)) /
                   (2.0 * m * (m + kappa * rho + m * rho * t));
        };
    } else if (m < wait_hi) {
        ex.barrier = [=](double t) { return t >= horizon ? 0.0 : kInfiniteBarrier; };
    } else {
        // no closed form in the gap between the infinite-barrier interval and
        // the clean regime; solve numerically instead
        ex.barrier = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
    }
    return ex;
}

}  // namespace lobexec
