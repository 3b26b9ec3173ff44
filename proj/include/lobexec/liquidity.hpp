#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lobexec {

/// Which parametric form the price-impact coefficient K(t) follows.
enum class ImpactFamily { Constant, Exponential, StraightLine, Quadratic, Tabulated };

std::string to_string(ImpactFamily family);

/// Tabulated curve, linearly interpolated between nodes.
/// Nodes must be strictly increasing, start at 0 and end at the horizon.
struct Curve {
    std::vector<double> times;
    std::vector<double> values;
};

/// Resilience specification: constant rate or a tabulated curve.
struct Resilience {
    static Resilience constant(double rho);
    static Resilience tabulated(Curve curve);

    bool is_constant() const { return table_.times.empty(); }
    double constant_value() const { return constant_; }
    const Curve& table() const { return table_; }

private:
    double constant_ = 0.0;
    Curve table_;
};

/// Time-varying liquidity profile: price impact K(t), resilience rho(t),
/// permanent impact gamma, on the horizon [0, T].
///
/// Immutable after construction; safe to evaluate concurrently.
/// Construction validates K > 0 and rho > 0 everywhere (analytically for
/// parametric families, at every table node for tabulated input).
class LiquidityProfile {
public:
    static LiquidityProfile constant(double kappa, Resilience rho, double horizon,
                                     double gamma = 0.0);
    // K(t) = kappa * exp(nu * int_0^t rho), the exponential family with slope nu
    // relative to the resilience.
    static LiquidityProfile exponential(double kappa, double nu, Resilience rho,
                                        double horizon, double gamma = 0.0);
    // K(t) = kappa + m * t
    static LiquidityProfile straight_line(double kappa, double m, Resilience rho,
                                          double horizon, double gamma = 0.0);
    // K(t) = c0 + c1 * t + c2 * t^2
    static LiquidityProfile quadratic(double c0, double c1, double c2, Resilience rho,
                                      double horizon, double gamma = 0.0);
    static LiquidityProfile tabulated(Curve k, Resilience rho, double horizon,
                                      double gamma = 0.0);

    /// K(t). Throws std::domain_error outside [0, T].
    double impact(double t) const;

    /// (K'(t), K''(t)). Analytic for parametric families; central finite
    /// differences with the local table spacing for tabulated K.
    std::pair<double, double> impact_derivatives(double t) const;

    /// rho(t).
    double resilience(double t) const;

    /// rho'(t); slope of the table segment for tabulated rho, 0 when constant.
    double resilience_slope(double t) const;

    /// int_s^t rho(u) du. Exact for constant and piecewise-linear rho.
    double rho_integral(double s, double t) const;

    /// exp(-int_s^t rho(u) du), in (0, 1]. Throws std::domain_error if s > t.
    double decay(double s, double t) const;

    double horizon() const { return horizon_; }
    double permanent_impact() const { return gamma_; }
    ImpactFamily family() const { return family_; }

    /// True when derivatives come from finite differences rather than formulas.
    bool finite_difference_mode() const { return family_ == ImpactFamily::Tabulated; }

private:
    LiquidityProfile(ImpactFamily family, std::vector<double> params, Curve k_table,
                     Resilience rho, double horizon, double gamma);

    void validate() const;
    void check_time(double t) const;

    ImpactFamily family_;
    std::vector<double> params_;  // family parameters, meaning depends on family_
    Curve k_table_;               // only for Tabulated
    Resilience rho_;
    double horizon_;
    double gamma_;
};

/// Trading grid 0 = t_0 < t_1 < ... < t_N = T with the per-interval decay
/// factors a_j = exp(-int_{t_j}^{t_{j+1}} rho).
struct TimeGrid {
    std::vector<double> nodes;
    std::vector<double> decay_factors;  // size nodes.size() - 1, each in (0, 1)

    static TimeGrid uniform(const LiquidityProfile& profile, std::size_t steps);
    static TimeGrid from_nodes(const LiquidityProfile& profile, std::vector<double> nodes);

    std::size_t steps() const { return decay_factors.size(); }
    bool same_nodes(const TimeGrid& other) const { return nodes == other.nodes; }
};

}  // namespace lobexec
