#include "lobexec/liquidity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobexec {

namespace {

void check_curve(const Curve& curve, double horizon, const char* what) {
    if (curve.times.size() != curve.values.size() || curve.times.size() < 2)
        throw std::invalid_argument(std::string(what) + ": table needs matching t/value columns with at least two nodes");
    if (curve.times.front() != 0.0 || curve.times.back() != horizon)
        throw std::invalid_argument(std::string(what) + ": table must start at 0 and end at the horizon");
    for (std::size_t i = 1; i < curve.times.size(); ++i)
        if (!(curve.times[i] > curve.times[i - 1]))
            throw std::invalid_argument(std::string(what) + ": table times must be strictly increasing");
}

// Index of the segment [times[i], times[i+1]] containing t.
std::size_t segment_index(const std::vector<double>& times, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times.begin());
    if (i > 0) --i;
    if (i + 1 >= times.size()) i = times.size() - 2;
    return i;
}

double interpolate(const Curve& curve, double t) {
    std::size_t i = segment_index(curve.times, t);
    double w = (t - curve.times[i]) / (curve.times[i + 1] - curve.times[i]);
    return curve.values[i] + w * (curve.values[i + 1] - curve.values[i]);
}

double segment_slope(const Curve& curve, double t) {
    std::size_t i = segment_index(curve.times, t);
    return (curve.values[i + 1] - curve.values[i]) / (curve.times[i + 1] - curve.times[i]);
}

// Exact integral of the piecewise-linear curve over [s, t].
double integrate_linear(const Curve& curve, double s, double t) {
    double total = 0.0;
    std::size_t i = segment_index(curve.times, s);
    while (true) {
        double lo = std::max(s, curve.times[i]);
        double hi = std::min(t, curve.times[i + 1]);
        if (hi > lo) {
            double vlo = interpolate(curve, lo);
            double vhi = interpolate(curve, hi);
            total += 0.5 * (vlo + vhi) * (hi - lo);
        }
        if (curve.times[i + 1] >= t || i + 2 >= curve.times.size()) break;
        ++i;
    }
    return total;
}

}  // namespace

std::string to_string(ImpactFamily family) {
    switch (family) {
        case ImpactFamily::Constant: return "constant";
        case ImpactFamily::Exponential: return "exponential";
        case ImpactFamily::StraightLine: return "straight-line";
        case ImpactFamily::Quadratic: return "quadratic";
        case ImpactFamily::Tabulated: return "tabulated";
    }
    return "?";
}

Resilience Resilience::constant(double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("resilience must be strictly positive");
    Resilience r;
    r.constant_ = rho;
    return r;
}

Resilience Resilience::tabulated(Curve curve) {
    Resilience r;
    r.table_ = std::move(curve);
    return r;
}

LiquidityProfile::LiquidityProfile(ImpactFamily family, std::vector<double> params,
                                   Curve k_table, Resilience rho, double horizon,
                                   double gamma)
    : family_(family),
      params_(std::move(params)),
      k_table_(std::move(k_table)),
      rho_(std::move(rho)),
      horizon_(horizon),
      gamma_(gamma) {
    validate();
}

LiquidityProfile LiquidityProfile::constant(double kappa, Resilience rho, double horizon,
                                            double gamma) {
    return LiquidityProfile(ImpactFamily::Constant, {kappa}, {}, std::move(rho), horizon, gamma);
}

LiquidityProfile LiquidityProfile::exponential(double kappa, double nu, Resilience rho,
                                               double horizon, double gamma) {
    return LiquidityProfile(ImpactFamily::Exponential, {kappa, nu}, {}, std::move(rho), horizon,
                            gamma);
}

LiquidityProfile LiquidityProfile::straight_line(double kappa, double m, Resilience rho,
                                                 double horizon, double gamma) {
    return LiquidityProfile(ImpactFamily::StraightLine, {kappa, m}, {}, std::move(rho), horizon,
                            gamma);
}

LiquidityProfile LiquidityProfile::quadratic(double c0, double c1, double c2, Resilience rho,
                                             double horizon, double gamma) {
    return LiquidityProfile(ImpactFamily::Quadratic, {c0, c1, c2}, {}, std::move(rho), horizon,
                            gamma);
}

LiquidityProfile LiquidityProfile::tabulated(Curve k, Resilience rho, double horizon,
                                             double gamma) {
    return LiquidityProfile(ImpactFamily::Tabulated, {}, std::move(k), std::move(rho), horizon,
                            gamma);
}

void LiquidityProfile::validate() const {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be strictly positive");
    if (gamma_ < 0.0) throw std::invalid_argument("permanent impact gamma must be nonnegative");

    if (!rho_.is_constant()) {
        check_curve(rho_.table(), horizon_, "rho");
        for (double v : rho_.table().values)
            if (!(v > 0.0)) throw std::invalid_argument("rho must be strictly positive at every table node");
    }

    switch (family_) {
        case ImpactFamily::Constant:
            if (!(params_[0] > 0.0)) throw std::invalid_argument("kappa must be strictly positive");
            break;
        case ImpactFamily::Exponential:
            if (!(params_[0] > 0.0)) throw std::invalid_argument("kappa must be strictly positive");
            break;
        case ImpactFamily::StraightLine:
            if (!(params_[0] > 0.0) || !(params_[0] + params_[1] * horizon_ > 0.0))
                throw std::invalid_argument("straight-line K must stay strictly positive on [0, T]");
            break;
        case ImpactFamily::Quadratic: {
            // positive at endpoints and at the interior vertex, if any
            auto k = [&](double t) { return params_[0] + params_[1] * t + params_[2] * t * t; };
            if (!(k(0.0) > 0.0) || !(k(horizon_) > 0.0))
                throw std::invalid_argument("quadratic K must stay strictly positive on [0, T]");
            if (params_[2] != 0.0) {
                double tv = -params_[1] / (2.0 * params_[2]);
                if (tv > 0.0 && tv < horizon_ && !(k(tv) > 0.0))
                    throw std::invalid_argument("quadratic K must stay strictly positive on [0, T]");
            }
            break;
        }
        case ImpactFamily::Tabulated:
            check_curve(k_table_, horizon_, "K");
            for (double v : k_table_.values)
                if (!(v > 0.0)) throw std::invalid_argument("K must be strictly positive at every table node");
            break;
    }
}

void LiquidityProfile::check_time(double t) const {
    // small slack for accumulated grid rounding
    if (t < -1e-12 * horizon_ || t > horizon_ * (1.0 + 1e-12))
        throw std::domain_error("time outside [0, T]");
}

double LiquidityProfile::impact(double t) const {
    check_time(t);
    t = std::clamp(t, 0.0, horizon_);
    switch (family_) {
        case ImpactFamily::Constant: return params_[0];
        case ImpactFamily::Exponential: return params_[0] * std::exp(params_[1] * rho_integral(0.0, t));
        case ImpactFamily::StraightLine: return params_[0] + params_[1] * t;
        case ImpactFamily::Quadratic: return params_[0] + params_[1] * t + params_[2] * t * t;
        case ImpactFamily::Tabulated: return interpolate(k_table_, t);
    }
    return 0.0;
}

std::pair<double, double> LiquidityProfile::impact_derivatives(double t) const {
    check_time(t);
    t = std::clamp(t, 0.0, horizon_);
    switch (family_) {
        case ImpactFamily::Constant:
            return {0.0, 0.0};
        case ImpactFamily::Exponential: {
            double k = impact(t);
            double r = resilience(t);
            double nu = params_[1];
            return {nu * r * k, nu * resilience_slope(t) * k + nu * r * nu * r * k};
        }
        case ImpactFamily::StraightLine:
            return {params_[1], 0.0};
        case ImpactFamily::Quadratic:
            return {params_[1] + 2.0 * params_[2] * t, 2.0 * params_[2]};
        case ImpactFamily::Tabulated: {
            std::size_t i = segment_index(k_table_.times, t);
            double h = k_table_.times[i + 1] - k_table_.times[i];
            double lo = std::max(0.0, t - h);
            double hi = std::min(horizon_, t + h);
            double klo = interpolate(k_table_, lo);
            double khi = interpolate(k_table_, hi);
            double first = (khi - klo) / (hi - lo);
            double second = 0.0;
            if (hi - t > 0.25 * h && t - lo > 0.25 * h) {
                double kc = interpolate(k_table_, t);
                second = (khi - 2.0 * kc + klo) / (0.25 * (hi - lo) * (hi - lo));
            }
            return {first, second};
        }
    }
    return {0.0, 0.0};
}

double LiquidityProfile::resilience(double t) const {
    check_time(t);
    t = std::clamp(t, 0.0, horizon_);
    if (rho_.is_constant()) return rho_.constant_value();
    return interpolate(rho_.table(), t);
}

double LiquidityProfile::resilience_slope(double t) const {
    check_time(t);
    t = std::clamp(t, 0.0, horizon_);
    if (rho_.is_constant()) return 0.0;
    return segment_slope(rho_.table(), t);
}

double LiquidityProfile::rho_integral(double s, double t) const {
    if (s > t) throw std::domain_error("rho_integral requires s <= t");
    check_time(s);
    check_time(t);
    s = std::clamp(s, 0.0, horizon_);
    t = std::clamp(t, 0.0, horizon_);
    if (rho_.is_constant()) return rho_.constant_value() * (t - s);
    return integrate_linear(rho_.table(), s, t);
}

double LiquidityProfile::decay(double s, double t) const {
    return std::exp(-rho_integral(s, t));
}

TimeGrid TimeGrid::uniform(const LiquidityProfile& profile, std::size_t steps) {
    if (steps < 1) throw std::invalid_argument("grid needs at least one step");
    std::vector<double> nodes(steps + 1);
    double T = profile.horizon();
    for (std::size_t i = 0; i <= steps; ++i)
        nodes[i] = T * static_cast<double>(i) / static_cast<double>(steps);
    nodes.back() = T;
    return from_nodes(profile, std::move(nodes));
}

TimeGrid TimeGrid::from_nodes(const LiquidityProfile& profile, std::vector<double> nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("grid needs at least two nodes");
    if (nodes.front() != 0.0 || std::abs(nodes.back() - profile.horizon()) > 1e-12 * profile.horizon())
        throw std::invalid_argument("grid must span [0, T]");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("grid nodes must be strictly increasing");
    TimeGrid grid;
    grid.decay_factors.resize(nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        grid.decay_factors[i] = profile.decay(nodes[i], nodes[i + 1]);
    grid.nodes = std::move(nodes);
    return grid;
}

}  // namespace lobexec
