#include "lobexec/dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobexec {

namespace {

constexpr double kIneqTol = 1e-12;
constexpr double kC1Tol = 1e-9;

double piece_eval(const QuadPiece& p, double y) { return (p.a * y + p.b) * y + p.c; }
double piece_slope(const QuadPiece& p, double y) { return 2.0 * p.a * y + p.b; }

}  // namespace

std::size_t PiecewiseQuadraticVF::piece_index(double y) const {
    std::size_t lo = 0, hi = pieces.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (y <= pieces[mid].upper)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double PiecewiseQuadraticVF::operator()(double y) const {
    return piece_eval(pieces[piece_index(y)], y);
}

double PiecewiseQuadraticVF::slope(double y) const {
    return piece_slope(pieces[piece_index(y)], y);
}

void PiecewiseQuadraticVF::validate() const {
    if (pieces.empty()) throw std::logic_error("value function has no pieces");
    if (!std::isinf(pieces.back().upper))
        throw std::logic_error("last piece must be unbounded");
    double prev_upper = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const QuadPiece& p = pieces[i];
        if (i > 0 && !(p.upper > prev_upper))
            throw std::logic_error("breakpoints must be strictly increasing");
        if (!(p.a > 0.0) || !(p.b > 0.0))
            throw std::logic_error("quadratic and linear coefficients must be positive");
        if (4.0 * p.a * p.c + p.b - p.b * p.b < -kIneqTol)
            throw std::logic_error("discriminant inequality violated");
        if (prev_upper * p.b + 2.0 * p.c < -kIneqTol)
            throw std::logic_error("lower-bound inequality violated");
        if (i > 0) {
            const QuadPiece& q = pieces[i - 1];
            double v0 = piece_eval(q, prev_upper);
            double v1 = piece_eval(p, prev_upper);
            double s0 = piece_slope(q, prev_upper);
            double s1 = piece_slope(p, prev_upper);
            if (std::abs(v1 - v0) > kC1Tol * (1.0 + std::abs(v0)) ||
                std::abs(s1 - s0) > kC1Tol * (1.0 + std::abs(s0)))
                throw std::logic_error("value function is not C1 at a breakpoint");
        }
        prev_upper = p.upper;
    }
}

PiecewiseQuadraticVF terminal_vf(double k_terminal) {
    if (!(k_terminal > 0.0)) throw std::invalid_argument("terminal impact must be positive");
    PiecewiseQuadraticVF vf;
    vf.pieces.push_back({kInfiniteBarrier, 0.5 * k_terminal, 1.0, 0.0});
    return vf;
}

std::pair<PiecewiseQuadraticVF, double> backstep(const PiecewiseQuadraticVF& vf_next, double k,
                                                 double a, SolveDiagnostics* diag) {
    if (!(k > 0.0)) throw std::invalid_argument("backstep: impact must be positive");
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("backstep: decay factor must lie in (0,1)");
    vf_next.validate();

    // L'(y) = 2k/(1+ky)^3 * l(y) with l affine on each piece of vf_next(./a):
    //   l(y) = y (2 a_i - k b_i a) + (b_i a - 2 k c_i a^2 - 1).
    // L is strictly decreasing then increasing, so the first sign change of l
    // is the barrier. No piece can have l identically zero.
    double barrier = kInfiniteBarrier;
    double lower = 0.0;
    for (std::size_t i = 0; i < vf_next.pieces.size(); ++i) {
        const QuadPiece& p = vf_next.pieces[i];
        double upper = std::isinf(p.upper) ? kInfiniteBarrier : p.upper * a;
        double slope = 2.0 * p.a - k * p.b * a;
        double intercept = p.b * a - 2.0 * k * p.c * a * a - 1.0;
        double l_lo = slope * lower + intercept;
        if (l_lo >= 0.0) {
            barrier = lower;
            break;
        }
        if (slope > 0.0) {
            double root = -intercept / slope;
            if (root <= upper) {
                barrier = std::max(root, lower);
                break;
            }
        }
        lower = upper;
    }

    auto scaled = [&](const QuadPiece& p, double upper) {
        return QuadPiece{upper, p.a, a * p.b, a * a * p.c};
    };

    PiecewiseQuadraticVF vf_now;
    if (std::isinf(barrier)) {
        for (const QuadPiece& p : vf_next.pieces)
            vf_now.pieces.push_back(scaled(p, std::isinf(p.upper) ? kInfiniteBarrier : p.upper * a));
        return {std::move(vf_now), barrier};
    }

    double l_at_barrier =
        (1.0 + 2.0 * k * a * a * vf_next(barrier / a)) / ((1.0 + k * barrier) * (1.0 + k * barrier));

    std::size_t keep = vf_next.piece_index(barrier / a);
    std::size_t dropped = vf_next.pieces.size() - 1 - keep;
    double prev_upper = 0.0;
    for (std::size_t i = 0; i < keep + 1 && barrier > 0.0; ++i) {
        double upper = (i == keep) ? barrier : vf_next.pieces[i].upper * a;
        if (upper - prev_upper <= kIneqTol * (1.0 + upper)) {
            // degenerate sliver between float-close breakpoints
            if (!vf_now.pieces.empty()) {
                vf_now.pieces.pop_back();
                if (diag) ++diag->merged_breakpoints;
            }
        }
        vf_now.pieces.push_back(scaled(vf_next.pieces[i], upper));
        prev_upper = vf_now.pieces.back().upper;
    }
    vf_now.pieces.push_back(
        {kInfiniteBarrier, 0.5 * k * l_at_barrier, l_at_barrier, (l_at_barrier - 1.0) / (2.0 * k)});

    if (diag) {
        diag->dropped_breakpoints += dropped;
        diag->max_pieces = std::max(diag->max_pieces, vf_now.pieces.size());
    }
    return {std::move(vf_now), barrier};
}

SolveResult solve(const LiquidityProfile& profile, const TimeGrid& grid) {
    const std::size_t n_nodes = grid.nodes.size();
    SolveResult result;
    result.impact_at_nodes.resize(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n)
        result.impact_at_nodes[n] = profile.impact(grid.nodes[n]);

    result.value_functions.resize(n_nodes);
    result.barrier.grid = grid;
    result.barrier.values.assign(n_nodes, 0.0);

    result.value_functions.back() = terminal_vf(result.impact_at_nodes.back());
    result.diagnostics.max_pieces = 1;
    for (std::size_t n = n_nodes - 1; n-- > 0;) {
        auto [vf, c] = backstep(result.value_functions[n + 1], result.impact_at_nodes[n],
                                grid.decay_factors[n], &result.diagnostics);
        result.value_functions[n] = std::move(vf);
        result.barrier.values[n] = c;
    }
    return result;
}

DiscreteStrategy extract_strategy(const SolveResult& result, double x, double delta0) {
    if (x < 0.0) throw std::invalid_argument("extract_strategy: x must be nonnegative");
    if (delta0 < 0.0) throw std::invalid_argument("extract_strategy: delta0 must be nonnegative");
    const TimeGrid& grid = result.barrier.grid;
    const std::size_t n_nodes = grid.nodes.size();

    DiscreteStrategy strategy{grid, std::vector<double>(n_nodes, 0.0)};
    double remaining = x;
    double deviation = delta0;
    for (std::size_t n = 0; n < n_nodes; ++n) {
        double c = result.barrier.values[n];
        double k = result.impact_at_nodes[n];
        double trade = 0.0;
        if (n + 1 == n_nodes) {
            trade = remaining;  // c_N = 0: buy whatever is left
        } else if (!std::isinf(c)) {
            trade = std::max(0.0, (remaining - c * deviation) / (1.0 + k * c));
        }
        strategy.trades[n] = trade;
        remaining -= trade;
        deviation += k * trade;
        if (n + 1 < n_nodes) deviation *= grid.decay_factors[n];
    }
    return strategy;
}

double dp_value(const SolveResult& result, std::size_t n, double delta, double x) {
    if (delta < 0.0 || x < 0.0) throw std::invalid_argument("dp_value: delta and x must be nonnegative");
    if (n >= result.value_functions.size()) throw std::invalid_argument("dp_value: node out of range");
    if (x == 0.0) return 0.0;
    const PiecewiseQuadraticVF& vf = result.value_functions[n];
    if (delta == 0.0) return x * x * vf.pieces.back().a;
    double y = x / delta;
    return delta * delta * vf(y);
}

}  // namespace lobexec
