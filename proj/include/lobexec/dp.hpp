#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "lobexec/impact.hpp"
#include "lobexec/liquidity.hpp"

namespace lobexec {

inline constexpr double kInfiniteBarrier = std::numeric_limits<double>::infinity();

/// One quadratic piece a y^2 + b y + c, valid on (lower bound of the previous
/// piece, upper]. The last piece has upper = +inf.
struct QuadPiece {
    double upper;
    double a, b, c;
};

/// Value function V(y) of the remaining problem in the ratio variable
/// y = shares / deviation. Continuously differentiable, piecewise quadratic,
/// with coefficients satisfying
///   a_i > 0, b_i > 0,
///   4 a_i c_i + b_i - b_i^2 >= 0,
///   y_{i-1} b_i + 2 c_i >= 0.
struct PiecewiseQuadraticVF {
    std::vector<QuadPiece> pieces;

    double operator()(double y) const;
    double slope(double y) const;
    std::size_t piece_index(double y) const;

    /// Throws std::logic_error if any structural invariant fails beyond the
    /// stated tolerances (C1 continuity 1e-9 relative, inequalities -1e-12).
    void validate() const;
};

/// Wait/buy boundary per grid node. values[n] is the critical ratio c_n; the
/// buy region at t_n is (c_n, inf), with c_n = +inf meaning never buy.
/// values[N] = 0 by convention.
struct Barrier {
    TimeGrid grid;
    std::vector<double> values;
};

struct SolveDiagnostics {
    std::size_t max_pieces = 0;
    std::size_t dropped_breakpoints = 0;
    std::size_t merged_breakpoints = 0;
};

struct SolveResult {
    Barrier barrier;
    std::vector<PiecewiseQuadraticVF> value_functions;  // one per grid node
    std::vector<double> impact_at_nodes;                // K(t_n)
    SolveDiagnostics diagnostics;
};

/// Terminal condition V(T, y) = (1 + K_T y / 2) y.
PiecewiseQuadraticVF terminal_vf(double k_terminal);

/// One backward-induction step: given V at t_{n+1}, the impact K_n and decay
/// a_n, return V at t_n and the barrier value c_n. The minimizer of
/// L(y) = (1 + 2 K a^2 V(y/a)) / (1 + K y)^2 is found exactly from the affine
/// per-piece derivative numerator.
std::pair<PiecewiseQuadraticVF, double> backstep(const PiecewiseQuadraticVF& vf_next, double k,
                                                 double a, SolveDiagnostics* diag = nullptr);

/// Full backward induction over the grid.
SolveResult solve(const LiquidityProfile& profile, const TimeGrid& grid);

/// Forward pass applying the barrier policy: trade down to the barrier ratio,
/// wait below it. Works directly in (delta, x) coordinates so delta0 = 0 needs
/// no special casing.
DiscreteStrategy extract_strategy(const SolveResult& result, double x, double delta0);

/// Value U(t_n, delta, x) = delta^2 V(t_n, x/delta); for delta = 0 the limit
/// x^2 * (leading coefficient of the unbounded piece).
double dp_value(const SolveResult& result, std::size_t n, double delta, double x);

}  // namespace lobexec
