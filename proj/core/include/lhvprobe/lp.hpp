#pragma once

#include <cstddef>
#include <vector>

namespace lhvprobe {

/// maximize objective . x  subject to  matrix x = rhs,  0 <= x (<= upper).
struct LpProblem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> matrix;       ///< row-major, rows x cols
    std::vector<double> rhs;          ///< length rows
    std::vector<double> objective;    ///< length cols, maximization sense
    std::vector<double> upper_bounds; ///< length cols or empty (no bounds)

    double at(std::size_t r, std::size_t c) const {
        return matrix[r * cols + c];
    }
};

enum class LpStatus {
    FeasibleOptimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
};

struct LpOutcome {
    LpStatus status = LpStatus::NumericalFailure;
    std::vector<double> solution;     ///< length cols when feasible
    double objective_value = 0.0;     ///< when feasible
    std::vector<double> farkas_dual;  ///< length rows when infeasible
    double residual = 0.0;            ///< max constraint violation of solution
};

/// Bounded-variable two-phase revised simplex. Deterministic: Dantzig
/// pricing with a permanent switch to Bland's rule once the objective
/// stalls for more than 2n iterations. Dependent-but-consistent rows are
/// tolerated (their artificials stay pinned at zero). Every answer is
/// re-verified with independent arithmetic before being returned;
/// verification failure reports NumericalFailure rather than guessing.
LpOutcome solve(const LpProblem& problem);

}  // namespace lhvprobe
