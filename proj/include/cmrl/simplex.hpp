#pragma once

#include <string>
#include <vector>

namespace cmrl {

/// A small dense linear program in the form
///   maximize c.x  subject to  A_eq x = b_eq,  A_ge x >= b_ge,  x >= 0.
/// Rows are dense; the solver is meant for problems with at most a few
/// hundred variables.
struct LinearProgram {
    int n_vars = 0;
    std::vector<double> objective;             // size n_vars
    std::vector<std::vector<double>> eq_rows;  // each size n_vars
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> ge_rows;
    std::vector<double> ge_rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

struct LpSolution {
    LpStatus status = LpStatus::NumericalFailure;
    double objective = 0.0;
    std::vector<double> x;
    std::string message;    // diagnostics on failure (pivot magnitudes, phase-1 residual)
    int iterations = 0;
};

/// Two-phase dense simplex with Dantzig pricing and a Bland fallback for
/// anti-cycling. Optimality gap on well-conditioned problems of this size is
/// far below the 1e-8 contract used by the planner.
LpSolution solve_linear_program(const LinearProgram& lp);

} // namespace cmrl
