#include "cmrl/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace cmrl {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-9;

// Dense tableau: rows = constraints, one extra objective row. Column layout:
// structural vars, surplus vars for >= rows, artificial vars, then the RHS.
struct Tableau {
    int m = 0;      // constraint rows
    int n = 0;      // columns excluding RHS
    std::vector<double> t; // (m+1) x (n+1)
    std::vector<int> basis;

    double& at(int i, int j) { return t[static_cast<size_t>(i) * (n + 1) + j]; }
    double at(int i, int j) const { return t[static_cast<size_t>(i) * (n + 1) + j]; }
    double& rhs(int i) { return at(i, n); }

    void pivot(int row, int col) {
        const double piv = at(row, col);
        const double inv = 1.0 / piv;
        for (int j = 0; j <= n; ++j) at(row, j) *= inv;
        at(row, col) = 1.0;
        for (int i = 0; i <= m; ++i) {
            if (i == row) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j <= n; ++j) at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        basis[row] = col;
    }
};

// Runs simplex iterations on a tableau whose objective row holds reduced
// costs of a minimization problem (entering column: most negative). Returns
// false on breakdown (unbounded or stalled).
bool run_simplex(Tableau& tb, int n_usable, int& iterations, std::string& message) {
    const int max_iters = 400 * (tb.m + tb.n) + 2000;
    bool bland = false;
    while (true) {
        if (++iterations > max_iters) {
            message = "iteration cap reached";
            return false;
        }
        // after enough iterations switch to Bland's rule, which cannot cycle
        if (iterations > max_iters / 2) bland = true;

        int col = -1;
        double best = -kPivotTol;
        for (int j = 0; j < n_usable; ++j) {
            const double red = tb.at(tb.m, j);
            if (bland) {
                if (red < -kPivotTol) { col = j; break; }
            } else if (red < best) {
                best = red;
                col = j;
            }
        }
        if (col < 0) return true; // optimal

        int row = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < tb.m; ++i) {
            const double a = tb.at(i, col);
            if (a > kPivotTol) {
                const double ratio = tb.rhs(i) / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && (row < 0 || tb.basis[i] < tb.basis[row]))) {
                    best_ratio = ratio;
                    row = i;
                }
            }
        }
        if (row < 0) {
            message = "unbounded direction in column " + std::to_string(col);
            return false;
        }
        tb.pivot(row, col);
    }
}

} // namespace

LpSolution solve_linear_program(const LinearProgram& lp) {
    LpSolution sol;
    const int n = lp.n_vars;
    const int m_eq = static_cast<int>(lp.eq_rows.size());
    const int m_ge = static_cast<int>(lp.ge_rows.size());
    const int m = m_eq + m_ge;
    if (static_cast<int>(lp.objective.size()) != n)
        throw std::invalid_argument("solve_linear_program: objective size mismatch");

    Tableau tb;
    tb.m = m;
    tb.n = n + m_ge + m; // structural + surplus + artificial
    tb.t.assign(static_cast<size_t>(m + 1) * (tb.n + 1), 0.0);
    tb.basis.assign(m, -1);

    // constraint rows; flip signs so RHS >= 0, artificials form the initial basis
    for (int i = 0; i < m; ++i) {
        const std::vector<double>& row = i < m_eq ? lp.eq_rows[i] : lp.ge_rows[i - m_eq];
        double rhs = i < m_eq ? lp.eq_rhs[i] : lp.ge_rhs[i - m_eq];
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("solve_linear_program: row size mismatch");
        double sign = rhs < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) tb.at(i, j) = sign * row[j];
        if (i >= m_eq) tb.at(i, n + (i - m_eq)) = sign * -1.0; // surplus for >= rows
        tb.at(i, n + m_ge + i) = 1.0;                          // artificial
        tb.rhs(i) = sign * rhs;
        tb.basis[i] = n + m_ge + i;
    }

    // phase 1: minimize the sum of artificials
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= tb.n; ++j) tb.at(m, j) -= tb.at(i, j);
    for (int i = 0; i < m; ++i) tb.at(m, n + m_ge + i) = 0.0;

    std::string msg;
    if (!run_simplex(tb, tb.n, sol.iterations, msg)) {
        sol.status = LpStatus::NumericalFailure;
        sol.message = "phase 1: " + msg;
        return sol;
    }
    const double phase1 = -tb.rhs(m);
    if (phase1 > 1e-7) {
        sol.status = LpStatus::Infeasible;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "phase-1 residual %.3e", phase1);
        sol.message = buf;
        return sol;
    }
    // drive any artificial still in the basis out of it (degenerate rows)
    for (int i = 0; i < m; ++i) {
        if (tb.basis[i] < n + m_ge) continue;
        int col = -1;
        for (int j = 0; j < n + m_ge; ++j) {
            if (std::abs(tb.at(i, j)) > kPivotTol) { col = j; break; }
        }
        if (col >= 0) tb.pivot(i, col);
        // else the row is all zeros: redundant constraint, harmless
    }

    // phase 2: rebuild the objective row (minimize -c.x) over structural
    // and surplus columns only
    const int n_usable = n + m_ge;
    for (int j = 0; j <= tb.n; ++j) tb.at(m, j) = 0.0;
    for (int j = 0; j < n; ++j) tb.at(m, j) = -lp.objective[j];
    for (int i = 0; i < m; ++i) {
        const int b = tb.basis[i];
        if (b < n) {
            const double coef = tb.at(m, b);
            if (coef == 0.0) continue;
            for (int j = 0; j <= tb.n; ++j) tb.at(m, j) -= coef * tb.at(i, j);
            tb.at(m, b) = 0.0;
        }
    }
    if (!run_simplex(tb, n_usable, sol.iterations, msg)) {
        sol.status = msg.rfind("unbounded", 0) == 0 ? LpStatus::Unbounded : LpStatus::NumericalFailure;
        sol.message = "phase 2: " + msg;
        return sol;
    }

    sol.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i) {
        if (tb.basis[i] < n) sol.x[tb.basis[i]] = std::max(0.0, tb.rhs(i));
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += lp.objective[j] * sol.x[j];
    sol.objective = obj;
    sol.status = LpStatus::Optimal;

    // feasibility audit for the caller's diagnostics
    double worst = 0.0;
    for (int i = 0; i < m_eq; ++i) {
        double v = -lp.eq_rhs[i];
        for (int j = 0; j < n; ++j) v += lp.eq_rows[i][j] * sol.x[j];
        worst = std::max(worst, std::abs(v));
    }
    if (worst > kFeasTol * 100) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "equality residual %.3e", worst);
        sol.message = buf;
    }
    return sol;
}

} // namespace cmrl
