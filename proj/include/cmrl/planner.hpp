#pragma once

#include "cmrl/cmdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmrl {

/// Discounted state-action visitation frequencies of some policy. Satisfies
/// flow conservation (sum_a mu(s,a) = rho(s) + gamma * inflow) within 1e-8
/// and total mass 1/(1-gamma).
struct OccupancyMeasure {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> mu; // size S*A, row-major

    double at(int s, int a) const { return mu[static_cast<size_t>(s) * n_actions + a]; }
};

/// Worst flow-conservation residual and total-mass error of an occupancy
/// table; both must be small for it to describe a real policy.
struct OccupancyResidual {
    double flow = 0.0;
    double mass = 0.0;
};
OccupancyResidual occupancy_residual(const TabularCmdp& m, const OccupancyMeasure& mu);

struct LpOutcome {
    bool feasible = false;
    OccupancyMeasure occupancy;
    double objective = 0.0;
    std::string diagnostics;
};

/// Solves max sum mu.r subject to occupancy-flow equalities and
/// sum mu.c >= constraint_threshold over mu >= 0. Returns the optimizer or an
/// infeasibility verdict. Throws on a numerically failed solve.
LpOutcome solve_cmdp_lp(const TabularCmdp& m, double constraint_threshold);

/// pi(a|s) = mu(s,a) / sum_a mu(s,a); states with no mass (<= 1e-12) get a
/// uniform row. Such states are exactly the ones unreachable under the policy,
/// so the choice does not affect values from rho.
Policy occupancy_to_policy(const OccupancyMeasure& mu);

/// Return contract of the optimal-policy and feasible-policy oracles: the
/// policy together with its exactly evaluated values on every queried CMDP
/// and the achieved objective / constraint slack.
struct OracleOutcome {
    Policy policy;
    std::vector<ValuePair> values; // one per queried CMDP
    double objective = 0.0;
    double constraint_slack = 0.0; // min_i V_c - required threshold
};

/// Optimal policy oracle: exact LP solution of the CMDP at constraint
/// threshold 0, with exactly evaluated values. eps and delta are recorded in
/// the contract but unused: the exact implementation is deterministic, which
/// is strictly stronger than the (eps, delta) guarantee it stands in for.
/// Returns nullopt when no feasible policy exists.
std::optional<OracleOutcome> oracle_optimal(const TabularCmdp& m, double eps, double delta);

/// CMDP check oracle: exact distance comparison, so the 1-delta guarantee
/// holds with probability 1.
bool oracle_check(const TabularCmdp& m1, const TabularCmdp& m2, double eps, double delta);

enum class FeasibleMode { Generic, Structured };

struct FeasibleResult {
    bool success = false;
    Policy policy;
    std::vector<ValuePair> values;      // per task, for the returned policy
    double margin = 0.0;                // min_i V_c^{M_i}(policy)
    int iterations = 0;
    std::vector<double> margin_history; // best-so-far margin per ascent iteration
    std::string message;
};

/// Simultaneously feasible policy oracle over a finite task set.
///
/// Generic mode runs exact max-min mirror ascent: each iteration evaluates all
/// constraint values, takes an exponentiated-gradient step against the task
/// with the smallest V_c (step size eta0/sqrt(t)) and keeps the best policy
/// seen. Stops when min_i V_c >= xi or after max_iterations.
///
/// Structured mode is for families that are constraint-monotone in a scalar
/// parameter: it solves the single worst-parameter CMDP at constraint
/// threshold xi and verifies the margin on every task exactly.
FeasibleResult oracle_feasible(const std::vector<TabularCmdp>& tasks, double xi, double delta,
                               FeasibleMode mode,
                               const std::vector<double>& structured_params = {},
                               int max_iterations = 10000);

} // namespace cmrl
