#pragma once

#include <string>
#include <vector>

namespace cmrl {

/// A finite constrained MDP (S, A, rho, P, r, c, gamma).
///
/// Tables are stored flat, row-major: r and c are indexed by s * n_actions + a,
/// the transition tensor by (s * n_actions + a) * n_states + s_next.
/// Rewards live in [0, 1], constraint signals in [-1, 1], gamma in (0, 1).
struct TabularCmdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> rho;   // initial distribution, size S
    std::vector<double> P;     // transitions, size S*A*S
    std::vector<double> r;     // rewards, size S*A
    std::vector<double> c;     // constraint signal, size S*A
    double gamma = 0.9;

    double& p(int s, int a, int s2) { return P[(static_cast<size_t>(s) * n_actions + a) * n_states + s2]; }
    double p(int s, int a, int s2) const { return P[(static_cast<size_t>(s) * n_actions + a) * n_states + s2]; }
    double& reward(int s, int a) { return r[static_cast<size_t>(s) * n_actions + a]; }
    double reward(int s, int a) const { return r[static_cast<size_t>(s) * n_actions + a]; }
    double& constraint(int s, int a) { return c[static_cast<size_t>(s) * n_actions + a]; }
    double constraint(int s, int a) const { return c[static_cast<size_t>(s) * n_actions + a]; }

    static TabularCmdp zeros(int n_states, int n_actions, double gamma);
};

/// A stationary Markovian policy: each state row is a distribution over actions.
struct Policy {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> probs; // size S*A, row-major

    double& at(int s, int a) { return probs[static_cast<size_t>(s) * n_actions + a]; }
    double at(int s, int a) const { return probs[static_cast<size_t>(s) * n_actions + a]; }

    static Policy uniform(int n_states, int n_actions);
    /// Point mass on one action in every state.
    static Policy deterministic(int n_states, int n_actions, const std::vector<int>& action_per_state);

    bool operator==(const Policy&) const = default;
};

/// A distribution over base policies; one component is sampled at episode
/// start and executed for the whole episode, so the value of a mixture is the
/// convex combination of component values.
struct MixturePolicy {
    std::vector<Policy> components;
    std::vector<double> weights;

    static MixturePolicy pure(Policy p);
    static MixturePolicy of(Policy a, Policy b, double weight_a);
};

/// Discounted reward value and constraint value of a policy on one CMDP.
struct ValuePair {
    double v_reward = 0.0;
    double v_constraint = 0.0;
};

/// Smoothness constant of the simulation bound: L = 1/(1-gamma) + 2*gamma/(1-gamma)^2.
double smoothness_constant(double gamma);

/// One structural-invariant violation, with its location and magnitude.
struct Violation {
    std::string what;
    int s = -1;
    int a = -1;
    double magnitude = 0.0;
};

/// Checks every structural invariant (row sums, ranges, gamma) and returns
/// all violations found; empty means the CMDP is well formed. Tolerance 1e-12
/// on stochasticity.
std::vector<Violation> validate_cmdp(const TabularCmdp& m);
std::vector<Violation> validate_policy(const Policy& pi, int n_states, int n_actions);
std::vector<Violation> validate_mixture(const MixturePolicy& mix, int n_states, int n_actions);

/// Exact policy evaluation: solves (I - gamma P_pi) x = r_pi (and the same
/// with c_pi) by dense LU and returns (rho.x, rho.y). Throws
/// std::invalid_argument on dimension mismatch.
ValuePair exact_policy_values(const TabularCmdp& m, const Policy& pi);

/// Value of a mixture: weighted sum of exact component values.
ValuePair exact_mixture_values(const TabularCmdp& m, const MixturePolicy& mix);

/// Distance between two CMDPs on the same state/action space: the largest of
/// the sup-norm reward gap, sup-norm constraint gap, TV distance of the
/// initial distributions and the max over (s,a) of the TV distance between
/// transition rows. TV is half the L1 distance.
double cmdp_distance(const TabularCmdp& m1, const TabularCmdp& m2);

/// Early-exit variant: true iff cmdp_distance(m1, m2) <= eps. Bails out of the
/// row scan as soon as the running max exceeds eps.
bool cmdp_within(const TabularCmdp& m1, const TabularCmdp& m2, double eps);

/// Rewrites a nonnegative cost table with budget semantics (discounted cost
/// <= budget) into a constraint table c' in [-1,1] with the paper's sign
/// convention: c'(s,a) = ((1-gamma)*budget - cost(s,a)) / scale, so that
/// V_{c'}(pi) = (budget - V_cost(pi)) / scale and V_{c'} >= 0 iff
/// V_cost <= budget. Throws if scale is too small to keep c' in [-1,1].
std::vector<double> budget_to_margin(const std::vector<double>& cost_table, double budget,
                                     double gamma, double scale);

/// Smallest admissible scale, floored at 1: max(1, max |(1-gamma)b - cost|).
double default_margin_scale(const std::vector<double>& cost_table, double budget, double gamma);

} // namespace cmrl
