#include "cmrl/planner.hpp"

#include "cmrl/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmrl {

OccupancyResidual occupancy_residual(const TabularCmdp& m, const OccupancyMeasure& mu) {
    OccupancyResidual res;
    const int S = m.n_states, A = m.n_actions;
    double mass = 0.0;
    for (double v : mu.mu) mass += v;
    res.mass = std::abs(mass - 1.0 / (1.0 - m.gamma));
    for (int s = 0; s < S; ++s) {
        double out = 0.0;
        for (int a = 0; a < A; ++a) out += mu.at(s, a);
        double in = m.rho[s];
        for (int s2 = 0; s2 < S; ++s2)
            for (int a2 = 0; a2 < A; ++a2) in += m.gamma * m.p(s2, a2, s) * mu.at(s2, a2);
        res.flow = std::max(res.flow, std::abs(out - in));
    }
    return res;
}

LpOutcome solve_cmdp_lp(const TabularCmdp& m, double constraint_threshold) {
    const int S = m.n_states, A = m.n_actions;
    const int n = S * A;

    LinearProgram lp;
    lp.n_vars = n;
    lp.objective = m.r;
    lp.eq_rows.assign(S, std::vector<double>(n, 0.0));
    lp.eq_rhs.assign(S, 0.0);
    // flow conservation: sum_a mu(s,a) - gamma * sum_{s',a'} P(s|s',a') mu(s',a') = rho(s)
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) lp.eq_rows[s][s * A + a] += 1.0;
        for (int s2 = 0; s2 < S; ++s2)
            for (int a2 = 0; a2 < A; ++a2)
                lp.eq_rows[s][s2 * A + a2] -= m.gamma * m.p(s2, a2, s);
        lp.eq_rhs[s] = m.rho[s];
    }
    lp.ge_rows.push_back(m.c);
    lp.ge_rhs.push_back(constraint_threshold);

    LpSolution sol = solve_linear_program(lp);
    LpOutcome out;
    out.diagnostics = sol.message;
    if (sol.status == LpStatus::Infeasible) {
        out.feasible = false;
        return out;
    }
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("solve_cmdp_lp: solver failure: " + sol.message);
    out.feasible = true;
    out.objective = sol.objective;
    out.occupancy = OccupancyMeasure{S, A, std::move(sol.x)};
    return out;
}

Policy occupancy_to_policy(const OccupancyMeasure& mu) {
    Policy pi;
    pi.n_states = mu.n_states;
    pi.n_actions = mu.n_actions;
    pi.probs.assign(mu.mu.size(), 0.0);
    for (int s = 0; s < mu.n_states; ++s) {
        double mass = 0.0;
        for (int a = 0; a < mu.n_actions; ++a) mass += mu.at(s, a);
        if (mass <= 1e-12) {
            for (int a = 0; a < mu.n_actions; ++a) pi.at(s, a) = 1.0 / mu.n_actions;
        } else {
            for (int a = 0; a < mu.n_actions; ++a) pi.at(s, a) = mu.at(s, a) / mass;
        }
    }
    return pi;
}

std::optional<OracleOutcome> oracle_optimal(const TabularCmdp& m, double eps, double delta) {
    (void)eps;
    (void)delta; // exact implementation; kept for a drop-in sampled variant
    LpOutcome lp = solve_cmdp_lp(m, 0.0);
    if (!lp.feasible) return std::nullopt;
    OracleOutcome out;
    out.policy = occupancy_to_policy(lp.occupancy);
    out.values.push_back(exact_policy_values(m, out.policy));
    out.objective = lp.objective;
    out.constraint_slack = out.values[0].v_constraint;
    return out;
}

bool oracle_check(const TabularCmdp& m1, const TabularCmdp& m2, double eps, double delta) {
    (void)delta; // exact distance, the confidence budget is bookkeeping only
    return cmdp_within(m1, m2, eps);
}

namespace {

// Exact policy gradient of V_c with respect to the policy table:
// dV_c / dpi(a|s) = d_pi(s) * Q_c(s,a), with d_pi the discounted state
// occupancy from rho and Q_c the constraint action-value.
void constraint_gradient(const TabularCmdp& m, const Policy& pi, std::vector<double>& grad) {
    const int S = m.n_states, A = m.n_actions;
    Eigen::MatrixXd Api = Eigen::MatrixXd::Zero(S, S); // I - gamma P_pi
    Eigen::VectorXd c_pi(S);
    for (int s = 0; s < S; ++s) {
        double cs = 0.0;
        for (int a = 0; a < A; ++a) {
            const double w = pi.at(s, a);
            if (w == 0.0) continue;
            cs += w * m.constraint(s, a);
            for (int s2 = 0; s2 < S; ++s2) Api(s, s2) -= m.gamma * w * m.p(s, a, s2);
        }
        Api(s, s) += 1.0;
        c_pi(s) = cs;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Api);
    Eigen::VectorXd v = lu.solve(c_pi);
    Eigen::Map<const Eigen::VectorXd> rho(m.rho.data(), S);
    Eigen::VectorXd d = Api.transpose().partialPivLu().solve(rho);

    grad.assign(static_cast<size_t>(S) * A, 0.0);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            double q = m.constraint(s, a);
            for (int s2 = 0; s2 < S; ++s2) q += m.gamma * m.p(s, a, s2) * v(s2);
            grad[static_cast<size_t>(s) * A + a] = d(s) * q;
        }
    }
}

double min_constraint_value(const std::vector<TabularCmdp>& tasks, const Policy& pi,
                            std::vector<ValuePair>& values, int& worst) {
    values.clear();
    double margin = std::numeric_limits<double>::infinity();
    worst = 0;
    for (size_t i = 0; i < tasks.size(); ++i) {
        values.push_back(exact_policy_values(tasks[i], pi));
        if (values.back().v_constraint < margin) {
            margin = values.back().v_constraint;
            worst = static_cast<int>(i);
        }
    }
    return margin;
}

} // namespace

FeasibleResult oracle_feasible(const std::vector<TabularCmdp>& tasks, double xi, double delta,
                               FeasibleMode mode, const std::vector<double>& structured_params,
                               int max_iterations) {
    (void)delta;
    if (tasks.empty()) throw std::invalid_argument("oracle_feasible: empty task set");
    FeasibleResult res;

    if (mode == FeasibleMode::Structured) {
        if (structured_params.size() != tasks.size())
            throw std::invalid_argument("oracle_feasible: structured mode needs one parameter per task");
        const size_t worst = std::distance(
            structured_params.begin(),
            std::max_element(structured_params.begin(), structured_params.end()));
        LpOutcome lp = solve_cmdp_lp(tasks[worst], xi);
        if (!lp.feasible) {
            res.message = "worst-parameter CMDP admits no policy with margin xi";
            return res;
        }
        res.policy = occupancy_to_policy(lp.occupancy);
        int w = 0;
        res.margin = min_constraint_value(tasks, res.policy, res.values, w);
        res.margin_history.push_back(res.margin);
        res.success = res.margin >= xi - 1e-9;
        if (!res.success) res.message = "family is not constraint-monotone at this xi";
        return res;
    }

    // generic max-min mirror ascent, exponentiated-gradient steps on the
    // policy table against the worst-violation task
    const int S = tasks[0].n_states, A = tasks[0].n_actions;
    Policy pi = Policy::uniform(S, A);
    Policy best = pi;
    std::vector<ValuePair> values;
    int worst = 0;
    double best_margin = min_constraint_value(tasks, pi, values, worst);
    res.margin_history.push_back(best_margin);
    std::vector<double> grad;
    const double eta0 = (1.0 - tasks[0].gamma); // gradients scale like 1/(1-gamma)^2

    for (int t = 1; t <= max_iterations; ++t) {
        res.iterations = t;
        if (best_margin >= xi) break;
        constraint_gradient(tasks[worst], pi, grad);
        const double eta = eta0 / std::sqrt(static_cast<double>(t));
        for (int s = 0; s < S; ++s) {
            double z = 0.0;
            for (int a = 0; a < A; ++a) {
                double& w = pi.at(s, a);
                w = w * std::exp(eta * grad[static_cast<size_t>(s) * A + a]);
                z += w;
            }
            for (int a = 0; a < A; ++a) pi.at(s, a) /= z;
        }
        double margin = min_constraint_value(tasks, pi, values, worst);
        if (margin > best_margin) {
            best_margin = margin;
            best = pi;
        }
        res.margin_history.push_back(best_margin);
    }

    res.policy = best;
    int w = 0;
    res.margin = min_constraint_value(tasks, res.policy, res.values, w);
    res.success = res.margin >= xi;
    if (!res.success)
        res.message = "ascent cap reached; best margin " + std::to_string(res.margin) +
                      " below xi (simultaneous Slater may fail here)";
    return res;
}

} // namespace cmrl
