#include "cmrl/cmdp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cmrl {

namespace {

constexpr double kStochasticTol = 1e-12;

std::string loc(int s, int a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(%d,%d)", s, a);
    return buf;
}

} // namespace

TabularCmdp TabularCmdp::zeros(int n_states, int n_actions, double gamma) {
    TabularCmdp m;
    m.n_states = n_states;
    m.n_actions = n_actions;
    m.gamma = gamma;
    m.rho.assign(n_states, 0.0);
    m.P.assign(static_cast<size_t>(n_states) * n_actions * n_states, 0.0);
    m.r.assign(static_cast<size_t>(n_states) * n_actions, 0.0);
    m.c.assign(static_cast<size_t>(n_states) * n_actions, 0.0);
    return m;
}

Policy Policy::uniform(int n_states, int n_actions) {
    Policy pi;
    pi.n_states = n_states;
    pi.n_actions = n_actions;
    pi.probs.assign(static_cast<size_t>(n_states) * n_actions, 1.0 / n_actions);
    return pi;
}

Policy Policy::deterministic(int n_states, int n_actions, const std::vector<int>& action_per_state) {
    if (static_cast<int>(action_per_state.size()) != n_states)
        throw std::invalid_argument("deterministic policy: need one action per state");
    Policy pi;
    pi.n_states = n_states;
    pi.n_actions = n_actions;
    pi.probs.assign(static_cast<size_t>(n_states) * n_actions, 0.0);
    for (int s = 0; s < n_states; ++s) pi.at(s, action_per_state[s]) = 1.0;
    return pi;
}

MixturePolicy MixturePolicy::pure(Policy p) {
    return MixturePolicy{{std::move(p)}, {1.0}};
}

MixturePolicy MixturePolicy::of(Policy a, Policy b, double weight_a) {
    return MixturePolicy{{std::move(a), std::move(b)}, {weight_a, 1.0 - weight_a}};
}

double smoothness_constant(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0,1)");
    const double h = 1.0 - gamma;
    return 1.0 / h + 2.0 * gamma / (h * h);
}

std::vector<Violation> validate_cmdp(const TabularCmdp& m) {
    std::vector<Violation> out;
    if (m.n_states <= 0 || m.n_actions <= 0) {
        out.push_back({"non-positive state or action count", -1, -1, 0.0});
        return out;
    }
    const size_t sa = static_cast<size_t>(m.n_states) * m.n_actions;
    if (m.rho.size() != static_cast<size_t>(m.n_states) || m.P.size() != sa * m.n_states ||
        m.r.size() != sa || m.c.size() != sa) {
        out.push_back({"table sizes do not match n_states/n_actions", -1, -1, 0.0});
        return out;
    }
    if (!(m.gamma > 0.0 && m.gamma < 1.0))
        out.push_back({"gamma outside (0,1)", -1, -1, m.gamma});

    double rho_sum = 0.0;
    for (int s = 0; s < m.n_states; ++s) {
        if (m.rho[s] < 0.0)
            out.push_back({"negative initial probability at state " + std::to_string(s), s, -1, m.rho[s]});
        rho_sum += m.rho[s];
    }
    if (std::abs(rho_sum - 1.0) > kStochasticTol)
        out.push_back({"rho sum " + std::to_string(rho_sum) + " != 1", -1, -1, std::abs(rho_sum - 1.0)});

    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            double row_sum = 0.0;
            for (int s2 = 0; s2 < m.n_states; ++s2) {
                double p = m.p(s, a, s2);
                if (p < 0.0)
                    out.push_back({"negative transition probability at " + loc(s, a), s, a, p});
                row_sum += p;
            }
            if (std::abs(row_sum - 1.0) > kStochasticTol) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "row sum %.12g != 1 at %s", row_sum, loc(s, a).c_str());
                out.push_back({buf, s, a, std::abs(row_sum - 1.0)});
            }
            double rv = m.reward(s, a);
            if (rv < 0.0 || rv > 1.0)
                out.push_back({"reward out of [0,1] at " + loc(s, a), s, a, rv});
            double cv = m.constraint(s, a);
            if (cv < -1.0 || cv > 1.0)
                out.push_back({"constraint out of [-1,1] at " + loc(s, a), s, a, cv});
        }
    }
    return out;
}

std::vector<Violation> validate_policy(const Policy& pi, int n_states, int n_actions) {
    std::vector<Violation> out;
    if (pi.n_states != n_states || pi.n_actions != n_actions ||
        pi.probs.size() != static_cast<size_t>(n_states) * n_actions) {
        out.push_back({"policy dimensions do not match CMDP", -1, -1, 0.0});
        return out;
    }
    for (int s = 0; s < n_states; ++s) {
        double row_sum = 0.0;
        for (int a = 0; a < n_actions; ++a) {
            if (pi.at(s, a) < 0.0)
                out.push_back({"negative action probability at " + loc(s, a), s, a, pi.at(s, a)});
            row_sum += pi.at(s, a);
        }
        if (std::abs(row_sum - 1.0) > kStochasticTol)
            out.push_back({"policy row sum != 1 at state " + std::to_string(s), s, -1,
                           std::abs(row_sum - 1.0)});
    }
    return out;
}

std::vector<Violation> validate_mixture(const MixturePolicy& mix, int n_states, int n_actions) {
    std::vector<Violation> out;
    if (mix.components.empty()) {
        out.push_back({"mixture has no components", -1, -1, 0.0});
        return out;
    }
    if (mix.components.size() != mix.weights.size()) {
        out.push_back({"mixture weight count != component count", -1, -1, 0.0});
        return out;
    }
    double sum = 0.0;
    for (double w : mix.weights) {
        if (w < 0.0) out.push_back({"negative mixture weight", -1, -1, w});
        sum += w;
    }
    if (std::abs(sum - 1.0) > kStochasticTol)
        out.push_back({"mixture weights sum != 1", -1, -1, std::abs(sum - 1.0)});
    for (const Policy& pi : mix.components) {
        auto v = validate_policy(pi, n_states, n_actions);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

ValuePair exact_policy_values(const TabularCmdp& m, const Policy& pi) {
    if (pi.n_states != m.n_states || pi.n_actions != m.n_actions)
        throw std::invalid_argument("exact_policy_values: policy dimensions do not match CMDP");

    const int S = m.n_states;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(S, S); // I - gamma * P_pi
    Eigen::VectorXd r_pi(S), c_pi(S);
    for (int s = 0; s < S; ++s) {
        double rs = 0.0, cs = 0.0;
        for (int a = 0; a < m.n_actions; ++a) {
            const double w = pi.at(s, a);
            if (w == 0.0) continue;
            rs += w * m.reward(s, a);
            cs += w * m.constraint(s, a);
            for (int s2 = 0; s2 < S; ++s2) A(s, s2) -= m.gamma * w * m.p(s, a, s2);
        }
        A(s, s) += 1.0;
        r_pi(s) = rs;
        c_pi(s) = cs;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd x = lu.solve(r_pi);
    Eigen::VectorXd y = lu.solve(c_pi);

    ValuePair out;
    for (int s = 0; s < S; ++s) {
        out.v_reward += m.rho[s] * x(s);
        out.v_constraint += m.rho[s] * y(s);
    }
    return out;
}

ValuePair exact_mixture_values(const TabularCmdp& m, const MixturePolicy& mix) {
    if (mix.components.empty() || mix.components.size() != mix.weights.size())
        throw std::invalid_argument("exact_mixture_values: malformed mixture");
    ValuePair out;
    for (size_t k = 0; k < mix.components.size(); ++k) {
        if (mix.weights[k] == 0.0) continue;
        ValuePair v = exact_policy_values(m, mix.components[k]);
        out.v_reward += mix.weights[k] * v.v_reward;
        out.v_constraint += mix.weights[k] * v.v_constraint;
    }
    return out;
}

namespace {

void check_same_shape(const TabularCmdp& m1, const TabularCmdp& m2) {
    if (m1.n_states != m2.n_states || m1.n_actions != m2.n_actions)
        throw std::invalid_argument("cmdp_distance: state/action dimensions differ");
}

} // namespace

double cmdp_distance(const TabularCmdp& m1, const TabularCmdp& m2) {
    check_same_shape(m1, m2);
    double d = 0.0;
    for (size_t i = 0; i < m1.r.size(); ++i) d = std::max(d, std::abs(m1.r[i] - m2.r[i]));
    for (size_t i = 0; i < m1.c.size(); ++i) d = std::max(d, std::abs(m1.c[i] - m2.c[i]));
    double tv_rho = 0.0;
    for (int s = 0; s < m1.n_states; ++s) tv_rho += std::abs(m1.rho[s] - m2.rho[s]);
    d = std::max(d, 0.5 * tv_rho);
    const size_t rows = static_cast<size_t>(m1.n_states) * m1.n_actions;
    for (size_t row = 0; row < rows; ++row) {
        const double* p1 = &m1.P[row * m1.n_states];
        const double* p2 = &m2.P[row * m1.n_states];
        double l1 = 0.0;
        for (int s2 = 0; s2 < m1.n_states; ++s2) l1 += std::abs(p1[s2] - p2[s2]);
        d = std::max(d, 0.5 * l1);
    }
    return d;
}

bool cmdp_within(const TabularCmdp& m1, const TabularCmdp& m2, double eps) {
    check_same_shape(m1, m2);
    for (size_t i = 0; i < m1.r.size(); ++i)
        if (std::abs(m1.r[i] - m2.r[i]) > eps) return false;
    for (size_t i = 0; i < m1.c.size(); ++i)
        if (std::abs(m1.c[i] - m2.c[i]) > eps) return false;
    double tv_rho = 0.0;
    for (int s = 0; s < m1.n_states; ++s) tv_rho += std::abs(m1.rho[s] - m2.rho[s]);
    if (0.5 * tv_rho > eps) return false;
    const double l1_budget = 2.0 * eps;
    const size_t rows = static_cast<size_t>(m1.n_states) * m1.n_actions;
    for (size_t row = 0; row < rows; ++row) {
        const double* p1 = &m1.P[row * m1.n_states];
        const double* p2 = &m2.P[row * m1.n_states];
        double l1 = 0.0;
        for (int s2 = 0; s2 < m1.n_states; ++s2) {
            l1 += std::abs(p1[s2] - p2[s2]);
            if (l1 > l1_budget) return false;
        }
    }
    return true;
}

std::vector<double> budget_to_margin(const std::vector<double>& cost_table, double budget,
                                     double gamma, double scale) {
    if (scale <= 0.0) throw std::invalid_argument("budget_to_margin: scale must be positive");
    std::vector<double> out(cost_table.size());
    const double base = (1.0 - gamma) * budget;
    for (size_t i = 0; i < cost_table.size(); ++i) {
        out[i] = (base - cost_table[i]) / scale;
        if (out[i] < -1.0 || out[i] > 1.0)
            throw std::invalid_argument("budget_to_margin: scale too small, output leaves [-1,1]");
    }
    return out;
}

double default_margin_scale(const std::vector<double>& cost_table, double budget, double gamma) {
    double m = 1.0;
    const double base = (1.0 - gamma) * budget;
    for (double cost : cost_table) m = std::max(m, std::abs(base - cost));
    return m;
}

} // namespace cmrl
