#include "cmrl/planner.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace cmrl;
using cmrl::testing::random_cmdp;

namespace {

// 1-state, 2-action instance with an analytic optimum: maximize p subject to
// (1-2p) >= 0, so the LP mixes the actions evenly and the objective is
// 0.5/(1-gamma) = 5.
TabularCmdp analytic_instance() {
    TabularCmdp m = TabularCmdp::zeros(1, 2, 0.9);
    m.rho = {1.0};
    m.p(0, 0, 0) = 1.0;
    m.p(0, 1, 0) = 1.0;
    m.reward(0, 0) = 1.0;
    m.reward(0, 1) = 0.0;
    m.constraint(0, 0) = -1.0;
    m.constraint(0, 1) = 1.0;
    return m;
}

// Every deterministic policy of a small CMDP, evaluated exactly.
std::vector<std::pair<Policy, ValuePair>> enumerate_deterministic(const TabularCmdp& m) {
    std::vector<std::pair<Policy, ValuePair>> out;
    const int S = m.n_states, A = m.n_actions;
    std::vector<int> actions(S, 0);
    for (;;) {
        Policy pi = Policy::deterministic(S, A, actions);
        out.emplace_back(pi, exact_policy_values(m, pi));
        int s = 0;
        while (s < S && ++actions[s] == A) actions[s++] = 0;
        if (s == S) break;
    }
    return out;
}

} // namespace

TEST_CASE("solve_cmdp_lp on the analytic 1-state instance") {
    TabularCmdp m = analytic_instance();
    LpOutcome lp = solve_cmdp_lp(m, 0.0);
    REQUIRE(lp.feasible);
    CHECK(lp.objective == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(lp.occupancy.at(0, 0) == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(lp.occupancy.at(0, 1) == doctest::Approx(5.0).epsilon(1e-8));

    OccupancyResidual res = occupancy_residual(m, lp.occupancy);
    CHECK(res.flow <= 1e-8);
    CHECK(res.mass <= 1e-8);
}

TEST_CASE("solve_cmdp_lp reports infeasibility above the attainable value") {
    TabularCmdp m = analytic_instance();
    LpOutcome lp = solve_cmdp_lp(m, 1.0 / (1.0 - m.gamma) + 1.0);
    CHECK_FALSE(lp.feasible);
}

TEST_CASE("solve_cmdp_lp with a slack constraint matches exhaustive search") {
    Rng rng = make_rng(41);
    TabularCmdp m = random_cmdp(3, 2, 0.9, rng);
    m.c.assign(m.c.size(), 1.0); // constraint never binds
    LpOutcome lp = solve_cmdp_lp(m, 0.0);
    REQUIRE(lp.feasible);
    double best = -1e100;
    for (auto& [pi, v] : enumerate_deterministic(m)) best = std::max(best, v.v_reward);
    CHECK(lp.objective == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("occupancy_to_policy normalizes rows and defaults unvisited states to uniform") {
    OccupancyMeasure mu;
    mu.n_states = 3;
    mu.n_actions = 2;
    mu.mu = {2.0, 0.0, 0.3, 0.3, 0.0, 0.0};
    Policy pi = occupancy_to_policy(mu);
    CHECK(pi.at(0, 0) == 1.0);
    CHECK(pi.at(0, 1) == 0.0);
    CHECK(pi.at(1, 0) == doctest::Approx(0.5));
    CHECK(pi.at(1, 1) == doctest::Approx(0.5));
    CHECK(pi.at(2, 0) == doctest::Approx(0.5)); // unreachable: uniform
}

TEST_CASE("policy extracted from the LP reproduces the LP objective and threshold") {
    Rng rng = make_rng(43);
    for (int rep = 0; rep < 10; ++rep) {
        TabularCmdp m = random_cmdp(4, 3, 0.85, rng);
        const double threshold = -0.5;
        LpOutcome lp = solve_cmdp_lp(m, threshold);
        if (!lp.feasible) continue;
        Policy pi = occupancy_to_policy(lp.occupancy);
        ValuePair v = exact_policy_values(m, pi);
        CHECK(v.v_reward == doctest::Approx(lp.objective).epsilon(1e-8));
        CHECK(v.v_constraint >= threshold - 1e-8);
    }
}

TEST_CASE("an unreachable state gets a uniform row without affecting the value") {
    // state 2 unreachable from rho under any policy
    TabularCmdp m = TabularCmdp::zeros(3, 2, 0.5);
    m.rho = {1.0, 0.0, 0.0};
    for (int a = 0; a < 2; ++a) {
        m.p(0, a, 1) = 1.0;
        m.p(1, a, 0) = 1.0;
        m.p(2, a, 2) = 1.0;
        m.reward(2, a) = 1.0;
    }
    m.reward(0, 0) = 0.4;
    m.reward(0, 1) = 0.2;
    m.c.assign(m.c.size(), 1.0);
    LpOutcome lp = solve_cmdp_lp(m, 0.0);
    REQUIRE(lp.feasible);
    Policy pi = occupancy_to_policy(lp.occupancy);
    CHECK(pi.at(2, 0) == doctest::Approx(0.5));
    CHECK(exact_policy_values(m, pi).v_reward == doctest::Approx(lp.objective).epsilon(1e-8));
}

TEST_CASE("oracle_optimal matches the analytic instance") {
    auto out = oracle_optimal(analytic_instance(), 0.01, 0.05);
    REQUIRE(out.has_value());
    CHECK(out->values[0].v_reward == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(out->values[0].v_constraint == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(out->policy.at(0, 0) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("oracle_optimal equals the unconstrained optimum when c is slack") {
    Rng rng = make_rng(47);
    TabularCmdp m = random_cmdp(3, 2, 0.9, rng);
    m.c.assign(m.c.size(), 1.0);
    auto out = oracle_optimal(m, 0.01, 0.05);
    REQUIRE(out.has_value());
    double best = -1e100;
    for (auto& [pi, v] : enumerate_deterministic(m)) best = std::max(best, v.v_reward);
    CHECK(out->values[0].v_reward == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("oracle_optimal reports infeasible CMDPs") {
    TabularCmdp m = analytic_instance();
    m.constraint(0, 0) = -1.0;
    m.constraint(0, 1) = -0.5; // every policy has V_c < 0
    CHECK_FALSE(oracle_optimal(m, 0.01, 0.05).has_value());
}

TEST_CASE("LP objective dominates every feasible deterministic policy") {
    Rng rng = make_rng(53);
    int done = 0;
    while (done < 20) {
        TabularCmdp m = random_cmdp(4, 3, 0.8, rng);
        auto out = oracle_optimal(m, 0.01, 0.05);
        if (!out) continue; // infeasible draw, resample
        ++done;
        for (auto& [pi, v] : enumerate_deterministic(m)) {
            if (v.v_constraint >= 0.0) CHECK(out->values[0].v_reward >= v.v_reward - 1e-8);
        }
        // reported values are exact re-evaluations
        ValuePair check = exact_policy_values(m, out->policy);
        CHECK(check.v_reward == doctest::Approx(out->values[0].v_reward).epsilon(1e-10));
    }
}

TEST_CASE("oracle_check compares the exact distance") {
    Rng rng = make_rng(59);
    TabularCmdp m = random_cmdp(3, 2, 0.9, rng);
    CHECK(oracle_check(m, m, 0.1, 0.05));
    TabularCmdp m2 = m;
    m2.reward(0, 0) = std::min(1.0, m.reward(0, 0) + 0.3);
    double d = cmdp_distance(m, m2);
    CHECK_FALSE(oracle_check(m, m2, d - 1e-6, 0.05));
    CHECK(oracle_check(m, m2, d + 1e-6, 0.05));
}

TEST_CASE("oracle_feasible on a single task returns a xi-feasible policy") {
    TabularCmdp m = analytic_instance();
    FeasibleResult res = oracle_feasible({m}, 0.1, 0.05, FeasibleMode::Generic);
    REQUIRE(res.success);
    CHECK(res.margin >= 0.1);
    CHECK(exact_policy_values(m, res.policy).v_constraint == doctest::Approx(res.margin).epsilon(1e-9));
}

TEST_CASE("oracle_feasible generic succeeds when the uniform policy is strictly feasible") {
    // both tasks give the uniform policy a constraint value of at least 0.2
    auto build = [](double high, double low) {
        TabularCmdp m = TabularCmdp::zeros(2, 2, 0.5);
        m.rho = {0.5, 0.5};
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) m.p(s, a, (s + a) % 2) = 1.0;
        m.constraint(0, 0) = high;
        m.constraint(0, 1) = low;
        m.constraint(1, 0) = low;
        m.constraint(1, 1) = high;
        return m;
    };
    std::vector<TabularCmdp> tasks = {build(0.5, -0.1), build(0.4, 0.0)};
    for (const auto& t : tasks)
        CHECK(exact_policy_values(t, Policy::uniform(2, 2)).v_constraint >= 0.2);

    FeasibleResult res = oracle_feasible(tasks, 0.1, 0.05, FeasibleMode::Generic);
    REQUIRE(res.success);
    for (size_t i = 0; i < tasks.size(); ++i) {
        CHECK(exact_policy_values(tasks[i], res.policy).v_constraint >= 0.1 - 1e-12);
        CHECK(res.values[i].v_constraint ==
              doctest::Approx(exact_policy_values(tasks[i], res.policy).v_constraint).epsilon(1e-10));
    }
}

TEST_CASE("oracle_feasible generic climbs out of an infeasible start") {
    // uniform start violates; only near-deterministic policies reach the margin
    TabularCmdp m = TabularCmdp::zeros(2, 2, 0.5);
    m.rho = {1.0, 0.0};
    for (int s = 0; s < 2; ++s) {
        m.p(s, 0, s) = 1.0;       // stay
        m.p(s, 1, 1 - s) = 1.0;   // switch
    }
    m.constraint(0, 0) = 0.8;
    m.constraint(0, 1) = -0.9;
    m.constraint(1, 0) = -0.9;
    m.constraint(1, 1) = 0.8;
    CHECK(exact_policy_values(m, Policy::uniform(2, 2)).v_constraint < 0.0);

    FeasibleResult res = oracle_feasible({m}, 0.5, 0.05, FeasibleMode::Generic);
    REQUIRE(res.success);
    CHECK(res.margin >= 0.5);
    // best-so-far margins are non-decreasing
    for (size_t i = 1; i < res.margin_history.size(); ++i)
        CHECK(res.margin_history[i] >= res.margin_history[i - 1]);
}

TEST_CASE("oracle_feasible reports failure with the best margin found") {
    TabularCmdp m = analytic_instance(); // max margin is 1/(1-gamma) at the safe arm
    FeasibleResult res =
        oracle_feasible({m}, 2.0 / (1.0 - m.gamma), 0.05, FeasibleMode::Generic, {}, 50);
    CHECK_FALSE(res.success);
    CHECK(res.margin < 2.0 / (1.0 - m.gamma));
    CHECK(!res.message.empty());
}
