#pragma once

#include "cmrl/cmdp.hpp"
#include "cmrl/planner.hpp"
#include "cmrl/rng.hpp"
#include "cmrl/task_sampler.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cmrl {

struct TrainConfig {
    double eps = 1e-3;        // accuracy parameter
    double delta = 0.1;       // confidence level
    double xi = 0.1;          // safety margin required of pi_s
    int n_init = 0;           // 0 = the default ceil(ln(1/delta)^2 / delta^2)
    int max_doublings = 20;
    std::uint64_t rng_seed = 0;
    FeasibleMode feasibility_mode = FeasibleMode::Generic;

    int initial_sample_count() const;
    /// The theory-faithful regime needs (8L+18) eps <= xi; returns false when
    /// the configuration leaves it (a warning, not an error).
    bool theory_regime(double gamma) const;
};

/// Output of the greedy cover construction over one batch of samples.
struct CoverSet {
    std::vector<int> member_rows;            // indices into the sample batch
    std::vector<double> member_params;       // generating task index of each member
    std::vector<TabularCmdp> member_cmdps;
    double pairwise_min_distance = 0.0;      // 0 when fewer than two members
    double covered_fraction = 0.0;
};

/// Greedy cover of Subroutine 3: builds the exact check matrix
/// A[i][j] = oracle_check(M_i, M_j, eps, delta/N^2), then repeatedly selects
/// the still-uncovered column whose ball covers the most uncovered rows
/// (ties to the lowest index) until at most 3*delta*N rows stay uncovered.
/// Restricting candidates to uncovered columns keeps selected members
/// pairwise more than eps apart.
CoverSet build_cover(const std::vector<TaskDraw>& samples, double eps, double delta);

/// One tuple of the policy-value set: a cover member's near-optimal policy
/// with its predicted values and the predicted values of pi_s on the same
/// CMDP. Exact oracles make every prediction a true value.
struct PolicyValueTuple {
    Policy policy;
    double u = 0.0;   // reward value of the policy on its cover CMDP
    double v = 0.0;   // constraint value of the policy
    double u_s = 0.0; // reward value of pi_s on the same CMDP
    double v_s = 0.0; // constraint value of pi_s
    double task_param = 0.0;
};

struct TrainRound {
    int n_samples = 0;
    int cover_size = 0;
    double statistic = 0.0; // sqrt(|U| ln(2N/delta) / (N - |U|))
};

struct TrainingBundle {
    Policy pi_s;
    std::vector<PolicyValueTuple> tuples;
    TrainConfig config;
    double gamma = 0.0;
    std::vector<TrainRound> log;
    CoverSet final_cover;
};

struct TrainError {
    enum class Kind { DoublingsExhausted, FeasibilityFailed, OptimalityFailed } kind;
    std::string detail;
    double last_statistic = 0.0;
    double best_margin = 0.0;
};

struct TrainResult {
    bool success = false;
    TrainingBundle bundle;
    TrainError error{TrainError::Kind::DoublingsExhausted, "", 0.0, 0.0};
};

/// The training phase: sample N tasks, build the cover, evaluate the stopping
/// statistic; double N while it exceeds delta. On success call the optimal
/// oracle per cover member (confidence delta/(2|U|)) and the feasibility
/// oracle on the cover (margin xi, confidence delta/2) and assemble the
/// policy-value set.
TrainResult train(const TaskSampler& sampler, const TrainConfig& config);

double stopping_statistic(int cover_size, int n_samples, double delta);

/// Greedy cover size over a fixed sample at radius eps, stopping once at
/// least a (1-delta) fraction is covered; an upper-bound estimate of the
/// covering number of the distribution's high-density region.
int estimate_covering_number_from(const std::vector<TaskDraw>& samples, double eps, double delta);
int estimate_covering_number(const TaskSampler& sampler, double eps, double delta, int n_samples,
                             std::uint64_t rng_seed);

} // namespace cmrl
