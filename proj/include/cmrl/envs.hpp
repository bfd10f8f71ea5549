#pragma once

#include "cmrl/cmdp.hpp"
#include "cmrl/rng.hpp"
#include "cmrl/task_sampler.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cmrl {

struct Cell {
    int col = 0;
    int row = 0;
    bool operator==(const Cell&) const = default;
};

/// The gridworld family: reach the absorbing goal cell while keeping the
/// discounted time spent in the unsafe cells within budget. Unsafe cells sit
/// in the third and fifth columns so the direct route up the middle column is
/// fast but risky and the boundary route is slow but clean. The layout ships
/// as a versioned fixture so runs are reproducible; any layout satisfying the
/// same constraints can be substituted through the CLI.
struct GridworldLayout {
    int width = 7;
    int height = 7;
    Cell start{3, 0};
    Cell goal{3, 6};
    std::vector<Cell> unsafe_cells; // default: columns 2 and 4 (0-based), rows 2..5
    double reward = 10.0;           // per step at the goal, before scaling
    double cost = 10.0;             // per step in an unsafe cell
    double budget = 1.5;            // bound on the discounted cost
    double gamma = 0.9;
    double value_scale = 10.0;      // divides rewards and the margin transform

    static GridworldLayout standard();
};

/// Builds the 49-state CMDP at environment noise `noise_i` in [0, 0.5]: the
/// intended action executes with probability 1-i and each of the four actions
/// receives i/4 random mass; off-grid moves stay in place; the goal
/// self-loops. Rewards are scaled into [0,1] and the cost table is rewritten
/// by budget_to_margin so V_c >= 0 iff the discounted cost is within budget.
TabularCmdp build_gridworld(double noise_i, const GridworldLayout& layout = GridworldLayout::standard());

int gridworld_state(const GridworldLayout& layout, Cell cell);
Cell gridworld_cell(const GridworldLayout& layout, int state);

/// Scalar distribution of the task index: a Gaussian truncated to
/// [lo, hi], sampled by rejection.
struct TruncatedGaussian {
    double mean = 0.3;
    double stddev = 0.17320508075688773; // sqrt(0.03), the variance reading of N(0.3, 0.03)
    double lo = 0.0;
    double hi = 0.5;

    double sample(Rng& rng) const;
    /// Analytic mean of the truncated distribution.
    double truncated_mean() const;
};

enum class NoiseInterpretation { Variance, Stddev };

/// Noise distribution of the gridworld experiment. The source text writes
/// N(0.3, 0.03) without saying whether 0.03 is the variance or the standard
/// deviation; both readings are supported and the choice is recorded in run
/// outputs.
TruncatedGaussian gridworld_noise_distribution(NoiseInterpretation interp);

class GridworldSampler : public TaskSampler {
public:
    GridworldSampler(GridworldLayout layout, TruncatedGaussian noise)
        : layout_(std::move(layout)), noise_(noise) {}
    TaskDraw draw(Rng& rng) const override;
    std::optional<double> true_optimum(const TaskDraw& task) const override;
    bool constraint_monotone() const override { return true; }
    const GridworldLayout& layout() const { return layout_; }

private:
    GridworldLayout layout_;
    TruncatedGaussian noise_;
};

TaskSamplerPtr make_gridworld_sampler(const GridworldLayout& layout, const TruncatedGaussian& noise);

/// Degenerate distribution: every draw returns the same task.
class PointMassSampler : public TaskSampler {
public:
    explicit PointMassSampler(TaskDraw task) : task_(std::move(task)) {}
    TaskDraw draw(Rng&) const override { return task_; }
    bool constraint_monotone() const override { return true; }

private:
    TaskDraw task_;
};

/// A single-state two-action family used for desk-scale adaptation studies:
/// arm 0 is high-reward with a parameter-dependent constraint signal
/// c_risky(theta) = c_base - c_slope * theta, arm 1 is safe (c = 1, lower
/// reward). Tasks differ only in the constraint table, so the CMDP distance
/// between two tasks is c_slope * |theta1 - theta2|. Constraint values are
/// monotone non-increasing in theta.
struct TwoArmFamily {
    double gamma = 0.5;
    double r_risky = 1.0;
    double r_safe = 0.5;
    double c_base = 0.6;
    double c_slope = 0.1;

    TabularCmdp build(double theta) const;
};

class TwoArmSampler : public TaskSampler {
public:
    TwoArmSampler(TwoArmFamily family, TruncatedGaussian theta)
        : family_(family), theta_(theta) {}
    TaskDraw draw(Rng& rng) const override;
    std::optional<double> true_optimum(const TaskDraw& task) const override;
    bool constraint_monotone() const override { return true; }
    const TwoArmFamily& family() const { return family_; }

private:
    TwoArmFamily family_;
    TruncatedGaussian theta_;
};

} // namespace cmrl
