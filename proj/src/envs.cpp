#include "cmrl/envs.hpp"

#include "cmrl/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmrl {

GridworldLayout GridworldLayout::standard() {
    GridworldLayout l;
    for (int row = 2; row <= 5; ++row) {
        l.unsafe_cells.push_back({2, row});
        l.unsafe_cells.push_back({4, row});
    }
    return l;
}

int gridworld_state(const GridworldLayout& layout, Cell cell) {
    return cell.row * layout.width + cell.col;
}

Cell gridworld_cell(const GridworldLayout& layout, int state) {
    return Cell{state % layout.width, state / layout.width};
}

TabularCmdp build_gridworld(double noise_i, const GridworldLayout& layout) {
    if (noise_i < 0.0 || noise_i > 0.5)
        throw std::invalid_argument("build_gridworld: noise must be in [0, 0.5]");
    const int W = layout.width, H = layout.height;
    const int S = W * H;
    const int A = 4; // up, right, down, left
    TabularCmdp m = TabularCmdp::zeros(S, A, layout.gamma);
    m.rho[gridworld_state(layout, layout.start)] = 1.0;

    std::vector<bool> unsafe(S, false);
    for (Cell cell : layout.unsafe_cells) unsafe[gridworld_state(layout, cell)] = true;
    const int goal = gridworld_state(layout, layout.goal);

    auto move = [&](int s, int a) {
        Cell c = gridworld_cell(layout, s);
        switch (a) {
            case 0: c.row = std::min(c.row + 1, H - 1); break; // up
            case 1: c.col = std::min(c.col + 1, W - 1); break; // right
            case 2: c.row = std::max(c.row - 1, 0); break;     // down
            case 3: c.col = std::max(c.col - 1, 0); break;     // left
        }
        return gridworld_state(layout, c);
    };

    std::vector<double> cost(static_cast<size_t>(S) * A, 0.0);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            if (s == goal) {
                m.p(s, a, s) = 1.0;
                m.reward(s, a) = layout.reward / layout.value_scale;
            } else {
                // intended move keeps 1-i, each of the four moves gets i/4
                m.p(s, a, move(s, a)) += 1.0 - noise_i;
                for (int b = 0; b < A; ++b) m.p(s, a, move(s, b)) += noise_i / 4.0;
            }
            if (unsafe[s]) cost[static_cast<size_t>(s) * A + a] = layout.cost;
        }
    }
    m.c = budget_to_margin(cost, layout.budget, layout.gamma, layout.value_scale);
    return m;
}

double TruncatedGaussian::sample(Rng& rng) const {
    std::normal_distribution<double> n(mean, stddev);
    for (;;) {
        double x = n(rng);
        if (x >= lo && x <= hi) return x;
    }
}

double TruncatedGaussian::truncated_mean() const {
    auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); };
    auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    const double a = (lo - mean) / stddev;
    const double b = (hi - mean) / stddev;
    return mean + stddev * (phi(a) - phi(b)) / (Phi(b) - Phi(a));
}

TruncatedGaussian gridworld_noise_distribution(NoiseInterpretation interp) {
    TruncatedGaussian g;
    g.mean = 0.3;
    g.stddev = interp == NoiseInterpretation::Variance ? std::sqrt(0.03) : 0.03;
    g.lo = 0.0;
    g.hi = 0.5;
    return g;
}

TaskDraw GridworldSampler::draw(Rng& rng) const {
    double i = noise_.sample(rng);
    return TaskDraw{i, build_gridworld(i, layout_)};
}

std::optional<double> GridworldSampler::true_optimum(const TaskDraw& task) const {
    auto opt = oracle_optimal(task.cmdp, 0.0, 0.0);
    if (!opt) return std::nullopt;
    return opt->values[0].v_reward;
}

TaskSamplerPtr make_gridworld_sampler(const GridworldLayout& layout, const TruncatedGaussian& noise) {
    return std::make_shared<GridworldSampler>(layout, noise);
}

TabularCmdp TwoArmFamily::build(double theta) const {
    TabularCmdp m = TabularCmdp::zeros(1, 2, gamma);
    m.rho[0] = 1.0;
    m.p(0, 0, 0) = 1.0;
    m.p(0, 1, 0) = 1.0;
    m.reward(0, 0) = r_risky;
    m.reward(0, 1) = r_safe;
    m.constraint(0, 0) = c_base - c_slope * theta;
    m.constraint(0, 1) = 1.0;
    return m;
}

TaskDraw TwoArmSampler::draw(Rng& rng) const {
    double theta = theta_.sample(rng);
    return TaskDraw{theta, family_.build(theta)};
}

std::optional<double> TwoArmSampler::true_optimum(const TaskDraw& task) const {
    auto opt = oracle_optimal(task.cmdp, 0.0, 0.0);
    if (!opt) return std::nullopt;
    return opt->values[0].v_reward;
}

} // namespace cmrl
