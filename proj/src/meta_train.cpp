#include "cmrl/meta_train.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cmrl {

int TrainConfig::initial_sample_count() const {
    if (n_init > 0) return n_init;
    const double l = std::log(1.0 / delta);
    return static_cast<int>(std::ceil(l * l / (delta * delta)));
}

bool TrainConfig::theory_regime(double gamma) const {
    return (8.0 * smoothness_constant(gamma) + 18.0) * eps <= xi;
}

namespace {

// Dense symmetric bit matrix of exact eps-ball membership.
class CheckMatrix {
public:
    CheckMatrix(const std::vector<TaskDraw>& samples, double eps) : n_(static_cast<int>(samples.size())) {
        words_ = (n_ + 63) / 64;
        bits_.assign(static_cast<size_t>(n_) * words_, 0);
        for (int i = 0; i < n_; ++i) set(i, i);

        const int hw = static_cast<int>(std::thread::hardware_concurrency());
        const int n_threads = std::clamp(hw, 1, std::max(1, n_ / 64));
        auto work = [&](int t0) {
            for (int i = t0; i < n_; i += n_threads) {
                for (int j = i + 1; j < n_; ++j) {
                    if (cmdp_within(samples[i].cmdp, samples[j].cmdp, eps)) set(i, j);
                }
            }
        };
        if (n_threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        // mirror the upper triangle
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (get(i, j)) set(j, i);
    }

    int size() const { return n_; }
    const std::uint64_t* row(int i) const { return &bits_[static_cast<size_t>(i) * words_]; }
    int words() const { return words_; }
    bool get(int i, int j) const { return (row(i)[j >> 6] >> (j & 63)) & 1u; }

private:
    void set(int i, int j) { bits_[static_cast<size_t>(i) * words_ + (j >> 6)] |= 1ULL << (j & 63); }

    int n_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Greedy rule shared by the cover subroutine and the covering-number
// estimator: among still-uncovered columns pick the one whose ball covers the
// most uncovered rows, lowest index on ties, until at most `max_uncovered`
// rows remain uncovered.
std::vector<int> greedy_cover(const CheckMatrix& A, double max_uncovered, double* covered_fraction) {
    const int n = A.size();
    const int words = A.words();
    std::vector<std::uint64_t> uncovered(words, ~0ULL);
    if (n & 63) uncovered[words - 1] = (1ULL << (n & 63)) - 1;
    int n_uncovered = n;

    std::vector<int> selected;
    while (n_uncovered > max_uncovered && static_cast<int>(selected.size()) < n) {
        int best = -1;
        int best_count = -1;
        for (int j = 0; j < n; ++j) {
            if (!((uncovered[j >> 6] >> (j & 63)) & 1u)) continue; // candidates stay uncovered
            const std::uint64_t* rj = A.row(j);
            int count = 0;
            for (int w = 0; w < words; ++w) count += std::popcount(rj[w] & uncovered[w]);
            if (count > best_count) {
                best_count = count;
                best = j;
            }
        }
        if (best < 0) break;
        selected.push_back(best);
        const std::uint64_t* rb = A.row(best);
        for (int w = 0; w < words; ++w) uncovered[w] &= ~rb[w];
        n_uncovered -= best_count;
    }
    if (covered_fraction) *covered_fraction = n > 0 ? 1.0 - static_cast<double>(n_uncovered) / n : 1.0;
    return selected;
}

} // namespace

CoverSet build_cover(const std::vector<TaskDraw>& samples, double eps, double delta) {
    if (samples.empty()) throw std::invalid_argument("build_cover: no samples");
    const int n = static_cast<int>(samples.size());
    CheckMatrix A(samples, eps);

    CoverSet cover;
    cover.member_rows = greedy_cover(A, 3.0 * delta * n, &cover.covered_fraction);
    for (int row : cover.member_rows) {
        cover.member_params.push_back(samples[row].param);
        cover.member_cmdps.push_back(samples[row].cmdp);
    }
    cover.pairwise_min_distance = 0.0;
    if (cover.member_rows.size() >= 2) {
        double dmin = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < cover.member_cmdps.size(); ++i)
            for (size_t j = i + 1; j < cover.member_cmdps.size(); ++j)
                dmin = std::min(dmin, cmdp_distance(cover.member_cmdps[i], cover.member_cmdps[j]));
        cover.pairwise_min_distance = dmin;
    }
    return cover;
}

double stopping_statistic(int cover_size, int n_samples, double delta) {
    if (cover_size >= n_samples) return std::numeric_limits<double>::infinity();
    return std::sqrt(cover_size * std::log(2.0 * n_samples / delta) / (n_samples - cover_size));
}

TrainResult train(const TaskSampler& sampler, const TrainConfig& config) {
    TrainResult result;
    TrainingBundle& bundle = result.bundle;
    bundle.config = config;

    int n = config.initial_sample_count();
    CoverSet cover;
    bool stopped = false;
    for (int round = 0; round <= config.max_doublings; ++round) {
        Rng rng = make_rng(config.rng_seed, static_cast<std::uint64_t>(round));
        std::vector<TaskDraw> samples;
        samples.reserve(n);
        for (int i = 0; i < n; ++i) samples.push_back(sampler.draw(rng));
        bundle.gamma = samples[0].cmdp.gamma;

        cover = build_cover(samples, config.eps, config.delta);
        const double stat = stopping_statistic(static_cast<int>(cover.member_rows.size()), n,
                                               config.delta);
        bundle.log.push_back({n, static_cast<int>(cover.member_rows.size()), stat});
        if (stat <= config.delta) {
            stopped = true;
            break;
        }
        n *= 2;
    }
    if (!stopped) {
        result.error = {TrainError::Kind::DoublingsExhausted,
                        "stopping statistic still above delta after max_doublings rounds",
                        bundle.log.back().statistic, 0.0};
        return result;
    }

    const size_t cover_size = cover.member_cmdps.size();
    std::vector<OracleOutcome> optima;
    for (size_t i = 0; i < cover_size; ++i) {
        auto opt = oracle_optimal(cover.member_cmdps[i], config.eps,
                                  config.delta / (2.0 * static_cast<double>(cover_size)));
        if (!opt) {
            result.error = {TrainError::Kind::OptimalityFailed,
                            "cover member " + std::to_string(i) + " admits no feasible policy",
                            0.0, 0.0};
            return result;
        }
        optima.push_back(std::move(*opt));
    }

    FeasibleResult feas = oracle_feasible(cover.member_cmdps, config.xi, config.delta / 2.0,
                                          config.feasibility_mode, cover.member_params);
    if (!feas.success) {
        result.error = {TrainError::Kind::FeasibilityFailed, feas.message, 0.0, feas.margin};
        return result;
    }

    bundle.pi_s = feas.policy;
    for (size_t i = 0; i < cover_size; ++i) {
        PolicyValueTuple t;
        t.policy = std::move(optima[i].policy);
        t.u = optima[i].values[0].v_reward;
        t.v = optima[i].values[0].v_constraint;
        t.u_s = feas.values[i].v_reward;
        t.v_s = feas.values[i].v_constraint;
        t.task_param = cover.member_params[i];
        bundle.tuples.push_back(std::move(t));
    }
    bundle.final_cover = std::move(cover);
    result.success = true;
    return result;
}

int estimate_covering_number_from(const std::vector<TaskDraw>& samples, double eps, double delta) {
    if (samples.empty()) throw std::invalid_argument("estimate_covering_number: no samples");
    CheckMatrix A(samples, eps);
    auto selected = greedy_cover(A, delta * static_cast<double>(samples.size()), nullptr);
    return static_cast<int>(selected.size());
}

int estimate_covering_number(const TaskSampler& sampler, double eps, double delta, int n_samples,
                             std::uint64_t rng_seed) {
    Rng rng = make_rng(rng_seed, 0);
    std::vector<TaskDraw> samples;
    samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) samples.push_back(sampler.draw(rng));
    return estimate_covering_number_from(samples, eps, delta);
}

} // namespace cmrl
