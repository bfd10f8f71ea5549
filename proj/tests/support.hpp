#pragma once

#include "cmrl/cmdp.hpp"
#include "cmrl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace cmrl::testing {

inline std::vector<double> random_simplex(int n, Rng& rng) {
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
        x = exp1(rng);
        sum += x;
    }
    for (double& x : v) x /= sum;
    // renormalize exactly so row-sum checks at 1e-12 hold
    double s2 = 0.0;
    for (size_t i = 0; i + 1 < v.size(); ++i) s2 += v[i];
    v.back() = 1.0 - s2;
    return v;
}

inline TabularCmdp random_cmdp(int S, int A, double gamma, Rng& rng) {
    TabularCmdp m = TabularCmdp::zeros(S, A, gamma);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    m.rho = random_simplex(S, rng);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            auto row = random_simplex(S, rng);
            for (int s2 = 0; s2 < S; ++s2) m.p(s, a, s2) = row[s2];
            m.reward(s, a) = ur(rng);
            m.constraint(s, a) = uc(rng);
        }
    }
    return m;
}

// Nearby CMDP: mixes each transition row toward a fresh random row and nudges
// the tables, keeping all range invariants.
inline TabularCmdp perturbed_cmdp(const TabularCmdp& base, double magnitude, Rng& rng) {
    TabularCmdp m = base;
    std::uniform_real_distribution<double> u(-magnitude, magnitude);
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            auto fresh = random_simplex(m.n_states, rng);
            double lambda = std::abs(u(rng));
            double sum = 0.0;
            for (int s2 = 0; s2 < m.n_states; ++s2) {
                m.p(s, a, s2) = (1.0 - lambda) * base.p(s, a, s2) + lambda * fresh[s2];
                sum += m.p(s, a, s2);
            }
            m.p(s, a, m.n_states - 1) += 1.0 - sum;
            m.reward(s, a) = std::clamp(base.reward(s, a) + u(rng), 0.0, 1.0);
            m.constraint(s, a) = std::clamp(base.constraint(s, a) + u(rng), -1.0, 1.0);
        }
    }
    return m;
}

inline Policy random_policy(int S, int A, Rng& rng) {
    Policy pi;
    pi.n_states = S;
    pi.n_actions = A;
    pi.probs.reserve(static_cast<size_t>(S) * A);
    for (int s = 0; s < S; ++s) {
        auto row = random_simplex(A, rng);
        pi.probs.insert(pi.probs.end(), row.begin(), row.end());
    }
    return pi;
}

} // namespace cmrl::testing
