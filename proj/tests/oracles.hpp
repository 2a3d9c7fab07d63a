#pragma once

// Test-only reference computations, kept independent of the library code
// paths they are used to check.

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Bayes mixture over bounded-depth binary tree sources
// ---------------------------------------------------------------------------

struct TreeSource {
    bool leaf = true;
    std::unique_ptr<TreeSource> child0, child1;
};

inline std::unique_ptr<TreeSource> clone_tree(const TreeSource& t) {
    auto copy = std::make_unique<TreeSource>();
    copy->leaf = t.leaf;
    if (!t.leaf) {
        copy->child0 = clone_tree(*t.child0);
        copy->child1 = clone_tree(*t.child1);
    }
    return copy;
}

inline void enumerate_tree_sources(int depth, int max_depth,
                                   std::vector<std::unique_ptr<TreeSource>>& out) {
    out.push_back(std::make_unique<TreeSource>());
    if (depth == max_depth) return;
    std::vector<std::unique_ptr<TreeSource>> lefts;
    enumerate_tree_sources(depth + 1, max_depth, lefts);
    for (auto& l : lefts) {
        std::vector<std::unique_ptr<TreeSource>> rights;
        enumerate_tree_sources(depth + 1, max_depth, rights);
        for (auto& r : rights) {
            auto node = std::make_unique<TreeSource>();
            node->leaf = false;
            node->child0 = clone_tree(*l);
            node->child1 = std::move(r);
            out.push_back(std::move(node));
        }
    }
}

/// Natural CTW prior: each split costs 1/2, each optional leaf costs 1/2,
/// leaves at the depth bound are forced.
inline double tree_prior(const TreeSource& t, int depth, int max_depth) {
    if (t.leaf) return depth < max_depth ? 0.5 : 1.0;
    return 0.5 * tree_prior(*t.child0, depth + 1, max_depth)
               * tree_prior(*t.child1, depth + 1, max_depth);
}

/// Walks each symbol to its leaf (context = most recent symbols first,
/// zero-padded past) and accumulates the sequential add-half probability.
inline double tree_likelihood(const TreeSource& t, const std::vector<int>& seq) {
    std::vector<const TreeSource*> leaves;
    std::vector<std::array<std::uint64_t, 2>> counts;
    double prob = 1.0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const TreeSource* node = &t;
        int back = 1;
        while (!node->leaf) {
            const int ctx = back <= static_cast<int>(k) ? seq[k - static_cast<std::size_t>(back)] : 0;
            node = ctx == 0 ? node->child0.get() : node->child1.get();
            ++back;
        }
        std::size_t li = 0;
        for (; li < leaves.size(); ++li)
            if (leaves[li] == node) break;
        if (li == leaves.size()) {
            leaves.push_back(node);
            counts.push_back({0, 0});
        }
        auto& c = counts[li];
        prob *= (static_cast<double>(c[static_cast<std::size_t>(seq[k])]) + 0.5)
              / (static_cast<double>(c[0] + c[1]) + 1.0);
        ++c[static_cast<std::size_t>(seq[k])];
    }
    return prob;
}

inline double ctw_mixture_probability(const std::vector<int>& seq, int max_depth) {
    std::vector<std::unique_ptr<TreeSource>> trees;
    enumerate_tree_sources(0, max_depth, trees);
    double mixture = 0.0;
    for (const auto& t : trees)
        mixture += tree_prior(*t, 0, max_depth) * tree_likelihood(*t, seq);
    return mixture;
}

// ---------------------------------------------------------------------------
// finite MDPs: average cost of stationary policies by enumeration
// ---------------------------------------------------------------------------

struct Mdp {
    int states = 0;
    int actions = 0;
    // transition[s][a][s'], cost[s][a][s']
    std::vector<std::vector<std::vector<double>>> transition;
    std::vector<std::vector<std::vector<double>>> cost;
};

inline std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& chain) {
    const std::size_t n = chain.size();
    std::vector<double> d(n, 1.0 / static_cast<double>(n)), next(n, 0.0);
    for (int iter = 0; iter < 200000; ++iter) {
        // lazy chain (P + I) / 2 shares the stationary distribution and is
        // aperiodic, so power iteration converges for periodic inputs too
        for (std::size_t j = 0; j < n; ++j) next[j] = 0.5 * d[j];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[j] += 0.5 * d[i] * chain[i][j];
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) delta += std::abs(next[j] - d[j]);
        d.swap(next);
        if (delta < 1e-14) break;
    }
    return d;
}

inline double policy_average_cost(const Mdp& mdp, const std::vector<int>& policy) {
    std::vector<std::vector<double>> chain(static_cast<std::size_t>(mdp.states),
                                           std::vector<double>(static_cast<std::size_t>(mdp.states)));
    for (int s = 0; s < mdp.states; ++s)
        for (int t = 0; t < mdp.states; ++t)
            chain[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                mdp.transition[static_cast<std::size_t>(s)]
                              [static_cast<std::size_t>(policy[static_cast<std::size_t>(s)])]
                              [static_cast<std::size_t>(t)];
    const auto d = stationary_distribution(chain);
    double lambda = 0.0;
    for (int s = 0; s < mdp.states; ++s) {
        const int a = policy[static_cast<std::size_t>(s)];
        for (int t = 0; t < mdp.states; ++t)
            lambda += d[static_cast<std::size_t>(s)]
                    * mdp.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]
                                    [static_cast<std::size_t>(t)]
                    * mdp.cost[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]
                              [static_cast<std::size_t>(t)];
    }
    return lambda;
}

/// Minimum average cost over all deterministic stationary policies.
inline double optimal_average_cost(const Mdp& mdp, std::vector<int>* best_policy = nullptr) {
    std::vector<int> policy(static_cast<std::size_t>(mdp.states), 0);
    double best = 1e300;
    long combos = 1;
    for (int s = 0; s < mdp.states; ++s) combos *= mdp.actions;
    for (long c = 0; c < combos; ++c) {
        long rem = c;
        for (int s = 0; s < mdp.states; ++s) {
            policy[static_cast<std::size_t>(s)] = static_cast<int>(rem % mdp.actions);
            rem /= mdp.actions;
        }
        const double lambda = policy_average_cost(mdp, policy);
        if (lambda < best) {
            best = lambda;
            if (best_policy) *best_policy = policy;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// steady-state Riccati recursion for the 2x2 CV filter with H = I
// ---------------------------------------------------------------------------

using M2 = std::array<double, 4>;  // row major

inline M2 m2_mul(const M2& a, const M2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
inline M2 m2_add(const M2& a, const M2& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline M2 m2_sub(const M2& a, const M2& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline M2 m2_transpose(const M2& a) { return {a[0], a[2], a[1], a[3]}; }
inline M2 m2_inverse(const M2& a) {
    const double det = a[0] * a[3] - a[1] * a[2];
    return {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};
}

/// Iterates the predicted-covariance Riccati recursion
///   P <- F (P - P (P + R)^-1 P) F^T + Q
/// and returns the converged steady-state gain K = P (P + R)^-1.
inline M2 riccati_steady_state_gain(const M2& f, const M2& q, const M2& r, int iterations) {
    M2 p = q;
    for (int i = 0; i < iterations; ++i) {
        const M2 gain = m2_mul(p, m2_inverse(m2_add(p, r)));
        const M2 updated = m2_sub(p, m2_mul(gain, p));
        p = m2_add(m2_mul(m2_mul(f, updated), m2_transpose(f)), q);
    }
    return m2_mul(p, m2_inverse(m2_add(p, r)));
}

// ---------------------------------------------------------------------------
// stationary band distribution of a lifted order-3 chain
// ---------------------------------------------------------------------------

inline std::vector<double> lifted_order3_band_distribution(const std::vector<double>& table,
                                                           int bands) {
    const std::size_t s = static_cast<std::size_t>(bands);
    const std::size_t n = s * s * s;
    std::vector<std::vector<double>> lifted(n, std::vector<double>(n, 0.0));
    for (std::size_t b3 = 0; b3 < s; ++b3)
        for (std::size_t b2 = 0; b2 < s; ++b2)
            for (std::size_t b1 = 0; b1 < s; ++b1) {
                const std::size_t from = (b3 * s + b2) * s + b1;
                for (std::size_t nxt = 0; nxt < s; ++nxt)
                    lifted[from][(b2 * s + b1) * s + nxt] = table[from * s + nxt];
            }
    const auto d = stationary_distribution(lifted);
    std::vector<double> marginal(s, 0.0);
    for (std::size_t i = 0; i < n; ++i) marginal[i % s] += d[i];
    return marginal;
}

}  // namespace oracle
