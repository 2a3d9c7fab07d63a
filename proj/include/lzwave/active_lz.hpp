#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lzwave/common.hpp"
#include "lzwave/context_tree.hpp"
#include "lzwave/policy.hpp"
#include "lzwave/rng.hpp"

namespace lzwave {

struct LearnerConfig {
    double discount = 0.95;       // gamma
    double epsilon0 = 1.0;        // exploration scale, eps_k = min(1, eps0/sqrt(k))
    double g_max = 2500.0;        // cost bound accepted from the environment
    int depth_cap = 16;           // hard cap on context depth
    std::uint64_t seed = 1;

    void validate() const {
        if (!(discount > 0.0 && discount < 1.0))
            throw ConfigError("LearnerConfig: discount must lie in (0, 1)");
        if (epsilon0 < 0.0)
            throw ConfigError("LearnerConfig: epsilon0 must be >= 0");
        if (g_max <= 0.0)
            throw ConfigError("LearnerConfig: g_max must be > 0");
        if (depth_cap < 1)
            throw ConfigError("LearnerConfig: depth_cap must be >= 1");
    }
};

/// Running empirical mean of incurred costs.
struct AverageCostTracker {
    double running_sum = 0.0;
    std::uint64_t steps = 0;

    void add(double cost) {
        running_sum += cost;
        ++steps;
    }
    double average() const {
        if (steps == 0)
            throw std::logic_error("AverageCostTracker: average of zero samples");
        return running_sum / static_cast<double>(steps);
    }
};

/// Phrase bookkeeping, exposed for inspection and tests.
struct PhraseState {
    std::uint64_t phrase_index = 1;  // b
    std::uint64_t phrase_start = 1;  // tau_b (global step index)
    std::size_t current_path_length = 0;
};

/// Phrase-parsing universal learner over a context tree.
///
/// Time is split into phrases. Within a phrase the interleaved
/// (observation, action) history addresses a known tree node and actions are
/// chosen epsilon-greedily against the cost-to-go stored there. When the
/// current context is not in the tree, a uniformly random action is taken,
/// the phrase terminates, the backward pass updates counts, KT and weighted
/// probabilities and cost-to-go along the whole phrase path (growing the
/// tree by at most one leaf), and the next phrase begins.
class ActiveLzLearner final : public WaveformPolicy {
public:
    ActiveLzLearner(SymbolAlphabet alphabet, LearnerConfig config)
        : m_alphabet(alphabet),
          m_config(config),
          m_tree(alphabet, config.depth_cap),
          m_rng(config.seed) {
        m_config.validate();
    }

    int select_waveform(int y) override {
        if (m_has_pending)
            throw std::logic_error("select_waveform called before observe_outcome");
        ++m_step;

        ContextTree::Node* candidate = nullptr;
        if (m_path.size() + 1 <= static_cast<std::size_t>(m_config.depth_cap)) {
            ContextTree::Node& parent = m_path.empty() ? m_tree.mutable_root() : *m_path.back();
            int in_action = m_path.empty() ? 0 : m_steps.back().action;
            candidate = m_tree.child(parent, in_action, y);
        }

        int w;
        if (candidate && candidate->visit_count > 0) {
            m_terminate = false;
            m_pending_node = candidate;
            if (m_rng.uniform_real() < epsilon_at(m_step))
                w = m_rng.uniform_int(m_alphabet.action_arity);
            else
                w = greedy_action(*candidate);
        } else {
            // unknown context: explore, then close the phrase on update
            m_terminate = true;
            m_pending_node = nullptr;
            w = m_rng.uniform_int(m_alphabet.action_arity);
        }
        m_pending_obs = y;
        m_pending_action = w;
        m_has_pending = true;
        return w;
    }

    void observe_outcome(int y, int w, double cost, int y_next) override {
        if (!m_has_pending || y != m_pending_obs || w != m_pending_action)
            throw std::logic_error("observe_outcome does not match the pending selection");
        if (std::abs(cost) > m_config.g_max * (1.0 + 1e-12))
            throw CostBoundError("observe_outcome: cost outside [-g_max, g_max]");
        m_has_pending = false;

        m_cost_tracker.add(cost);
        m_steps.push_back({y, w, cost});
        if (m_terminate)
            terminate_phrase(y_next);
        else
            m_path.push_back(m_pending_node);
        m_pending_node = nullptr;
    }

    /// Abandons any partial phrase at an episode boundary. Learned
    /// statistics persist.
    void begin_track() override {
        m_steps.clear();
        m_path.clear();
        m_has_pending = false;
        m_pending_node = nullptr;
        m_phrase.phrase_start = m_step + 1;
    }

    std::string name() const override { return "universal"; }

    /// argmin over actions of the one-step lookahead
    ///   sum_y' P(y'|context, w) * [ghat + gamma * J(successor)]
    /// with ties broken toward the lowest action index.
    int greedy_action(const ContextTree::Node& node) const {
        int best = 0;
        double best_cost = expected_cost(node, 0);
        for (int w = 1; w < m_alphabet.action_arity; ++w) {
            double c = expected_cost(node, w);
            if (c < best_cost) {
                best_cost = c;
                best = w;
            }
        }
        return best;
    }

    double epsilon_at(std::uint64_t k) const {
        if (k == 0) return 1.0;
        return std::min(1.0, m_config.epsilon0 / std::sqrt(static_cast<double>(k)));
    }

    double average_cost() const { return m_cost_tracker.average(); }
    const AverageCostTracker& cost_tracker() const { return m_cost_tracker; }
    const ContextTree& tree() const { return m_tree; }
    std::uint64_t step_count() const { return m_step; }
    const LearnerConfig& config() const { return m_config; }

    PhraseState phrase() const {
        PhraseState p = m_phrase;
        p.current_path_length = m_steps.size() + (m_has_pending ? 1 : 0);
        return p;
    }

private:
    struct StepRecord {
        int obs;
        int action;
        double cost;
    };

    /// Expected one-step cost plus discounted successor cost-to-go. Costs of
    /// outcomes never seen from this context fall back to the global running
    /// mean cost, and successor contexts outside the tree contribute the
    /// matching neutral tail mean_cost / (1 - gamma). A zero placeholder
    /// there would make every action's value hinge on how shallow its
    /// subtree happens to be, and the greedy step degenerates into subtree
    /// balancing instead of cost minimization.
    ///
    /// The transition predictive and the per-outcome cost estimate both
    /// shrink the node's own statistics toward the order-1 context sharing
    /// this node's last observation, weighted by the node's sample count.
    /// Sparse deep contexts otherwise gamble entire decisions on one-sample
    /// estimates.
    double expected_cost(const ContextTree::Node& node, int action) const {
        const double mean_cost =
            m_cost_tracker.steps > 0 ? m_cost_tracker.average() : 0.0;
        const double tail_value = mean_cost / (1.0 - m_config.discount);
        const int ysz = m_alphabet.observation_arity;

        const ContextTree::Node* coarse = nullptr;
        double node_weight = 1.0;
        if (node.depth > 1 && node.last_obs >= 0) {
            coarse = m_tree.child(m_tree.root(), 0, node.last_obs);
            const double samples =
                static_cast<double>(node.action_totals[static_cast<std::size_t>(action)]);
            node_weight = samples / (samples + 2.0);
        }

        double total = 0.0;
        for (int y = 0; y < ysz; ++y) {
            const std::size_t idx = static_cast<std::size_t>(action * ysz + y);
            double p = m_tree.kt_estimate(node, action, y);
            if (coarse)
                p = node_weight * p
                  + (1.0 - node_weight) * m_tree.kt_estimate(*coarse, action, y);
            const double ghat = blended_cost_estimate(node, coarse, idx, mean_cost);
            const ContextTree::Node* successor = m_tree.child(node, action, y);
            double j_next;
            if (successor) {
                j_next = successor->cost_to_go;
            } else {
                // successor context not in the tree yet: use the order-1
                // context for the successor observation before giving up on
                // structure entirely
                const ContextTree::Node* coarse_succ =
                    m_tree.child(m_tree.root(), 0, y);
                j_next = coarse_succ ? coarse_succ->cost_to_go : tail_value;
            }
            total += p * (ghat + m_config.discount * j_next);
        }
        return total;
    }

    /// Per-(action, next observation) cost estimate, shrunk toward the
    /// order-1 context's estimate by sample count; triples never seen at
    /// either level fall back to the global running mean.
    double blended_cost_estimate(const ContextTree::Node& node,
                                 const ContextTree::Node* coarse, std::size_t idx,
                                 double mean_cost) const {
        const double n_own = static_cast<double>(node.next_obs_counts[idx]);
        const double own =
            n_own > 0.0 ? node.cost_sums[idx] / n_own : mean_cost;
        if (!coarse || &node == coarse) return own;
        const double n_coarse = static_cast<double>(coarse->next_obs_counts[idx]);
        const double base =
            n_coarse > 0.0 ? coarse->cost_sums[idx] / n_coarse : mean_cost;
        const double weight = n_own / (n_own + 2.0);
        return weight * own + (1.0 - weight) * base;
    }

    void terminate_phrase(int y_next) {
        const std::size_t m = m_steps.size();
        std::vector<ContextTree::PathStep> completed;
        completed.reserve(m - 1);
        std::vector<double> costs;
        costs.reserve(m);
        for (std::size_t i = 0; i + 1 < m; ++i)
            completed.push_back({m_steps[i].obs, m_steps[i].action});
        for (const auto& s : m_steps) costs.push_back(s.cost);

        auto path = m_tree.record_transition(completed, m_steps[m - 1].obs,
                                             m_steps[m - 1].action, y_next, costs);
        for (auto it = path.rbegin(); it != path.rend(); ++it)
            (*it)->cost_to_go = backup_value(**it);

        m_steps.clear();
        m_path.clear();
        ++m_phrase.phrase_index;
        m_phrase.phrase_start = m_step + 1;
    }

    /// Backup target for Ĵ: the min runs over actions that have been sampled
    /// from this context. Folding never-sampled actions into the min would
    /// let their neutral prior value cap Ĵ at every context, hiding how
    /// expensive a bad state really is; the decision-time greedy still
    /// considers them, and the exploration schedule supplies the samples.
    double backup_value(const ContextTree::Node& node) const {
        double best = 0.0;
        bool any = false;
        for (int w = 0; w < m_alphabet.action_arity; ++w) {
            if (node.action_totals[static_cast<std::size_t>(w)] == 0) continue;
            const double e = expected_cost(node, w);
            if (!any || e < best) best = e;
            any = true;
        }
        if (!any) {
            best = expected_cost(node, 0);
            for (int w = 1; w < m_alphabet.action_arity; ++w)
                best = std::min(best, expected_cost(node, w));
        }
        return best;
    }

    SymbolAlphabet m_alphabet;
    LearnerConfig m_config;
    ContextTree m_tree;
    Rng m_rng;
    AverageCostTracker m_cost_tracker;
    PhraseState m_phrase;

    std::vector<StepRecord> m_steps;              // completed steps of the phrase
    std::vector<ContextTree::Node*> m_path;       // matched nodes n_1 .. n_d
    std::uint64_t m_step = 0;                     // global step counter k
    bool m_has_pending = false;
    bool m_terminate = false;
    int m_pending_obs = -1;
    int m_pending_action = -1;
    ContextTree::Node* m_pending_node = nullptr;
};

}  // namespace lzwave
