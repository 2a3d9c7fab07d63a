#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lzwave/common.hpp"

namespace lzwave {

/// Finite alphabets for the interleaved (observation, action) process.
struct SymbolAlphabet {
    int observation_arity = 2;
    int action_arity = 1;

    void validate() const {
        if (observation_arity < 1 || action_arity < 1)
            throw ConfigError("SymbolAlphabet: arities must be >= 1");
    }
};

/// Add-half sequential predictive (KT estimator) from raw counts.
inline double kt_predictive(std::uint64_t symbol_count, std::uint64_t total_count, int arity) {
    return (static_cast<double>(symbol_count) + 0.5)
         / (static_cast<double>(total_count) + 0.5 * static_cast<double>(arity));
}

/// log probability of a whole sequence under the sequential KT estimator.
inline double sequential_kt_log_probability(std::span<const int> sequence, int arity) {
    if (arity < 1) throw ConfigError("sequential_kt: arity must be >= 1");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(arity), 0);
    std::uint64_t total = 0;
    double log_prob = 0.0;
    for (int sym : sequence) {
        if (sym < 0 || sym >= arity)
            throw AlphabetError("sequential_kt: symbol outside alphabet");
        log_prob += std::log(kt_predictive(counts[static_cast<std::size_t>(sym)], total, arity));
        ++counts[static_cast<std::size_t>(sym)];
        ++total;
    }
    return log_prob;
}

inline double sequential_kt_probability(std::span<const int> sequence, int arity) {
    return std::exp(sequential_kt_log_probability(sequence, arity));
}

/// Variable-depth context tree over interleaved (observation, action)
/// histories.
///
/// A node represents an observation-terminated context: the phrase-relative
/// history y_1, (w_1, y_2), (w_2, y_3), ... ending in an observation. The
/// edge into a node carries the (action, next observation) pair that
/// extended its parent; edges out of the root carry the phrase's first
/// observation (action slot fixed to 0). Each node holds, per action, the
/// outcome counts of the observation that followed this context, the
/// sequential KT block probability of those outcomes, the mixed block
/// probability, and a scalar cost-to-go.
class ContextTree {
public:
    struct Node {
        int depth = 0;
        int last_obs = -1;  // observation ending this context; -1 at the root
        std::uint64_t visit_count = 0;
        double cost_to_go = 0.0;
        std::vector<std::uint64_t> next_obs_counts;  // action-major [a * |Y| + y]
        std::vector<std::uint64_t> action_totals;    // per-action row sums
        std::vector<double> cost_sums;               // per (action, next obs)
        std::vector<double> log_kt;                  // per action, log P_e
        std::vector<double> log_weighted;            // per action, log P_w
        std::map<int, std::unique_ptr<Node>> children;  // key = a * |Y| + y

        Node(int node_depth, int obs, const SymbolAlphabet& a)
            : depth(node_depth),
              last_obs(obs),
              next_obs_counts(static_cast<std::size_t>(a.action_arity) * a.observation_arity, 0),
              action_totals(static_cast<std::size_t>(a.action_arity), 0),
              cost_sums(static_cast<std::size_t>(a.action_arity) * a.observation_arity, 0.0),
              log_kt(static_cast<std::size_t>(a.action_arity), 0.0),
              log_weighted(static_cast<std::size_t>(a.action_arity), 0.0) {}
    };

    /// One completed (observation, action) pair of a phrase path.
    struct PathStep {
        int obs;
        int action;
    };

    /// Growing-depth tree: the depth bound tracks the deepest inserted node,
    /// limited by `depth_cap`; insertions beyond the cap are counted as
    /// truncation events instead of growing the tree.
    explicit ContextTree(SymbolAlphabet alphabet, int depth_cap = 16)
        : m_alphabet(alphabet), m_depth_cap(depth_cap) {
        m_alphabet.validate();
        if (depth_cap < 1) throw ConfigError("ContextTree: depth_cap must be >= 1");
        m_root = std::make_unique<Node>(0, -1, m_alphabet);
    }

    /// Fixed-depth tree for sequence modelling: the depth bound is pinned to
    /// `depth_bound` regardless of what has been inserted.
    static ContextTree fixed_depth(SymbolAlphabet alphabet, int depth_bound) {
        if (depth_bound < 0) throw ConfigError("ContextTree: depth bound must be >= 0");
        ContextTree t(alphabet, std::max(depth_bound, 1));
        t.m_fixed_bound = depth_bound;
        return t;
    }

    const SymbolAlphabet& alphabet() const { return m_alphabet; }
    const Node& root() const { return *m_root; }
    Node& mutable_root() { return *m_root; }

    /// Current depth bound D: fixed if configured, else the deepest node.
    int depth_bound() const { return m_fixed_bound >= 0 ? m_fixed_bound : m_max_depth; }
    int depth_cap() const { return m_depth_cap; }
    std::uint64_t node_count() const { return m_node_count; }
    std::uint64_t truncation_events() const { return m_truncation_events; }

    int edge_key(int action, int obs) const { return action * m_alphabet.observation_arity + obs; }

    const Node* child(const Node& parent, int action, int obs) const {
        auto it = parent.children.find(edge_key(action, obs));
        return it == parent.children.end() ? nullptr : it->second.get();
    }
    Node* child(Node& parent, int action, int obs) {
        auto it = parent.children.find(edge_key(action, obs));
        return it == parent.children.end() ? nullptr : it->second.get();
    }

    /// KT predictive of the next observation given this context and action.
    double kt_estimate(const Node& node, int action, int next_obs) const {
        check_action(action);
        check_obs(next_obs);
        const std::size_t idx = static_cast<std::size_t>(edge_key(action, next_obs));
        return kt_predictive(node.next_obs_counts[idx],
                             node.action_totals[static_cast<std::size_t>(action)],
                             m_alphabet.observation_arity);
    }

    /// Mixed block probability of the node's outcomes under `action`:
    /// P_e at the depth bound, otherwise 1/2 P_e + 1/2 * prod(children P_w).
    double ctw_weighted_prob(const Node& node, int action) const {
        check_action(action);
        return std::exp(node.log_weighted[static_cast<std::size_t>(action)]);
    }
    double ctw_log_weighted(const Node& node, int action) const {
        check_action(action);
        return node.log_weighted[static_cast<std::size_t>(action)];
    }

    /// Walks the interleaved history from the root. `obs_history` must hold
    /// one more entry than `action_history` (or both empty, giving the root).
    /// Returns nullptr when the walk exits the tree.
    const Node* lookup_context(std::span<const int> obs_history,
                               std::span<const int> action_history) const {
        if (obs_history.empty() && action_history.empty()) return m_root.get();
        if (obs_history.size() != action_history.size() + 1)
            throw std::invalid_argument("lookup_context: misaligned histories");
        const Node* cur = m_root.get();
        for (std::size_t i = 0; i < obs_history.size() && cur; ++i) {
            int action = i == 0 ? 0 : action_history[i - 1];
            cur = child(*cur, action, obs_history[i]);
        }
        return cur;
    }

    /// Records one completed observation at a node under `action`: updates
    /// counts, the sequential KT block probability and the per-outcome cost
    /// accumulator. Does not touch the weighted probabilities.
    void record_outcome(Node& node, int action, int next_obs, double cost = 0.0) {
        check_action(action);
        check_obs(next_obs);
        const std::size_t a = static_cast<std::size_t>(action);
        const std::size_t idx = static_cast<std::size_t>(edge_key(action, next_obs));
        node.log_kt[a] += std::log(
            kt_predictive(node.next_obs_counts[idx], node.action_totals[a],
                          m_alphabet.observation_arity));
        ++node.next_obs_counts[idx];
        ++node.action_totals[a];
        ++node.visit_count;
        node.cost_sums[idx] += cost;
    }

    /// Recomputes the node's weighted probabilities from its own KT estimate
    /// and its children. Children must already be up to date.
    void refresh_weighted(Node& node) {
        const int bound = depth_bound();
        for (int a = 0; a < m_alphabet.action_arity; ++a) {
            const std::size_t ai = static_cast<std::size_t>(a);
            if (node.depth >= bound) {
                node.log_weighted[ai] = node.log_kt[ai];
            } else {
                double children_sum = 0.0;
                for (const auto& [key, c] : node.children)
                    children_sum += c->log_weighted[ai];
                node.log_weighted[ai] =
                    kLogHalf + log_add_exp(node.log_kt[ai], children_sum);
            }
        }
    }

    Node* find_or_create_child(Node& parent, int action, int obs) {
        check_action(action);
        check_obs(obs);
        const int key = edge_key(action, obs);
        auto it = parent.children.find(key);
        if (it != parent.children.end()) return it->second.get();
        auto node = std::make_unique<Node>(parent.depth + 1, obs, m_alphabet);
        Node* raw = node.get();
        parent.children.emplace(key, std::move(node));
        ++m_node_count;
        if (raw->depth > m_max_depth) m_max_depth = raw->depth;
        return raw;
    }

    /// Backward update over a terminated phrase.
    ///
    /// `completed` holds the (y_u, w_u) pairs for phrase positions
    /// 1 .. m-1, `dangling_obs` is y_m (the observation whose context was
    /// unknown), `action` is w_m and `next_obs` is y_{m+1}. `costs`, when
    /// non-empty, carries the incurred cost at each of the m positions.
    ///
    /// Walks the existing path nodes n_1 .. n_{m-1}, creates n_m if absent
    /// (at most one new leaf), then traverses backwards recording each
    /// position's outcome (w_u, y_{u+1}) at n_u and refreshing the weighted
    /// probabilities bottom-up. Paths deeper than the depth cap are
    /// truncated and counted.
    ///
    /// Returns the path nodes n_1 .. n_m', root excluded, shallow first.
    std::vector<Node*> record_transition(std::span<const PathStep> completed,
                                         int dangling_obs, int action, int next_obs,
                                         std::span<const double> costs = {}) {
        const std::size_t m = completed.size() + 1;
        if (!costs.empty() && costs.size() != m)
            throw std::invalid_argument("record_transition: costs/path size mismatch");

        const bool fits = m <= static_cast<std::size_t>(m_depth_cap);
        const std::size_t walk = fits ? m - 1 : static_cast<std::size_t>(m_depth_cap);
        std::vector<Node*> path;
        path.reserve(walk + 1);
        Node* cur = m_root.get();
        for (std::size_t i = 0; i < walk; ++i) {
            int in_action = i == 0 ? 0 : completed[i - 1].action;
            Node* nxt = child(*cur, in_action, completed[i].obs);
            if (!nxt)
                throw std::logic_error("record_transition: interior path node missing");
            path.push_back(nxt);
            cur = nxt;
        }
        if (fits) {
            int in_action = m == 1 ? 0 : completed[m - 2].action;
            path.push_back(find_or_create_child(*cur, in_action, dangling_obs));
        } else {
            ++m_truncation_events;
        }

        // outcome at position u is (w_u, y_{u+1}); y_{m+1} is next_obs
        for (std::size_t u = path.size(); u >= 1; --u) {
            Node& n = *path[u - 1];
            int w_u = u == m ? action : completed[u - 1].action;
            int y_next = u == m ? next_obs : (u == m - 1 ? dangling_obs : completed[u].obs);
            record_outcome(n, w_u, y_next, costs.empty() ? 0.0 : costs[u - 1]);
            refresh_weighted(n);
        }
        return path;
    }

    /// Deterministic line-oriented serialization: depth-first in edge-key
    /// order, one node per line with counts, log-probabilities and J.
    void dump(std::ostream& os) const {
        dump_node(os, *m_root, -1);
    }
    std::string dump() const {
        std::ostringstream oss;
        dump(oss);
        return oss.str();
    }

private:
    void check_obs(int y) const {
        if (y < 0 || y >= m_alphabet.observation_arity)
            throw AlphabetError("observation symbol outside alphabet");
    }
    void check_action(int w) const {
        if (w < 0 || w >= m_alphabet.action_arity)
            throw AlphabetError("action symbol outside alphabet");
    }

    void dump_node(std::ostream& os, const Node& n, int in_key) const {
        char buf[64];
        os << "d=" << n.depth;
        if (in_key < 0) {
            os << " edge=-";
        } else {
            os << " edge=" << in_key / m_alphabet.observation_arity << ":"
               << in_key % m_alphabet.observation_arity;
        }
        os << " n=" << n.visit_count;
        std::snprintf(buf, sizeof buf, "%.9g", n.cost_to_go);
        os << " J=" << buf << " pe=";
        for (std::size_t a = 0; a < n.log_kt.size(); ++a) {
            std::snprintf(buf, sizeof buf, "%.9g", n.log_kt[a]);
            os << (a ? "," : "") << buf;
        }
        os << " pw=";
        for (std::size_t a = 0; a < n.log_weighted.size(); ++a) {
            std::snprintf(buf, sizeof buf, "%.9g", n.log_weighted[a]);
            os << (a ? "," : "") << buf;
        }
        os << " counts=";
        bool first = true;
        for (std::size_t i = 0; i < n.next_obs_counts.size(); ++i) {
            if (n.next_obs_counts[i] == 0) continue;
            os << (first ? "" : ",")
               << i / static_cast<std::size_t>(m_alphabet.observation_arity) << ":"
               << i % static_cast<std::size_t>(m_alphabet.observation_arity) << ":"
               << n.next_obs_counts[i];
            first = false;
        }
        os << "\n";
        for (const auto& [key, c] : n.children) dump_node(os, *c, key);
    }

    SymbolAlphabet m_alphabet;
    int m_depth_cap;
    int m_fixed_bound = -1;
    int m_max_depth = 0;
    std::uint64_t m_node_count = 0;
    std::uint64_t m_truncation_events = 0;
    std::unique_ptr<Node> m_root;
};

/// Classic bounded-depth CTW sequence model built on ContextTree.
///
/// Each incoming symbol is recorded at every node on its context path (the
/// most recent `depth` symbols, zero-padded at the start), after which the
/// weighted probabilities are refreshed bottom-up. The root's weighted
/// probability is then the Bayes mixture over all tree sources of depth at
/// most `depth`.
class CtwSequenceModel {
public:
    CtwSequenceModel(int arity, int depth)
        : m_tree(ContextTree::fixed_depth(SymbolAlphabet{arity, 1}, depth)),
          m_depth(depth) {}

    void update(int symbol) {
        std::vector<ContextTree::Node*> path;
        path.reserve(static_cast<std::size_t>(m_depth) + 1);
        ContextTree::Node* cur = &m_tree.mutable_root();
        path.push_back(cur);
        for (int d = 0; d < m_depth; ++d) {
            const std::size_t h = m_history.size();
            int ctx_sym = d < static_cast<int>(h) ? m_history[h - 1 - static_cast<std::size_t>(d)] : 0;
            cur = m_tree.find_or_create_child(*cur, 0, ctx_sym);
            path.push_back(cur);
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            m_tree.record_outcome(**it, 0, symbol);
            m_tree.refresh_weighted(**it);
        }
        m_history.push_back(symbol);
    }

    double log_block_probability() const { return m_tree.ctw_log_weighted(m_tree.root(), 0); }
    double block_probability() const { return std::exp(log_block_probability()); }
    const ContextTree& tree() const { return m_tree; }

private:
    ContextTree m_tree;
    int m_depth;
    std::vector<int> m_history;
};

}  // namespace lzwave
