#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lzwave/context_tree.hpp"
#include "lzwave/rng.hpp"
#include "oracles.hpp"

using lzwave::ContextTree;
using lzwave::CtwSequenceModel;
using lzwave::SymbolAlphabet;

TEST_CASE("kt_estimate matches the add-half rule") {
    ContextTree tree(SymbolAlphabet{2, 1});
    auto& root = tree.mutable_root();

    SECTION("uniform over 2 symbols with no counts") {
        CHECK(tree.kt_estimate(root, 0, 0) == Catch::Approx(0.5));
        CHECK(tree.kt_estimate(root, 0, 1) == Catch::Approx(0.5));
    }

    SECTION("counts {a: 3, b: 2} for the action") {
        for (int i = 0; i < 3; ++i) tree.record_outcome(root, 0, 0);
        for (int i = 0; i < 2; ++i) tree.record_outcome(root, 0, 1);
        CHECK(tree.kt_estimate(root, 0, 0) == Catch::Approx(3.5 / 6.0).epsilon(1e-12));
        CHECK(tree.kt_estimate(root, 0, 1) == Catch::Approx(2.5 / 6.0).epsilon(1e-12));
    }

    SECTION("uniform over 4 symbols with no counts") {
        ContextTree tree4(SymbolAlphabet{4, 1});
        CHECK(tree4.kt_estimate(tree4.root(), 0, 2) == Catch::Approx(0.25));
    }

    SECTION("symbols outside the alphabet are rejected") {
        CHECK_THROWS_AS(tree.kt_estimate(root, 0, 2), lzwave::AlphabetError);
        CHECK_THROWS_AS(tree.kt_estimate(root, 1, 0), lzwave::AlphabetError);
    }
}

TEST_CASE("kt predictive normalizes over the observation alphabet") {
    lzwave::Rng rng(7);
    for (int arity : {2, 3, 17}) {
        ContextTree tree(SymbolAlphabet{arity, 3});
        auto& root = tree.mutable_root();
        for (int i = 0; i < 500; ++i)
            tree.record_outcome(root, rng.uniform_int(3), rng.uniform_int(arity));
        for (int a = 0; a < 3; ++a) {
            double sum = 0.0;
            for (int y = 0; y < arity; ++y) sum += tree.kt_estimate(root, a, y);
            CHECK(sum == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("sequential KT block probabilities") {
    SECTION("single symbol is uniform") {
        std::vector<int> seq{0};
        CHECK(lzwave::sequential_kt_probability(seq, 2) == Catch::Approx(0.5));
    }

    SECTION("aab evaluates to 1/16") {
        std::vector<int> seq{0, 0, 1};
        CHECK(lzwave::sequential_kt_probability(seq, 2) == Catch::Approx(0.0625).epsilon(1e-12));
    }

    SECTION("constant sequences meet the redundancy bound") {
        for (int k : {16, 256, 4096}) {
            std::vector<int> seq(static_cast<std::size_t>(k), 1);
            const double bits = -lzwave::sequential_kt_log_probability(seq, 2) / std::log(2.0);
            // ideal code length of the constant source is 0 bits
            CHECK(bits <= 0.5 * std::log2(static_cast<double>(k)) + 2.0);
        }
    }

    SECTION("matches a direct per-step product") {
        lzwave::Rng rng(3);
        std::vector<int> seq;
        for (int i = 0; i < 200; ++i) seq.push_back(rng.uniform_int(3));
        double direct = 0.0;
        std::vector<std::uint64_t> counts(3, 0);
        std::uint64_t total = 0;
        for (int s : seq) {
            direct += std::log((counts[static_cast<std::size_t>(s)] + 0.5) / (total + 1.5));
            ++counts[static_cast<std::size_t>(s)];
            ++total;
        }
        CHECK(lzwave::sequential_kt_log_probability(seq, 3)
              == Catch::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("ctw weighted probability arithmetic") {
    // leaf at the depth bound returns its own estimate
    ContextTree leaf_tree = ContextTree::fixed_depth(SymbolAlphabet{2, 1}, 0);
    auto& leaf = leaf_tree.mutable_root();
    leaf.log_kt[0] = std::log(0.3);
    leaf_tree.refresh_weighted(leaf);
    CHECK(leaf_tree.ctw_weighted_prob(leaf, 0) == Catch::Approx(0.3).epsilon(1e-12));

    // internal node mixes its estimate with the children product
    ContextTree tree = ContextTree::fixed_depth(SymbolAlphabet{2, 1}, 1);
    auto& root = tree.mutable_root();
    auto* c0 = tree.find_or_create_child(root, 0, 0);
    auto* c1 = tree.find_or_create_child(root, 0, 1);
    c0->log_kt[0] = std::log(0.5);
    c1->log_kt[0] = std::log(0.5);
    tree.refresh_weighted(*c0);
    tree.refresh_weighted(*c1);
    root.log_kt[0] = std::log(0.5);
    tree.refresh_weighted(root);
    CHECK(tree.ctw_weighted_prob(root, 0) == Catch::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("ctw equals the enumerated tree-source mixture at depth 2") {
    // subset here; the acceptance suite sweeps all 1024 length-10 sequences
    for (unsigned bits = 0; bits < 1024; bits += 7) {
        std::vector<int> seq(10);
        for (int i = 0; i < 10; ++i) seq[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
        CtwSequenceModel model(2, 2);
        for (int s : seq) model.update(s);
        const double expected = oracle::ctw_mixture_probability(seq, 2);
        CHECK(model.block_probability() == Catch::Approx(expected).margin(1e-12));
    }
}

TEST_CASE("ctw dominance: the mixture never loses more than one bit") {
    lzwave::Rng rng(11);
    CtwSequenceModel model(2, 3);
    for (int i = 0; i < 400; ++i) model.update(rng.uniform_real() < 0.3 ? 1 : 0);

    // walk every node and compare P_w to P_e
    std::vector<const ContextTree::Node*> stack{&model.tree().root()};
    while (!stack.empty()) {
        const auto* n = stack.back();
        stack.pop_back();
        CHECK(n->log_weighted[0] >= n->log_kt[0] + lzwave::kLogHalf - 1e-12);
        for (const auto& [key, child] : n->children) stack.push_back(child.get());
    }
}

TEST_CASE("log-domain probabilities survive a million-symbol stream") {
    lzwave::Rng rng(5);
    CtwSequenceModel model(2, 4);
    for (int i = 0; i < 1000000; ++i) model.update(rng.uniform_int(2));
    const double lp = model.log_block_probability();
    CHECK(std::isfinite(lp));
    CHECK(lp < -600000.0);  // ~1 bit per symbol in nats
}

TEST_CASE("lookup_context walks interleaved histories") {
    ContextTree tree(SymbolAlphabet{2, 2});

    SECTION("empty histories give the root") {
        CHECK(tree.lookup_context({}, {}) == &tree.root());
    }

    SECTION("inserted path is found with positive count") {
        tree.record_transition({}, 1, 0, 0, {});  // phrase 1 creates the prefix
        std::vector<ContextTree::PathStep> completed{{1, 0}};
        tree.record_transition(completed, 0, 1, 1, {});
        const std::vector<int> obs{1, 0};
        const std::vector<int> act{0};
        const auto* node = tree.lookup_context(obs, act);
        REQUIRE(node != nullptr);
        CHECK(node->visit_count >= 1);
        CHECK(node->depth == 2);
        CHECK(node->last_obs == 0);
    }

    SECTION("missing path is absent") {
        const std::vector<int> obs{0};
        CHECK(tree.lookup_context(obs, {}) == nullptr);
    }

    SECTION("misaligned histories are rejected") {
        const std::vector<int> obs{0};
        const std::vector<int> act{0, 1};
        CHECK_THROWS_AS(tree.lookup_context(obs, act), std::invalid_argument);
    }
}

TEST_CASE("record_transition grows the tree one leaf per phrase") {
    ContextTree tree(SymbolAlphabet{2, 2});
    CHECK(tree.node_count() == 0);

    // first phrase: single unknown position
    tree.record_transition({}, 1, 0, 0, {});
    CHECK(tree.node_count() == 1);

    // replay of the known path adds no nodes, only counts
    tree.record_transition({}, 1, 0, 1, {});
    CHECK(tree.node_count() == 1);
    const std::vector<int> obs{1};
    CHECK(tree.lookup_context(obs, {})->visit_count == 2);

    // scripted phrases: node count is phrase count (plus the root object)
    ContextTree scripted(SymbolAlphabet{2, 2});
    lzwave::Rng rng(2);
    int phrases = 0;
    std::vector<ContextTree::PathStep> path;
    for (int step = 0; step < 500; ++step) {
        int y = rng.uniform_int(2);
        int w = rng.uniform_int(2);
        // extend the phrase while the context is known, close it otherwise
        std::vector<int> obs_hist, act_hist;
        for (const auto& p : path) {
            obs_hist.push_back(p.obs);
            act_hist.push_back(p.action);
        }
        obs_hist.push_back(y);
        const auto* node = scripted.lookup_context(obs_hist, act_hist);
        if (node && node->visit_count > 0) {
            path.push_back({y, w});
        } else {
            const std::uint64_t before = scripted.node_count();
            scripted.record_transition(path, y, w, rng.uniform_int(2), {});
            CHECK(scripted.node_count() <= before + 1);
            ++phrases;
            path.clear();
        }
    }
    CHECK(scripted.node_count() == static_cast<std::uint64_t>(phrases));
}

TEST_CASE("deep phrases beyond the cap are truncated and counted") {
    ContextTree tree(SymbolAlphabet{1, 1}, 3);
    std::vector<ContextTree::PathStep> path;
    for (int phrase = 0; phrase < 6; ++phrase) {
        path.assign(static_cast<std::size_t>(phrase), ContextTree::PathStep{0, 0});
        tree.record_transition(path, 0, 0, 0, {});
    }
    CHECK(tree.node_count() == 3);
    CHECK(tree.truncation_events() == 3);  // phrases of length 4, 5, 6
    CHECK(tree.depth_bound() == 3);
}

TEST_CASE("tree dump is deterministic and complete") {
    ContextTree tree(SymbolAlphabet{2, 2});
    std::vector<ContextTree::PathStep> empty;
    std::vector<double> cost1{2.0};
    tree.record_transition(empty, 1, 0, 0, cost1);
    std::vector<ContextTree::PathStep> second{{1, 1}};
    std::vector<double> cost2{1.0, 3.0};
    tree.record_transition(second, 0, 1, 1, cost2);

    const std::string dump = tree.dump();
    CHECK(dump == tree.dump());
    CHECK(dump.find("d=0 edge=-") == 0);
    // two phrases -> two nodes plus the root line
    CHECK(std::count(dump.begin(), dump.end(), '\n') == 3);
}
