#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "lzwave/common.hpp"
#include "lzwave/policy.hpp"
#include "lzwave/rng.hpp"

namespace lzwave {

/// Uniform random waveform selection.
class RandomPolicy final : public WaveformPolicy {
public:
    RandomPolicy(int action_arity, std::uint64_t seed)
        : m_actions(action_arity), m_rng(seed) {}

    int select_waveform(int) override { return m_rng.uniform_int(m_actions); }
    void observe_outcome(int, int, double, int) override {}
    std::string name() const override { return "random"; }

private:
    int m_actions;
    Rng m_rng;
};

/// Normal-Normal conjugate posterior over one arm's mean cost.
struct TSArmPosterior {
    double mean = 0.0;
    double variance = 1.0;
    std::uint64_t count = 0;
};

/// Gaussian Thompson Sampling over (observation symbol, action) cells.
///
/// The context is the current quantized observation alone; past waveforms
/// are deliberately not part of the context. Costs are normalized by g_max
/// and modelled with unit observation variance under a N(0, 1) prior.
class ThompsonSamplingPolicy final : public WaveformPolicy {
public:
    ThompsonSamplingPolicy(int action_arity, double g_max, std::uint64_t seed)
        : m_actions(action_arity), m_g_max(g_max), m_rng(seed) {
        if (action_arity < 1) throw ConfigError("ThompsonSamplingPolicy: no actions");
        if (g_max <= 0.0) throw ConfigError("ThompsonSamplingPolicy: g_max must be > 0");
    }

    int select_waveform(int observation) override {
        auto& arms = arms_for(observation);
        int best = 0;
        double best_sample = sample_arm(arms[0]);
        for (int w = 1; w < m_actions; ++w) {
            const double s = sample_arm(arms[static_cast<std::size_t>(w)]);
            if (s < best_sample) {
                best_sample = s;
                best = w;
            }
        }
        return best;
    }

    void observe_outcome(int observation, int action, double cost, int) override {
        auto& arm = arms_for(observation)[static_cast<std::size_t>(action)];
        const double x = cost / m_g_max;
        const double posterior_var = arm.variance / (arm.variance + 1.0);
        arm.mean = posterior_var * (arm.mean / arm.variance + x);
        arm.variance = posterior_var;
        ++arm.count;
    }

    std::string name() const override { return "ts"; }

    const TSArmPosterior& posterior(int observation, int action) const {
        auto it = m_arms.find(observation);
        if (it == m_arms.end()) return m_prior;
        return it->second[static_cast<std::size_t>(action)];
    }

private:
    std::vector<TSArmPosterior>& arms_for(int observation) {
        auto [it, inserted] = m_arms.try_emplace(observation);
        if (inserted) it->second.assign(static_cast<std::size_t>(m_actions), TSArmPosterior{});
        return it->second;
    }

    double sample_arm(const TSArmPosterior& arm) {
        return m_rng.normal(arm.mean, std::sqrt(arm.variance));
    }

    int m_actions;
    double m_g_max;
    Rng m_rng;
    std::map<int, std::vector<TSArmPosterior>> m_arms;
    TSArmPosterior m_prior;
};

}  // namespace lzwave
