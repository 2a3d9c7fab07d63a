#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lzwave/common.hpp"
#include "lzwave/tracking.hpp"

namespace lzwave {

enum class Objective { tracking, entropy };

struct CostSpec {
    Objective objective = Objective::tracking;
    // clip bound on every returned cost; sized so squared tracking errors at
    // the default noise scale stay unclipped
    double g_max = 2500.0;
    double softmax_beta = 1.0;     // sharpness per dB of energy margin
    bool entropy_paper_sign = false;  // report sum p log p instead of entropy

    void validate() const {
        if (g_max <= 0.0) throw ConfigError("CostSpec: g_max must be > 0");
        if (softmax_beta < 0.0) throw ConfigError("CostSpec: softmax_beta must be >= 0");
    }
};

inline double clip_cost(double g, const CostSpec& spec) {
    return std::clamp(g, -spec.g_max, spec.g_max);
}

/// Squared Euclidean distance between the unfiltered measurement and the
/// tracker's estimate, clipped to the cost bound.
inline double g_track(const StateVec& measurement, const StateVec& estimate,
                      const CostSpec& spec) {
    const double dr = measurement[0] - estimate[0];
    const double dv = measurement[1] - estimate[1];
    return clip_cost(dr * dr + dv * dv, spec);
}

/// Worst-case cost charged when no detection occurred.
inline double g_track_missed(const CostSpec& spec) { return spec.g_max; }

/// Probability that the target occupies each gated cell, built as a softmax
/// of each cell's energy margin over the detection threshold.
struct CellProbabilityMap {
    std::vector<double> probs;
};

inline CellProbabilityMap cell_probabilities(std::span<const double> cell_energies_db,
                                             double threshold_db, double beta) {
    if (cell_energies_db.empty())
        throw std::invalid_argument("cell_probabilities: empty gate");
    CellProbabilityMap map;
    map.probs.resize(cell_energies_db.size());
    double max_exponent = -1e300;
    for (std::size_t i = 0; i < cell_energies_db.size(); ++i) {
        map.probs[i] = beta * (cell_energies_db[i] - threshold_db);
        max_exponent = std::max(max_exponent, map.probs[i]);
    }
    double norm = 0.0;
    for (double& p : map.probs) {
        p = std::exp(p - max_exponent);
        norm += p;
    }
    for (double& p : map.probs) p /= norm;
    return map;
}

/// Positional-uncertainty cost over the gated cell probabilities. By default
/// this is the Shannon entropy (nats), so that minimizing the cost
/// concentrates the probability mass; the sign-flipped sum p log p form is
/// available through the spec.
inline double g_entropy(const CellProbabilityMap& map, const CostSpec& spec) {
    double entropy = 0.0;
    for (double p : map.probs)
        if (p > 0.0) entropy -= p * std::log(p);
    return clip_cost(spec.entropy_paper_sign ? -entropy : entropy, spec);
}

}  // namespace lzwave
