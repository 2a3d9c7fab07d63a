#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lzwave/common.hpp"
#include "lzwave/rng.hpp"
#include "lzwave/tracking.hpp"

namespace lzwave {

struct SceneConfig {
    double carrier_hz = 2.5e9;
    double pri_s = 4.96e-4;
    int pulses_per_cpi = 128;
    int delay_cells = 64;     // M
    int doppler_cells = 32;   // N
    int subchannels = 4;      // S
    double snr0_db = 15.0;    // interference-free SINR ceiling
    double inr_db = 30.0;     // interference-to-noise ratio on collision
    double detection_threshold_db = 10.0;
    int memory_l = 1;         // target motion memory
    int memory_j = 2;         // channel response memory

    double sigma_range_m = 25.0;       // reference range noise at snr0
    double sigma_velocity_mps = 5.0;   // reference velocity noise at snr0
    double range_cell_m = 50.0;
    double doppler_cell_mps = 4.0;
    double persist_prob = 0.8;         // stochastic interferer majority-band weight
    double occupancy_flip_prob = 0.0;  // spectrum sensing bit-flip probability

    double cpi_duration_s() const { return pri_s * pulses_per_cpi; }
    long hypothesis_count() const {
        return static_cast<long>(delay_cells) * doppler_cells + 1;
    }

    void validate() const {
        if (delay_cells < 1 || doppler_cells < 1 || subchannels < 1)
            throw ConfigError("SceneConfig: grid and subchannel counts must be >= 1");
        if (pri_s <= 0.0 || pulses_per_cpi < 1)
            throw ConfigError("SceneConfig: invalid CPI timing");
        if (range_cell_m <= 0.0 || doppler_cell_mps <= 0.0)
            throw ConfigError("SceneConfig: cell sizes must be > 0");
        if (sigma_range_m < 0.0 || sigma_velocity_mps < 0.0)
            throw ConfigError("SceneConfig: noise sigmas must be >= 0");
        if (persist_prob < 0.0 || persist_prob > 1.0)
            throw ConfigError("SceneConfig: persist_prob must lie in [0, 1]");
        if (occupancy_flip_prob < 0.0 || occupancy_flip_prob > 1.0)
            throw ConfigError("SceneConfig: occupancy_flip_prob must lie in [0, 1]");
        if (memory_l < 0 || memory_j < 0)
            throw ConfigError("SceneConfig: memory lengths must be >= 0");
    }
};

struct TargetState {
    double range_m = 1000.0;
    double velocity_mps = 50.0;
};

/// Constant radial velocity over one CPI.
inline TargetState advance_target(const TargetState& state, const SceneConfig& config) {
    return {state.range_m + state.velocity_mps * config.cpi_duration_s(),
            state.velocity_mps};
}

/// Delay-Doppler cell of a kinematic state; -1 when outside the grid
/// ("no target" hypothesis). Velocity axis is centred on zero.
inline long state_cell_index(double range_m, double velocity_mps, const SceneConfig& c) {
    const long delay = static_cast<long>(std::floor(range_m / c.range_cell_m));
    const double v_offset = velocity_mps / c.doppler_cell_mps + c.doppler_cells / 2.0;
    const long doppler = static_cast<long>(std::floor(v_offset));
    if (delay < 0 || delay >= c.delay_cells || doppler < 0 || doppler >= c.doppler_cells)
        return -1;
    return delay * c.doppler_cells + doppler;
}

enum class WaveformClass { lfm_upsweep, phase_coded_zc64 };

struct Waveform {
    WaveformClass wf_class = WaveformClass::lfm_upsweep;
    int subchannel = 0;
};

/// Catalog of 2*S waveforms: LFM upsweeps in each sub-channel followed by
/// length-64 Zadoff-Chu phase codes in each sub-channel.
struct WaveformCatalog {
    int subchannels = 4;

    int size() const { return 2 * subchannels; }
    Waveform at(int index) const {
        if (index < 0 || index >= size())
            throw AlphabetError("WaveformCatalog: index outside catalog");
        return index < subchannels
            ? Waveform{WaveformClass::lfm_upsweep, index}
            : Waveform{WaveformClass::phase_coded_zc64, index - subchannels};
    }
};

struct ChannelState {
    std::vector<std::uint8_t> occupancy;  // one flag per sub-channel
    int band = 0;                         // interferer band index
};

inline std::vector<std::uint8_t> one_hot_occupancy(int band, int subchannels) {
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(subchannels), 0);
    occ[static_cast<std::size_t>(band)] = 1;
    return occ;
}

/// Order-3 Markov interferer over band indices: the next band is drawn from
/// a row of a (S^3 x S) transition table addressed by the last three bands.
class StochasticChannel {
public:
    /// Majority-persist default table: with probability `persist` the
    /// interferer continues the majority band of its last three bands
    /// (most recent band on a three-way tie), otherwise it picks uniformly.
    static std::vector<double> majority_persist_table(int subchannels, double persist) {
        const int s = subchannels;
        std::vector<double> table(static_cast<std::size_t>(s) * s * s * s, 0.0);
        for (int b3 = 0; b3 < s; ++b3)        // band at k-3
            for (int b2 = 0; b2 < s; ++b2)    // band at k-2
                for (int b1 = 0; b1 < s; ++b1) {  // band at k-1
                    int majority = b1;
                    if (b3 == b2 || b3 == b1) majority = b3;
                    else if (b2 == b1) majority = b2;
                    const std::size_t row =
                        static_cast<std::size_t>((b3 * s + b2) * s + b1) * s;
                    for (int nxt = 0; nxt < s; ++nxt)
                        table[row + nxt] = (1.0 - persist) / s + (nxt == majority ? persist : 0.0);
                }
        return table;
    }

    StochasticChannel(const SceneConfig& config, std::vector<double> table = {})
        : m_subchannels(config.subchannels),
          m_table(table.empty()
                      ? majority_persist_table(config.subchannels, config.persist_prob)
                      : std::move(table)) {
        const std::size_t s = static_cast<std::size_t>(m_subchannels);
        if (m_table.size() != s * s * s * s)
            throw ConfigError("StochasticChannel: transition table has wrong shape");
        for (std::size_t row = 0; row < s * s * s; ++row) {
            double sum = 0.0;
            for (std::size_t nxt = 0; nxt < s; ++nxt) {
                const double p = m_table[row * s + nxt];
                if (p < 0.0) throw ConfigError("StochasticChannel: negative probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw ConfigError("StochasticChannel: row does not sum to 1");
        }
    }

    void init(Rng& rng) {
        const int band = rng.uniform_int(m_subchannels);
        m_history = {band, band, band};
    }

    /// Draws the next interferer band and advances the history.
    int step(Rng& rng) {
        const std::size_t s = static_cast<std::size_t>(m_subchannels);
        const std::size_t row =
            static_cast<std::size_t>((m_history[0] * m_subchannels + m_history[1])
                                     * m_subchannels + m_history[2]) * s;
        const double u = rng.uniform_real();
        double acc = 0.0;
        int band = m_subchannels - 1;
        for (int nxt = 0; nxt < m_subchannels; ++nxt) {
            acc += m_table[row + static_cast<std::size_t>(nxt)];
            if (u < acc) {
                band = nxt;
                break;
            }
        }
        m_history = {m_history[1], m_history[2], band};
        return band;
    }

    int band() const { return m_history[2]; }
    ChannelState state() const { return {one_hot_occupancy(band(), m_subchannels), band()}; }
    const std::vector<double>& table() const { return m_table; }

private:
    int m_subchannels;
    std::vector<double> m_table;
    std::array<int, 3> m_history{0, 0, 0};
};

/// Deterministic order-2 adaptive emitter: if the radar transmitted in the
/// same band for the last two CPIs the emitter moves to that band, otherwise
/// it stays where it is.
class AdaptiveEmitter {
public:
    explicit AdaptiveEmitter(int subchannels) : m_subchannels(subchannels) {}

    void init(Rng& rng) { m_band = rng.uniform_int(m_subchannels); }
    void init_at(int band) { m_band = band; }

    int step(int prev_radar_band, int radar_band) {
        if (prev_radar_band == radar_band && radar_band >= 0)
            m_band = radar_band;
        return m_band;
    }

    int band() const { return m_band; }
    ChannelState state() const { return {one_hot_occupancy(m_band, m_subchannels), m_band}; }

private:
    int m_subchannels;
    int m_band = 0;
};

/// SINR of a CPI in dB: snr0 / (1 + inr * overlap) with overlap read from
/// the interferer occupancy at the waveform's sub-channel.
inline double compute_sinr_db(const Waveform& waveform,
                              std::span<const std::uint8_t> occupancy,
                              const SceneConfig& config) {
    const bool overlap = occupancy[static_cast<std::size_t>(waveform.subchannel)] != 0;
    const double snr0 = db_to_linear(config.snr0_db);
    const double inr = std::isinf(config.inr_db) && config.inr_db < 0.0
        ? 0.0
        : db_to_linear(config.inr_db);
    return linear_to_db(snr0 / (1.0 + (overlap ? inr : 0.0)));
}

struct Observation {
    bool detected = false;
    double range_est_m = 0.0;       // NaN when not detected
    double velocity_est_mps = 0.0;  // NaN when not detected
    std::vector<std::uint8_t> observed_occupancy;
    double sinr_db = 0.0;
};

/// Noisy per-CPI measurement. Detection is thresholded on SINR; estimate
/// noise scales inversely with the SINR amplitude relative to the snr0
/// reference. Phase-coded waveforms trade doubled range noise for halved
/// velocity noise. Spectrum sensing reports the true occupancy, optionally
/// bit-flipped with the configured probability.
inline Observation measure(const TargetState& truth, const Waveform& waveform,
                           double sinr_db, std::span<const std::uint8_t> occupancy,
                           Rng& rng, const SceneConfig& config) {
    Observation obs;
    obs.sinr_db = sinr_db;
    obs.detected = sinr_db >= config.detection_threshold_db;
    if (obs.detected) {
        const double scale = std::pow(10.0, -(sinr_db - config.snr0_db) / 20.0);
        double sigma_r = config.sigma_range_m * scale;
        double sigma_v = config.sigma_velocity_mps * scale;
        if (waveform.wf_class == WaveformClass::phase_coded_zc64) {
            sigma_r *= 2.0;
            sigma_v *= 0.5;
        }
        obs.range_est_m = truth.range_m + rng.normal(0.0, sigma_r);
        obs.velocity_est_mps = truth.velocity_mps + rng.normal(0.0, sigma_v);
    } else {
        obs.range_est_m = std::nan("");
        obs.velocity_est_mps = std::nan("");
    }
    obs.observed_occupancy.assign(occupancy.begin(), occupancy.end());
    if (config.occupancy_flip_prob > 0.0)
        for (auto& bit : obs.observed_occupancy)
            if (rng.uniform_real() < config.occupancy_flip_prob) bit ^= 1;
    return obs;
}

/// Learner symbol: occupancy bits (first sub-channel most significant)
/// followed by the detection flag. Alphabet size 2^S * 2.
inline int quantize_observation(const Observation& obs) {
    int value = 0;
    for (std::uint8_t bit : obs.observed_occupancy) value = value * 2 + (bit ? 1 : 0);
    return value * 2 + (obs.detected ? 1 : 0);
}

inline int observation_symbol_count(const SceneConfig& config) {
    return (1 << config.subchannels) * 2;
}

/// Energies (dB) over a square gate of delay-Doppler cells centred on the
/// tracker's predicted cell. Cells hold unit-mean exponential noise; the
/// target's true cell additionally receives the CPI's SINR leakage when it
/// falls inside the gate.
struct GateEnergies {
    std::vector<double> energies_db;
    int target_cell = -1;  // gate-local index, -1 if the target is outside
    int width = 0;
};

inline GateEnergies make_gate_energies(const TargetState& truth, const StateVec& predicted,
                                       double sinr_db, int half_width, Rng& rng,
                                       const SceneConfig& config) {
    GateEnergies gate;
    gate.width = 2 * half_width + 1;
    const long pred_delay = static_cast<long>(std::floor(predicted[0] / config.range_cell_m));
    const long pred_doppler = static_cast<long>(
        std::floor(predicted[1] / config.doppler_cell_mps + config.doppler_cells / 2.0));
    const long true_delay = static_cast<long>(std::floor(truth.range_m / config.range_cell_m));
    const long true_doppler = static_cast<long>(
        std::floor(truth.velocity_mps / config.doppler_cell_mps + config.doppler_cells / 2.0));

    const double signal = db_to_linear(sinr_db);
    gate.energies_db.reserve(static_cast<std::size_t>(gate.width) * gate.width);
    int idx = 0;
    for (long d = pred_delay - half_width; d <= pred_delay + half_width; ++d) {
        for (long v = pred_doppler - half_width; v <= pred_doppler + half_width; ++v, ++idx) {
            double energy = rng.exponential();
            if (d == true_delay && v == true_doppler) {
                energy += signal;
                gate.target_cell = idx;
            }
            gate.energies_db.push_back(linear_to_db(energy));
        }
    }
    return gate;
}

}  // namespace lzwave
