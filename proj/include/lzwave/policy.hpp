#pragma once

#include <string>

namespace lzwave {

/// Waveform-selection policy over quantized observation symbols.
///
/// The driving loop alternates select_waveform / observe_outcome once per
/// decision epoch. begin_track marks episode boundaries for policies that
/// carry per-episode state; learned statistics persist across tracks.
struct WaveformPolicy {
    virtual ~WaveformPolicy() = default;

    virtual int select_waveform(int observation) = 0;
    virtual void observe_outcome(int observation, int action, double cost,
                                 int next_observation) = 0;
    virtual void begin_track() {}
    virtual std::string name() const = 0;
};

}  // namespace lzwave
