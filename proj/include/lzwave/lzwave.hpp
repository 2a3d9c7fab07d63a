#pragma once

#include "lzwave/active_lz.hpp"
#include "lzwave/baselines.hpp"
#include "lzwave/common.hpp"
#include "lzwave/context_tree.hpp"
#include "lzwave/cost.hpp"
#include "lzwave/harness.hpp"
#include "lzwave/plot.hpp"
#include "lzwave/policy.hpp"
#include "lzwave/radar_scene.hpp"
#include "lzwave/rng.hpp"
#include "lzwave/tracking.hpp"
#include "lzwave/waveform_gen.hpp"
