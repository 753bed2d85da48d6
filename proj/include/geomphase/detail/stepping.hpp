#pragma once

// Internal helpers shared by the coherent-state solver and the Fock-basis
// cross-check: both consume the same sampled envelope, linearly interpolated
// inside each waveform interval, and both cap the phase advanced per RK4 step.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "geomphase/core.hpp"

namespace geomphase::detail {

// Phase advanced per step by the fastest relevant frequency is kept at or
// below this, and the whole pulse uses at least kMinTotalSteps steps.
inline constexpr double kMaxPhasePerStep = 0.05;  // rad
inline constexpr std::size_t kMinTotalSteps = 2000;

// Number of RK4 substeps per waveform interval for a given frequency scale
// (rad/ns).  h = dt / substeps then satisfies scale * h <= kMaxPhasePerStep.
inline std::size_t substeps_per_interval(const Waveform& w, double rate_scale) {
    const std::size_t m = w.steps();
    std::size_t per = 1;
    if (rate_scale > 0.0) {
        per = std::max(per, static_cast<std::size_t>(std::ceil(w.dt * rate_scale / kMaxPhasePerStep)));
    }
    per = std::max(per, (kMinTotalSteps + m - 1) / m);
    return per;
}

inline cx lerp(const cx& a, const cx& b, double f) {
    return a + f * (b - a);
}

}  // namespace geomphase::detail
