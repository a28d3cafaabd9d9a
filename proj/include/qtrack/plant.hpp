#pragma once

#include <cstdint>

#include "qtrack/noise.hpp"
#include "qtrack/quantizer.hpp"
#include "qtrack/types.hpp"

namespace qtrack {

// The simulated system: y(k) = u(k) theta.c1 + u(k-1) theta.c2 + w(k),
// observed only through the quantizer. Confined to one trial worker.
struct PlantState {
    ParamVec theta;
    QuantizerSpec quantizer;
    NoiseModel noise;
    double u_prev = 0.0;  // last applied input, 0 before the first step
    std::int64_t k = 1;   // next step index
};

// Noise-free structural output plus the supplied disturbance; pure.
inline double output(const PlantState& state, double u, double w) {
    return u * state.theta.c1 + state.u_prev * state.theta.c2 + w;
}

} // namespace qtrack
