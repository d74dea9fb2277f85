#pragma once

#include "skyrx/synth.hpp"

namespace bench {

// A slice of the default flight: full band layout, fewer lines.
inline skyrx::FlightSynthesizer slice(std::uint32_t lines) {
    skyrx::FlightSpec f = skyrx::default_flight(1);
    f.lines_per_cube = lines;
    return skyrx::FlightSynthesizer(skyrx::default_scene(f), f, 3);
}

}  // namespace bench
