#pragma once

#include <cstdint>

namespace skyrx {

// IEEE-754 binary16 conversion, round to nearest even.
std::uint16_t float_to_half(float value) noexcept;
float half_to_float(std::uint16_t bits) noexcept;

}  // namespace skyrx
