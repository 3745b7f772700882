#pragma once

// The library works in natural units (hbar = c = 1). Closed-form phase
// formulas also accept SI input, where every result is divided by c^2.

namespace qfall {

enum class UnitMode { natural, si };

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s
inline constexpr double kStandardGravity = 9.81;       // m/s^2

/// 1 in natural units, 1/c^2 in SI.
inline constexpr double inverse_c2(UnitMode mode) noexcept {
  return mode == UnitMode::si ? 1.0 / (kSpeedOfLight * kSpeedOfLight) : 1.0;
}

}  // namespace qfall
