#pragma once

#include <numbers>

namespace loopreg::constants {

inline constexpr double pi = std::numbers::pi;

/// 16 pi^2, the loop-measure constant carried by every closed form.
inline constexpr double loop_factor = 16.0 * pi * pi;

inline constexpr double fine_structure = 1.0 / 137.036;
inline constexpr double electron_mass_gev = 0.000511;

/// Planck constant in GeV s (exact SI definition of h and e).
inline constexpr double planck_gev_s = 4.135667696923859e-24;

inline constexpr double mev_per_gev = 1000.0;

}  // namespace loopreg::constants
