#pragma once

#include <numbers>

namespace critmed::constants {

// CODATA 2018 exact / recommended values, SI.
inline constexpr double speed_of_light = 299792458.0;     // m/s
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Default transition wavelength of the emitters.
inline constexpr double default_lambda0 = 450e-6;  // m

inline constexpr double angular_frequency(double wavelength) {
  return two_pi * speed_of_light / wavelength;
}

}  // namespace critmed::constants
