#pragma once

#include <numbers>

// Internal units: time in microseconds, frequencies as angular frequencies
// in rad/us, lengths in nanometers. "f MHz" in user input means 2*pi*f rad/us.
namespace xysim {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Angular frequency (rad/us) for an ordinary frequency given in MHz.
constexpr double mhz(double f) { return two_pi * f; }
/// Angular frequency (rad/us) for an ordinary frequency given in kHz.
constexpr double khz(double f) { return two_pi * f * 1e-3; }
/// Ordinary frequency in MHz for an angular frequency in rad/us.
constexpr double to_mhz(double omega) { return omega / two_pi; }

constexpr double ns(double t) { return t * 1e-3; }
constexpr double us(double t) { return t; }
constexpr double to_ns(double t) { return t * 1e3; }

}  // namespace xysim
