#pragma once

// Internal unit system. Everything inside the library is SI-ish and fixed:
// watts, joules, seconds, bytes, bits per second, hertz, and ACPS (active
// cycles per second). Conversions live here and are only applied at I/O
// boundaries.

namespace powercal {

using Watts = double;
using Joules = double;
using Seconds = double;
using Hertz = double;
using Acps = double;
using Bytes = double;
using BitsPerSecond = double;

namespace units {

inline constexpr double kilo = 1e3;
inline constexpr double mega = 1e6;
inline constexpr double giga = 1e9;

inline constexpr double kib = 1024.0;
inline constexpr double mib = 1024.0 * 1024.0;

inline constexpr double bits_per_byte = 8.0;

/// One scheduler tick is 1/100 s.
inline constexpr double ticks_per_second = 100.0;

constexpr Hertz ghz(double v) { return v * giga; }
constexpr BitsPerSecond mbps(double v) { return v * mega; }
constexpr double to_mbps(BitsPerSecond v) { return v / mega; }

/// Disk efficiency is presented in MB/J (decimal megabytes).
constexpr double to_mb_per_joule(double bytes_per_joule) { return bytes_per_joule / mega; }

}  // namespace units
}  // namespace powercal
