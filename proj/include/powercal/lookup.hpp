#pragma once

// Disk and network model lookup between calibrated grid points. Values are
// interpolated linearly in (log frequency, log size); nothing is extrapolated.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "powercal/error.hpp"
#include "powercal/text.hpp"
#include "powercal/types.hpp"

namespace powercal {

namespace detail {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double weight = 0.0;  // share of `hi`
};

inline std::optional<Bracket> bracket(const std::set<double>& axis, double v) {
  if (axis.empty() || !(v >= *axis.begin()) || !(v <= *axis.rbegin())) return std::nullopt;
  if (axis.count(v)) return Bracket{v, v, 0.0};
  const auto hi = axis.upper_bound(v);
  const auto lo = std::prev(hi);
  return Bracket{*lo, *hi, (std::log(v) - std::log(*lo)) / (std::log(*hi) - std::log(*lo))};
}

struct Corner {
  Hertz frequency;
  double size;
  double weight;
};

/// The (up to four) grid entries surrounding (f, size) and their bilinear weights.
template <class Key, class Entry, class Dir, class SizeOf>
std::vector<std::pair<const Entry*, double>> surrounding(const std::map<Key, Entry>& entries, Dir dir, Hertz f,
                                                         double size, SizeOf size_of, Errc size_error,
                                                         const std::string& what) {
  std::set<double> freqs, sizes;
  for (const auto& [k, e] : entries)
    if (k.direction == dir) {
      freqs.insert(k.frequency);
      sizes.insert(size_of(k));
    }
  const auto bf = bracket(freqs, f);
  if (!bf)
    throw Error(Errc::uncalibrated_operating_point,
                what + " model has no data bracketing " + text::format_double(f) + " Hz");
  const auto bs = bracket(sizes, size);
  if (!bs)
    throw Error(size_error, what + " size " + text::format_double(size) + " B is outside the calibrated range");

  std::vector<std::pair<const Entry*, double>> out;
  const Corner cs[4] = {{bf->lo, bs->lo, (1 - bf->weight) * (1 - bs->weight)},
                        {bf->hi, bs->lo, bf->weight * (1 - bs->weight)},
                        {bf->lo, bs->hi, (1 - bf->weight) * bs->weight},
                        {bf->hi, bs->hi, bf->weight * bs->weight}};
  for (const auto& c : cs) {
    if (c.weight == 0.0) continue;
    const Entry* found = nullptr;
    for (const auto& [k, e] : entries)
      if (k.direction == dir && k.frequency == c.frequency && size_of(k) == c.size) found = &e;
    if (!found)
      throw Error(size_error, what + " grid lacks the entry at " + text::format_double(c.frequency) + " Hz, " +
                                  text::format_double(c.size) + " B needed to interpolate");
    out.emplace_back(found, c.weight);
  }
  return out;
}

}  // namespace detail

inline DiskEntry lookup_disk(const DiskModel& model, Hertz frequency, Bytes block_size, DiskDirection direction) {
  const auto parts =
      detail::surrounding(model.entries, direction, frequency, block_size, [](const DiskKey& k) { return k.block_size; },
                          Errc::uncalibrated_block_size, "disk " + to_string(direction));
  DiskEntry out{0.0, 0.0};
  for (const auto& [e, w] : parts) {
    out.efficiency += w * e->efficiency;
    out.mean_power += w * e->mean_power;
  }
  return out;
}

inline NetEntry lookup_network(const NetworkModel& model, Hertz frequency, Bytes packet_size,
                               NetDirection direction) {
  const auto parts = detail::surrounding(
      model.entries, direction, frequency, packet_size, [](const NetKey& k) { return k.packet_size; },
      Errc::uncalibrated_packet_size, "network " + to_string(direction));
  NetEntry out{0.0, 0.0, 0.0, INFINITY};
  for (const auto& [e, w] : parts) {
    out.beta1 += w * e->beta1;
    out.beta2 += w * e->beta2;
    out.rate_min = std::max(out.rate_min, e->rate_min);
    out.rate_max = std::min(out.rate_max, e->rate_max);
  }
  return out;
}

}  // namespace powercal
