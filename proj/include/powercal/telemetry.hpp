#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <mutex>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "powercal/error.hpp"
#include "powercal/text.hpp"
#include "powercal/units.hpp"

namespace powercal {

/// Per-core scheduler counters, in ticks of 1/100 s.
struct CoreTicks {
  std::uint64_t user = 0;
  std::uint64_t nice = 0;
  std::uint64_t system = 0;
  std::uint64_t irq = 0;
  std::uint64_t softirq = 0;
  std::uint64_t iowait = 0;
  std::uint64_t idle = 0;

  // iowait is passive: the core is not executing cycles while it waits.
  std::uint64_t active() const { return user + nice + system + irq + softirq; }
  std::uint64_t passive() const { return idle + iowait; }

  friend bool operator==(const CoreTicks&, const CoreTicks&) = default;
};

struct TickSnapshot {
  Seconds timestamp = 0.0;
  std::vector<CoreTicks> cores;

  friend bool operator==(const TickSnapshot&, const TickSnapshot&) = default;
};

struct PowerSample {
  Seconds timestamp = 0.0;
  Watts watts = 0.0;

  friend bool operator==(const PowerSample&, const PowerSample&) = default;
};

struct Timeslot {
  Seconds start = 0.0;
  Seconds end = 0.0;
  std::string label;

  Seconds length() const { return end - start; }
  friend bool operator==(const Timeslot&, const Timeslot&) = default;
};

struct TickDelta {
  std::uint64_t active = 0;
  std::uint64_t passive = 0;

  friend bool operator==(const TickDelta&, const TickDelta&) = default;
};

/// Active/passive tick deltas summed over all cores.
inline TickDelta classify_ticks(const TickSnapshot& prev, const TickSnapshot& curr) {
  if (!(curr.timestamp > prev.timestamp))
    throw Error(Errc::invalid_argument, "tick snapshots must be strictly ordered in time");
  if (prev.cores.size() != curr.cores.size())
    throw Error(Errc::invalid_argument, "tick snapshots disagree on core count");

  TickDelta out;
  for (std::size_t i = 0; i < curr.cores.size(); ++i) {
    const auto& a = prev.cores[i];
    const auto& b = curr.cores[i];
    const std::uint64_t before[] = {a.user, a.nice, a.system, a.irq, a.softirq, a.iowait, a.idle};
    const std::uint64_t after[] = {b.user, b.nice, b.system, b.irq, b.softirq, b.iowait, b.idle};
    for (int k = 0; k < 7; ++k)
      if (after[k] < before[k])
        throw Error(Errc::counter_regression,
                    "core " + std::to_string(i) + " counter went backwards (wrap or reboot?)");
    out.active += b.active() - a.active();
    out.passive += b.passive() - a.passive();
  }
  return out;
}

/// cycles = ticks * frequency / 100; a saturated core yields exactly its clock rate.
inline Acps ticks_to_acps(std::uint64_t active_ticks, Hertz frequency, Seconds elapsed) {
  if (!(elapsed > 0.0)) throw Error(Errc::invalid_argument, "elapsed time must be positive");
  if (!(frequency > 0.0)) throw Error(Errc::invalid_argument, "frequency must be positive");
  const double cycles = static_cast<double>(active_ticks) * frequency / units::ticks_per_second;
  return cycles / elapsed;
}

/// Parses `seconds,watts` lines. Blank lines are ignored.
inline std::vector<PowerSample> parse_power_stream(std::istream& in) {
  std::vector<PowerSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty()) continue;
    const auto fields = text::split(body, ',');
    if (fields.size() != 2) throw ParseError(lineno, "expected `seconds,watts`");
    const auto t = text::parse_double(fields[0]);
    const auto w = text::parse_double(fields[1]);
    if (!t || !std::isfinite(*t)) throw ParseError(lineno, "bad timestamp");
    if (!w || !std::isfinite(*w)) throw ParseError(lineno, "bad power value");
    if (!(*w > 0.0)) throw ParseError(lineno, "power must be positive");
    if (!out.empty() && !(*t > out.back().timestamp))
      throw ParseError(Errc::non_monotonic_timestamp, lineno, "timestamp does not increase");
    out.push_back({*t, *w});
  }
  return out;
}

inline void write_power_stream(std::ostream& out, std::span<const PowerSample> samples) {
  for (const auto& s : samples)
    out << text::format_double(s.timestamp) << ',' << text::format_double(s.watts) << '\n';
}

/// Recorded tick file: `timestamp,core,user,nice,system,irq,softirq,iowait,idle`, one row per
/// core, rows of one snapshot contiguous and ordered by core index.
inline std::vector<TickSnapshot> parse_tick_stream(std::istream& in) {
  std::vector<TickSnapshot> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty()) continue;
    const auto f = text::split(body, ',');
    if (f.size() != 9) throw ParseError(lineno, "expected 9 tick columns");
    const auto t = text::parse_double(f[0]);
    const auto core = text::parse_int(f[1]);
    if (!t || !core || *core < 0) throw ParseError(lineno, "bad timestamp or core index");
    CoreTicks c;
    std::uint64_t* slots[] = {&c.user, &c.nice, &c.system, &c.irq, &c.softirq, &c.iowait, &c.idle};
    for (int k = 0; k < 7; ++k) {
      const auto v = text::parse_int(f[2 + k]);
      if (!v || *v < 0) throw ParseError(lineno, "bad tick counter");
      *slots[k] = static_cast<std::uint64_t>(*v);
    }
    if (*core == 0) {
      if (!out.empty() && !(*t > out.back().timestamp))
        throw ParseError(Errc::non_monotonic_timestamp, lineno, "tick snapshot timestamp does not increase");
      out.push_back({*t, {}});
    } else if (out.empty() || out.back().timestamp != *t ||
               static_cast<long long>(out.back().cores.size()) != *core) {
      throw ParseError(lineno, "core rows out of order");
    }
    out.back().cores.push_back(c);
  }
  return out;
}

inline void write_tick_stream(std::ostream& out, std::span<const TickSnapshot> snapshots) {
  for (const auto& s : snapshots)
    for (std::size_t i = 0; i < s.cores.size(); ++i) {
      const auto& c = s.cores[i];
      out << text::format_double(s.timestamp) << ',' << i << ',' << c.user << ',' << c.nice << ','
          << c.system << ',' << c.irq << ',' << c.softirq << ',' << c.iowait << ',' << c.idle << '\n';
    }
}

/// Reads the per-core `cpuN` lines of a /proc/stat style document.
inline TickSnapshot read_proc_stat(std::istream& in, Seconds timestamp) {
  TickSnapshot snap{timestamp, {}};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("cpu", 0) != 0 || line.size() < 4 || line[3] == ' ') continue;
    std::istringstream ss(line);
    std::string label;
    CoreTicks c;
    ss >> label >> c.user >> c.nice >> c.system >> c.idle >> c.iowait >> c.irq >> c.softirq;
    if (!ss) throw Error(Errc::parse_error, "malformed /proc/stat line: " + line);
    snap.cores.push_back(c);
  }
  return snap;
}

struct SlotStats {
  Watts mean = 0.0;
  Watts stddev = 0.0;
  std::size_t count = 0;
};

/// Samples with slot.start + trim <= t < slot.end - trim, in timestamp order.
inline std::vector<PowerSample> trimmed_window(std::span<const PowerSample> samples, const Timeslot& slot,
                                               Seconds trim) {
  if (!(trim >= 0.0)) throw Error(Errc::invalid_argument, "trim margin must be non-negative");
  if (!(slot.length() > 2.0 * trim))
    throw Error(Errc::invalid_argument, "timeslot `" + slot.label + "` is shorter than twice the trim margin");
  std::vector<PowerSample> kept;
  const Seconds lo = slot.start + trim;
  const Seconds hi = slot.end - trim;
  for (const auto& s : samples)
    if (s.timestamp >= lo && s.timestamp < hi) kept.push_back(s);
  std::sort(kept.begin(), kept.end(), [](const PowerSample& a, const PowerSample& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.watts < b.watts;
  });
  return kept;
}

/// Mean and sample standard deviation; needs at least three values.
inline SlotStats summarize(std::span<const PowerSample> samples) {
  if (samples.size() < 3)
    throw Error(Errc::insufficient_samples,
                "need at least 3 samples, have " + std::to_string(samples.size()));
  double sum = 0.0;
  for (const auto& s : samples) sum += s.watts;
  const double mean = sum / static_cast<double>(samples.size());
  double ss = 0.0;
  for (const auto& s : samples) ss += (s.watts - mean) * (s.watts - mean);
  return {mean, std::sqrt(ss / static_cast<double>(samples.size() - 1)), samples.size()};
}

inline SlotStats slot_statistics(std::span<const PowerSample> samples, const Timeslot& slot, Seconds trim_margin) {
  const auto kept = trimmed_window(samples, slot, trim_margin);
  if (kept.size() < 3)
    throw Error(Errc::insufficient_samples, "slot `" + slot.label + "` keeps " + std::to_string(kept.size()) +
                                                " samples after trimming");
  return summarize(kept);
}

/// Append-only log shared between one producer and any number of readers.
/// Readers always observe a consistent prefix of what was appended.
template <class T>
class AppendLog {
 public:
  void append(T value) {
    std::lock_guard lock(mutex_);
    items_.push_back(std::move(value));
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
  }

  std::vector<T> snapshot() const {
    std::lock_guard lock(mutex_);
    return items_;
  }

  template <class Pred>
  std::vector<T> copy_if(Pred pred) const {
    std::lock_guard lock(mutex_);
    std::vector<T> out;
    for (const auto& v : items_)
      if (pred(v)) out.push_back(v);
    return out;
  }

  template <class Fn>
  auto with_items(Fn fn) const {
    std::lock_guard lock(mutex_);
    return fn(std::span<const T>(items_));
  }

 private:
  mutable std::mutex mutex_;
  std::vector<T> items_;
};

}  // namespace powercal
