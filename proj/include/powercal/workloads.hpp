#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "powercal/error.hpp"
#include "powercal/host.hpp"
#include "powercal/telemetry.hpp"
#include "powercal/text.hpp"
#include "powercal/types.hpp"

namespace powercal {

enum class SweepKind { cpu, disk_read, disk_write, net_send, net_recv };

inline std::string to_string(SweepKind k) {
  switch (k) {
    case SweepKind::cpu: return "cpu";
    case SweepKind::disk_read: return "disk_read";
    case SweepKind::disk_write: return "disk_write";
    case SweepKind::net_send: return "net_send";
    case SweepKind::net_recv: return "net_recv";
  }
  return "?";
}

struct CpuSlot {
  OperatingPoint op;
  double load_fraction = 0.0;  // 0 is the no-load slot

  friend bool operator==(const CpuSlot&, const CpuSlot&) = default;
};

struct DiskSlot {
  OperatingPoint op;
  Bytes block_size = 0.0;
  Bytes volume = 0.0;
  DiskDirection direction = DiskDirection::read;
  bool flush_before = false;
  bool sync_each_block = false;

  friend bool operator==(const DiskSlot&, const DiskSlot&) = default;
};

struct NetSlot {
  OperatingPoint op;
  Bytes packet_size = 0.0;
  BitsPerSecond rate = 0.0;
  NetDirection direction = NetDirection::send;
  int repetitions = 3;

  friend bool operator==(const NetSlot&, const NetSlot&) = default;
};

using SlotParams = std::variant<CpuSlot, DiskSlot, NetSlot>;

struct PlannedSlot {
  Timeslot slot;
  SlotParams params;

  friend bool operator==(const PlannedSlot&, const PlannedSlot&) = default;
};

struct SweepPlan {
  SweepKind kind = SweepKind::cpu;
  Seconds slot_length = 30.0;
  std::vector<PlannedSlot> slots;

  friend bool operator==(const SweepPlan&, const SweepPlan&) = default;
};

// Canonical slot labels. They double as replay keys for recorded data, so they
// must be a pure function of the slot parameters.
inline std::string slot_label(const CpuSlot& s) {
  return "cpu:m=" + std::to_string(s.op.cores) + ":f=" + text::format_double(s.op.frequency) +
         ":load=" + text::format_double(s.load_fraction);
}

inline std::string slot_label(const DiskSlot& s) {
  return std::string(s.direction == DiskDirection::read ? "disk_read" : "disk_write") +
         ":m=" + std::to_string(s.op.cores) + ":f=" + text::format_double(s.op.frequency) +
         ":B=" + text::format_double(s.block_size) + ":V=" + text::format_double(s.volume);
}

inline std::string slot_label(const NetSlot& s) {
  return std::string(s.direction == NetDirection::send ? "net_send" : "net_recv") +
         ":m=" + std::to_string(s.op.cores) + ":f=" + text::format_double(s.op.frequency) +
         ":S=" + text::format_double(s.packet_size) + ":R=" + text::format_double(s.rate);
}

inline std::string repetition_label(const std::string& label, int rep) { return label + "#" + std::to_string(rep); }

/// 1.00, 1.00-step, ... down to the last level >= step. With step 0.03 that is 33 levels ending at 0.04.
inline std::vector<double> default_load_ladder(double step = 0.03) {
  if (!(step > 0.0 && step <= 1.0)) throw Error(Errc::invalid_argument, "load step must be in (0, 1]");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = std::round((1.0 - k * step) * 1e9) / 1e9;
    if (v < step - 1e-12) break;
    out.push_back(v);
  }
  return out;
}

namespace detail {

inline std::vector<Hertz> checked_frequencies(std::span<const Hertz> frequencies) {
  if (frequencies.empty()) throw Error(Errc::empty_grid, "no frequencies to sweep");
  std::vector<Hertz> out(frequencies.begin(), frequencies.end());
  for (Hertz f : out)
    if (!(f > 0.0)) throw Error(Errc::invalid_argument, "frequencies must be positive");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class Params>
void push_slot(SweepPlan& plan, Params params) {
  const Seconds start = plan.slot_length * static_cast<double>(plan.slots.size());
  plan.slots.push_back({Timeslot{start, start + plan.slot_length, slot_label(params)}, std::move(params)});
}

}  // namespace detail

/// For each core count (ascending), each frequency (ascending): loads in descending
/// order followed by one no-load slot.
inline SweepPlan plan_cpu_sweep(std::span<const Hertz> frequencies, int max_cores, std::span<const double> load_levels,
                                Seconds slot_length = 30.0) {
  const auto freqs = detail::checked_frequencies(frequencies);
  if (max_cores < 1) throw Error(Errc::empty_grid, "need at least one core");
  if (load_levels.empty()) throw Error(Errc::empty_grid, "no load levels");
  if (!(slot_length > 0.0)) throw Error(Errc::invalid_argument, "slot length must be positive");
  for (std::size_t i = 0; i < load_levels.size(); ++i) {
    if (!(load_levels[i] > 0.0 && load_levels[i] <= 1.0))
      throw Error(Errc::invalid_argument, "load levels must lie in (0, 1]");
    if (i > 0 && !(load_levels[i] < load_levels[i - 1]))
      throw Error(Errc::invalid_argument, "load levels must be strictly descending");
  }

  SweepPlan plan{SweepKind::cpu, slot_length, {}};
  plan.slots.reserve(static_cast<std::size_t>(max_cores) * freqs.size() * (load_levels.size() + 1));
  for (int m = 1; m <= max_cores; ++m)
    for (Hertz f : freqs) {
      for (double load : load_levels) detail::push_slot(plan, CpuSlot{{m, f}, load});
      detail::push_slot(plan, CpuSlot{{m, f}, 0.0});
    }
  return plan;
}

struct DiskSweepOptions {
  Seconds slot_length = 30.0;
  int cores = 1;
};

/// One slot per (frequency, block size). Reads are preceded by a cache flush,
/// writes commit every block.
inline SweepPlan plan_disk_sweep(std::span<const Hertz> frequencies, std::span<const Bytes> block_sizes, Bytes volume,
                                 DiskDirection direction, const DiskSweepOptions& options = {}) {
  const auto freqs = detail::checked_frequencies(frequencies);
  if (block_sizes.empty()) throw Error(Errc::empty_grid, "no block sizes");
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    if (!(block_sizes[i] > 0.0)) throw Error(Errc::invalid_argument, "block sizes must be positive");
    if (i > 0 && !(block_sizes[i] > block_sizes[i - 1]))
      throw Error(Errc::invalid_argument, "block sizes must be strictly ascending");
  }
  if (!(volume >= block_sizes.back()))
    throw Error(Errc::invalid_argument, "volume " + text::format_double(volume) + " B is smaller than block size " +
                                            text::format_double(block_sizes.back()) + " B");
  if (options.cores < 1) throw Error(Errc::invalid_argument, "need at least one core");
  if (!(options.slot_length > 0.0)) throw Error(Errc::invalid_argument, "slot length must be positive");

  const bool read = direction == DiskDirection::read;
  SweepPlan plan{read ? SweepKind::disk_read : SweepKind::disk_write, options.slot_length, {}};
  for (Hertz f : freqs)
    for (Bytes b : block_sizes)
      detail::push_slot(plan, DiskSlot{{options.cores, f}, b, volume, direction, read, !read});
  return plan;
}

struct NetSweepOptions {
  Seconds slot_length = 30.0;
  int cores = 1;
  int repetitions = 3;
  NetworkLimits limits;
};

/// One slot per (frequency, packet size, rate). Zero rates are dropped; rates above
/// the achievable cap for a packet size are rejected.
inline SweepPlan plan_net_sweep(std::span<const Hertz> frequencies, std::span<const Bytes> packet_sizes,
                                std::span<const BitsPerSecond> rates, NetDirection direction,
                                const NetSweepOptions& options = {}) {
  const auto freqs = detail::checked_frequencies(frequencies);
  if (packet_sizes.empty()) throw Error(Errc::empty_grid, "no packet sizes");
  std::vector<BitsPerSecond> kept;
  for (BitsPerSecond r : rates) {
    if (r < 0.0 || !std::isfinite(r)) throw Error(Errc::invalid_argument, "rates must be finite and non-negative");
    if (r > 0.0) kept.push_back(r);
  }
  if (kept.empty()) throw Error(Errc::empty_grid, "no positive rates");
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

  std::vector<Bytes> sizes(packet_sizes.begin(), packet_sizes.end());
  std::sort(sizes.begin(), sizes.end());
  for (Bytes s : sizes) {
    if (!(s > 0.0)) throw Error(Errc::invalid_argument, "packet sizes must be positive");
    const BitsPerSecond cap = options.limits.cap(s);
    for (BitsPerSecond r : kept)
      if (r > cap)
        throw Error(Errc::rate_unachievable, text::format_double(units::to_mbps(r)) + " Mbps exceeds the " +
                                                 text::format_double(units::to_mbps(cap)) + " Mbps cap for " +
                                                 text::format_double(s) + " B packets");
  }
  if (options.repetitions < 1) throw Error(Errc::invalid_argument, "need at least one repetition");
  if (options.cores < 1) throw Error(Errc::invalid_argument, "need at least one core");

  SweepPlan plan{direction == NetDirection::send ? SweepKind::net_send : SweepKind::net_recv, options.slot_length,
                 {}};
  for (Hertz f : freqs)
    for (Bytes s : sizes)
      for (BitsPerSecond r : kept)
        detail::push_slot(plan, NetSlot{{options.cores, f}, s, r, direction, options.repetitions});
  return plan;
}

/// Concatenates plans of one kind, re-timing the second plan's slots after the first.
inline SweepPlan concat_plans(SweepPlan a, const SweepPlan& b) {
  if (a.kind != b.kind || a.slot_length != b.slot_length)
    throw Error(Errc::invalid_argument, "can only concatenate plans of the same kind and slot length");
  for (const auto& s : b.slots) {
    const Seconds start = a.slot_length * static_cast<double>(a.slots.size());
    a.slots.push_back({Timeslot{start, start + a.slot_length, s.slot.label}, s.params});
  }
  return a;
}

// ---------------------------------------------------------------------------
// Calibration datasets

struct CpuObservation {
  std::string label;
  LoadSample sample;
  double load_fraction = 0.0;
  std::size_t samples = 0;

  friend bool operator==(const CpuObservation&, const CpuObservation&) = default;
};

struct DiskObservation {
  std::string label;
  OperatingPoint op;
  DiskDirection direction = DiskDirection::read;
  Bytes block_size = 0.0;
  Bytes volume = 0.0;  // total bytes moved over all repetitions
  Seconds duration = 0.0;
  Acps rho = 0.0;
  Watts power = 0.0;
  Watts stddev = 0.0;

  friend bool operator==(const DiskObservation&, const DiskObservation&) = default;
};

struct NetObservation {
  std::string label;
  OperatingPoint op;
  NetDirection direction = NetDirection::send;
  Bytes packet_size = 0.0;
  BitsPerSecond rate = 0.0;
  Seconds duration = 0.0;
  Acps rho = 0.0;
  Watts power = 0.0;
  Watts stddev = 0.0;
  int repetitions = 1;

  friend bool operator==(const NetObservation&, const NetObservation&) = default;
};

struct SlotFailure {
  std::string label;
  std::string reason;

  friend bool operator==(const SlotFailure&, const SlotFailure&) = default;
};

struct CalibrationDataset {
  int schema_version = kSchemaVersion;
  std::string host;
  std::vector<CpuObservation> cpu;
  std::vector<DiskObservation> disk;
  std::vector<NetObservation> net;
  std::vector<SlotFailure> failures;
  std::vector<std::string> warnings;

  std::size_t observation_count() const { return cpu.size() + disk.size() + net.size(); }

  void merge(const CalibrationDataset& other) {
    if (host.empty()) host = other.host;
    cpu.insert(cpu.end(), other.cpu.begin(), other.cpu.end());
    disk.insert(disk.end(), other.disk.begin(), other.disk.end());
    net.insert(net.end(), other.net.begin(), other.net.end());
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  }

  friend bool operator==(const CalibrationDataset&, const CalibrationDataset&) = default;
};

struct ExecuteOptions {
  Seconds trim_margin = 5.0;
  int repetitions = 1;  // cpu and disk slots; network slots carry their own count
};

namespace detail {

struct Measurement {
  std::vector<PowerSample> kept;
  std::uint64_t active_ticks = 0;
  Seconds elapsed = 0.0;
  Bytes bytes = 0.0;
};

template <class Work>
void measure_repetition(HostInterface& host, const std::string& label, int rep, Seconds trim, Measurement& m,
                        Work&& work) {
  host.begin_slot(repetition_label(label, rep));
  const TickSnapshot t0 = host.read_ticks();
  m.bytes += work();
  const TickSnapshot t1 = host.read_ticks();
  host.end_slot();

  const Timeslot window{t0.timestamp, t1.timestamp, label};
  const auto samples = host.power_stream(window.start, window.end);
  const auto kept = trimmed_window(samples, window, trim);
  if (kept.size() < 3)
    throw Error(Errc::insufficient_samples,
                "repetition " + std::to_string(rep) + " keeps " + std::to_string(kept.size()) + " samples");
  m.kept.insert(m.kept.end(), kept.begin(), kept.end());
  m.active_ticks += classify_ticks(t0, t1).active;
  m.elapsed += window.length();
}

}  // namespace detail

/// Runs every slot of `plan` on `host`. Each slot becomes one aggregated observation
/// whose load is measured from tick deltas. Slots that fail are recorded and skipped.
inline CalibrationDataset execute_sweep(const SweepPlan& plan, HostInterface& host, const ExecuteOptions& options = {}) {
  if (options.repetitions < 1) throw Error(Errc::invalid_argument, "need at least one repetition");
  CalibrationDataset out;
  out.host = host.describe();

  for (const auto& planned : plan.slots) {
    const std::string& label = planned.slot.label;
    try {
      std::visit(
          [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            host.set_frequency(p.op.frequency);
            host.set_active_cores(p.op.cores);
            detail::Measurement m;

            if constexpr (std::is_same_v<P, CpuSlot>) {
              for (int r = 0; r < options.repetitions; ++r)
                detail::measure_repetition(host, label, r, options.trim_margin, m, [&] {
                  host.apply_cpu_load(p.load_fraction, p.op.cores, plan.slot_length);
                  return 0.0;
                });
              const auto stats = summarize(m.kept);
              LoadSample s{ticks_to_acps(m.active_ticks, p.op.frequency, m.elapsed), stats.mean, p.op, stats.stddev};
              if (exceeds_capacity(s))
                out.warnings.push_back(label + ": measured load exceeds cores x frequency");
              out.cpu.push_back({label, s, p.load_fraction, stats.count});
            } else if constexpr (std::is_same_v<P, DiskSlot>) {
              for (int r = 0; r < options.repetitions; ++r) {
                if (p.flush_before) host.flush_caches();
                detail::measure_repetition(host, label, r, options.trim_margin, m, [&] {
                  Bytes moved = 0.0;
                  Seconds spent = 0.0;
                  while (spent < plan.slot_length) {
                    const auto io = host.disk_io(p.direction, p.block_size, p.volume, p.sync_each_block);
                    if (!(io.elapsed > 0.0)) throw Error(Errc::host_failure, "disk_io reported no elapsed time");
                    moved += io.bytes;
                    spent += io.elapsed;
                  }
                  return moved;
                });
              }
              const auto stats = summarize(m.kept);
              out.disk.push_back({label, p.op, p.direction, p.block_size, m.bytes, m.elapsed,
                                  ticks_to_acps(m.active_ticks, p.op.frequency, m.elapsed), stats.mean, stats.stddev});
            } else {
              for (int r = 0; r < p.repetitions; ++r)
                detail::measure_repetition(host, label, r, options.trim_margin, m, [&] {
                  return host.net_transfer(p.direction, p.packet_size, p.rate, plan.slot_length).bytes;
                });
              const auto stats = summarize(m.kept);
              out.net.push_back({label, p.op, p.direction, p.packet_size, p.rate, m.elapsed,
                                 ticks_to_acps(m.active_ticks, p.op.frequency, m.elapsed), stats.mean, stats.stddev,
                                 p.repetitions});
            }
          },
          planned.params);
    } catch (const Error& e) {
      host.end_slot();
      out.failures.push_back({label, e.what()});
    }
  }
  return out;
}

}  // namespace powercal
