#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "powercal/telemetry.hpp"
#include "powercal/types.hpp"

namespace powercal {

struct DiskIoResult {
  Bytes bytes = 0.0;
  Seconds elapsed = 0.0;
};

struct NetTransferResult {
  Bytes bytes = 0.0;
  Seconds elapsed = 0.0;
};

/// What a machine under calibration must offer: frequency and core control,
/// load injection, I/O exercisers, and the two telemetry streams.
///
/// Implementations report failures as Error(Errc::host_failure). set_frequency
/// always applies to every core, active or not.
class HostInterface {
 public:
  virtual ~HostInterface() = default;

  virtual std::string describe() const = 0;

  virtual void set_frequency(Hertz frequency) = 0;
  virtual void set_active_cores(int cores) = 0;

  /// Keeps `cores` cores busy at `fraction` of their capacity. 0 means no injected load.
  virtual void apply_cpu_load(double fraction, int cores, Seconds duration) = 0;

  /// Moves at least `volume` bytes in blocks of `block_size`; with `sync_each_block`
  /// every block is committed before the next one is issued.
  virtual DiskIoResult disk_io(DiskDirection direction, Bytes block_size, Bytes volume, bool sync_each_block) = 0;
  virtual void flush_caches() = 0;

  /// UDP traffic at a fixed payload size and rate.
  virtual NetTransferResult net_transfer(NetDirection direction, Bytes packet_size, BitsPerSecond rate,
                                         Seconds duration) = 0;

  virtual TickSnapshot read_ticks() = 0;

  /// Power samples with from <= timestamp < to.
  virtual std::vector<PowerSample> power_stream(Seconds from, Seconds to) = 0;

  /// Slot bracketing hooks. Live hosts ignore them; replaying hosts use the label to seek.
  virtual void begin_slot(const std::string& /*label*/) {}
  virtual void end_slot() {}
};

/// Achievable UDP payload rate: bounded by the wire (per-frame overhead) and by
/// the packet rate the stack can sustain.
struct NetworkLimits {
  BitsPerSecond line_rate = 1e9;
  Bytes frame_overhead = 66.0;  // UDP/IP headers + Ethernet framing, preamble and gap
  double max_packet_rate = 4.0e5;

  BitsPerSecond cap(Bytes packet_size) const {
    const double wire = line_rate * packet_size / (packet_size + frame_overhead);
    const double stack = max_packet_rate * packet_size * units::bits_per_byte;
    return std::min(wire, stack);
  }

  friend bool operator==(const NetworkLimits&, const NetworkLimits&) = default;
};

}  // namespace powercal
