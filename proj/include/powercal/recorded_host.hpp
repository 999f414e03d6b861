#pragma once

// Replay of recorded calibration data, and a decorator that records a live (or
// simulated) host in the same layout.
//
// Directory layout:
//   meta.json   {"schema_version", "kind": "recording", "host", "frequencies", "max_cores"}
//   slots.csv   label,start_s,end_s,bytes      (label carries the `#repetition` suffix)
//   ticks.csv   tick snapshots at every slot boundary
//   power.csv   the power stream

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "powercal/error.hpp"
#include "powercal/host.hpp"
#include "powercal/serialization.hpp"
#include "powercal/telemetry.hpp"
#include "powercal/text.hpp"

namespace powercal {

struct RecordedSlot {
  std::string label;
  Seconds start = 0.0;
  Seconds end = 0.0;
  Bytes bytes = 0.0;
};

struct Recording {
  std::string host;
  std::vector<Hertz> frequencies;
  int max_cores = 1;
  std::vector<RecordedSlot> slots;
  std::vector<TickSnapshot> ticks;
  std::vector<PowerSample> power;
};

inline void write_recording(const std::filesystem::path& dir, const Recording& r) {
  std::filesystem::create_directories(dir);
  json::Json meta{{"schema_version", kSchemaVersion},
                  {"kind", "recording"},
                  {"host", r.host},
                  {"frequencies", r.frequencies},
                  {"max_cores", r.max_cores}};
  json::save((dir / "meta.json").string(), meta);

  std::ofstream slots(dir / "slots.csv");
  slots << "label,start_s,end_s,bytes\n";
  for (const auto& s : r.slots)
    slots << s.label << ',' << text::format_double(s.start) << ',' << text::format_double(s.end) << ','
          << text::format_double(s.bytes) << '\n';
  std::ofstream ticks(dir / "ticks.csv");
  write_tick_stream(ticks, r.ticks);
  std::ofstream power(dir / "power.csv");
  write_power_stream(power, r.power);
  if (!slots || !ticks || !power) throw Error(Errc::invalid_argument, "failed writing recording to " + dir.string());
}

inline Recording read_recording(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error(Errc::invalid_argument, "`" + dir.string() + "` is not a recording directory");
  Recording r;
  const auto meta = json::load((dir / "meta.json").string());
  json::detail::check_document(meta, "recording");
  r.host = json::detail::get<std::string>(meta, "host");
  r.frequencies = json::detail::get<std::vector<double>>(meta, "frequencies");
  r.max_cores = json::detail::get<int>(meta, "max_cores");

  std::ifstream slots(dir / "slots.csv");
  if (!slots) throw Error(Errc::invalid_argument, "missing slots.csv in " + dir.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(slots, line)) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty() || lineno == 1) continue;
    const auto f = text::split(body, ',');
    if (f.size() != 4) throw ParseError(lineno, "slots.csv expects 4 columns");
    const auto a = text::parse_double(f[1]), b = text::parse_double(f[2]), v = text::parse_double(f[3]);
    if (!a || !b || !v || !(*b > *a)) throw ParseError(lineno, "bad slot bounds");
    r.slots.push_back({std::string(f[0]), *a, *b, *v});
  }
  std::ifstream ticks(dir / "ticks.csv");
  std::ifstream power(dir / "power.csv");
  if (!ticks || !power) throw Error(Errc::invalid_argument, "missing ticks.csv or power.csv in " + dir.string());
  r.ticks = parse_tick_stream(ticks);
  r.power = parse_power_stream(power);
  return r;
}

/// Serves a Recording through HostInterface. Workload calls are no-ops that
/// report the recorded slot's duration and volume; a slot absent from the
/// recording fails with HostFailure.
class RecordedHost : public HostInterface {
 public:
  explicit RecordedHost(Recording r) : rec_(std::move(r)) {
    for (std::size_t i = 0; i < rec_.slots.size(); ++i) by_label_[rec_.slots[i].label] = i;
    for (const auto& t : rec_.ticks) by_time_[t.timestamp] = &t;
  }

  explicit RecordedHost(const std::filesystem::path& dir) : RecordedHost(read_recording(dir)) {}

  std::string describe() const override { return rec_.host; }

  void set_frequency(Hertz f) override {
    if (std::find(rec_.frequencies.begin(), rec_.frequencies.end(), f) == rec_.frequencies.end())
      throw Error(Errc::host_failure, "frequency " + text::format_double(f) + " Hz was not recorded");
  }

  void set_active_cores(int cores) override {
    if (cores < 1 || cores > rec_.max_cores) throw Error(Errc::host_failure, "core count was not recorded");
  }

  void begin_slot(const std::string& label) override {
    const auto it = by_label_.find(label);
    if (it == by_label_.end()) throw Error(Errc::host_failure, "no recorded data for slot `" + label + "`");
    current_ = &rec_.slots[it->second];
    reads_ = 0;
  }

  void end_slot() override { current_ = nullptr; }

  void apply_cpu_load(double, int, Seconds) override { need_slot(); }

  DiskIoResult disk_io(DiskDirection, Bytes, Bytes, bool) override {
    const auto& s = need_slot();
    return {s.bytes, s.end - s.start};
  }

  void flush_caches() override {}

  NetTransferResult net_transfer(NetDirection, Bytes, BitsPerSecond, Seconds) override {
    const auto& s = need_slot();
    return {s.bytes, s.end - s.start};
  }

  /// First read inside a slot returns the snapshot at its start, later reads the one at its end.
  TickSnapshot read_ticks() override {
    const auto& s = need_slot();
    const Seconds t = reads_++ == 0 ? s.start : s.end;
    const auto it = by_time_.find(t);
    if (it == by_time_.end())
      throw Error(Errc::host_failure, "no tick snapshot at " + text::format_double(t) + " s for `" + s.label + "`");
    return *it->second;
  }

  std::vector<PowerSample> power_stream(Seconds from, Seconds to) override {
    std::vector<PowerSample> out;
    for (const auto& p : rec_.power)
      if (p.timestamp >= from && p.timestamp < to) out.push_back(p);
    return out;
  }

 private:
  const RecordedSlot& need_slot() const {
    if (!current_) throw Error(Errc::host_failure, "recorded host used outside a slot");
    return *current_;
  }

  Recording rec_;
  std::map<std::string, std::size_t> by_label_;
  std::map<Seconds, const TickSnapshot*> by_time_;
  const RecordedSlot* current_ = nullptr;
  int reads_ = 0;
};

/// Forwards to an inner host and keeps everything needed to replay the run.
class RecordingHost : public HostInterface {
 public:
  RecordingHost(HostInterface& inner, std::vector<Hertz> frequencies, int max_cores) : inner_(inner) {
    rec_.host = inner.describe();
    rec_.frequencies = std::move(frequencies);
    rec_.max_cores = max_cores;
  }

  std::string describe() const override { return inner_.describe(); }
  void set_frequency(Hertz f) override { inner_.set_frequency(f); }
  void set_active_cores(int n) override { inner_.set_active_cores(n); }

  void begin_slot(const std::string& label) override {
    inner_.begin_slot(label);
    open_ = RecordedSlot{label, 0.0, 0.0, 0.0};
    reads_ = 0;
  }

  void end_slot() override {
    inner_.end_slot();
    if (open_ && reads_ >= 2) rec_.slots.push_back(*open_);
    open_.reset();
  }

  void apply_cpu_load(double fraction, int cores, Seconds duration) override {
    inner_.apply_cpu_load(fraction, cores, duration);
  }

  DiskIoResult disk_io(DiskDirection d, Bytes b, Bytes v, bool sync) override {
    const auto r = inner_.disk_io(d, b, v, sync);
    if (open_) open_->bytes += r.bytes;
    return r;
  }

  void flush_caches() override { inner_.flush_caches(); }

  NetTransferResult net_transfer(NetDirection d, Bytes s, BitsPerSecond r, Seconds t) override {
    const auto res = inner_.net_transfer(d, s, r, t);
    if (open_) open_->bytes += res.bytes;
    return res;
  }

  TickSnapshot read_ticks() override {
    auto snap = inner_.read_ticks();
    if (open_) {
      (reads_++ == 0 ? open_->start : open_->end) = snap.timestamp;
      if (rec_.ticks.empty() || rec_.ticks.back().timestamp < snap.timestamp) rec_.ticks.push_back(snap);
    }
    last_time_ = std::max(last_time_, snap.timestamp);
    return snap;
  }

  std::vector<PowerSample> power_stream(Seconds from, Seconds to) override { return inner_.power_stream(from, to); }

  /// The recording so far, with the power stream up to the last tick read.
  Recording finish() {
    Recording r = rec_;
    r.power = inner_.power_stream(0.0, last_time_);
    return r;
  }

 private:
  HostInterface& inner_;
  Recording rec_;
  std::optional<RecordedSlot> open_;
  int reads_ = 0;
  Seconds last_time_ = 0.0;
};

}  // namespace powercal
