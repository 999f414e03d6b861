#pragma once

// Synthetic server with a closed-form power model. It implements HostInterface
// and serves as the reference oracle for calibration, fitting and estimation.
//
// Time advances in whole seconds. Every second produces one tick delta per core
// and one power sample stamped at the start of that second.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "powercal/error.hpp"
#include "powercal/host.hpp"
#include "powercal/telemetry.hpp"
#include "powercal/text.hpp"
#include "powercal/types.hpp"

namespace powercal {

struct CpuTruth {
  OperatingPoint op;
  std::vector<double> coefficients;  // alpha_0..alpha_n, baseline included

  friend bool operator==(const CpuTruth&, const CpuTruth&) = default;
};

struct DiskTruth {
  Hertz frequency = 0.0;
  Bytes block_size = 0.0;
  DiskDirection direction = DiskDirection::read;
  Watts watts = 0.0;
  double throughput = 0.0;  // bytes per second

  friend bool operator==(const DiskTruth&, const DiskTruth&) = default;
};

struct NetTruth {
  Hertz frequency = 0.0;
  Bytes packet_size = 0.0;
  NetDirection direction = NetDirection::send;
  Watts watts = 0.0;  // independent of the transfer rate
  double cycles_per_packet = 0.0;
  double cycles_per_byte = 0.0;

  friend bool operator==(const NetTruth&, const NetTruth&) = default;
};

/// Scheduler footprint of one second of disk activity.
struct TickCost {
  std::uint64_t active = 0;
  std::uint64_t iowait = 0;

  friend bool operator==(const TickCost&, const TickCost&) = default;
};

struct GroundTruth {
  std::string name = "custom";
  Watts baseline = 0.0;
  double noise_sigma = 0.0;
  int max_cores = 1;
  std::vector<Hertz> frequencies;
  std::vector<CpuTruth> cpu;
  std::vector<DiskTruth> disk;
  std::vector<NetTruth> net;
  TickCost disk_read_ticks{2, 10};
  TickCost disk_write_ticks{3, 15};
  std::uint64_t os_floor_ticks = 1;  // per active core per second
  int ramp_seconds = 2;
  NetworkLimits limits;

  const CpuTruth& cpu_at(const OperatingPoint& op) const {
    for (const auto& c : cpu)
      if (c.op == op) return c;
    throw Error(Errc::domain_violation, "no ground-truth curve for " + to_string(op));
  }

  const DiskTruth& disk_at(Hertz f, Bytes block, DiskDirection dir) const {
    for (const auto& d : disk)
      if (d.frequency == f && d.block_size == block && d.direction == dir) return d;
    throw Error(Errc::domain_violation, "no disk truth for " + to_string(dir) + " B=" + text::format_double(block) +
                                            " at f=" + text::format_double(f));
  }

  const NetTruth& net_at(Hertz f, Bytes packet, NetDirection dir) const {
    for (const auto& n : net)
      if (n.frequency == f && n.packet_size == packet && n.direction == dir) return n;
    throw Error(Errc::domain_violation, "no network truth for " + to_string(dir) +
                                            " S=" + text::format_double(packet) + " at f=" + text::format_double(f));
  }

  bool has_frequency(Hertz f) const { return std::find(frequencies.begin(), frequencies.end(), f) != frequencies.end(); }

  /// Full-domain checks: positive powers everywhere and concave CPU curves for
  /// two or more cores.
  void validate() const {
    if (!(baseline > 0.0)) throw Error(Errc::domain_violation, "baseline must be positive");
    if (!(noise_sigma >= 0.0)) throw Error(Errc::domain_violation, "noise sigma must be non-negative");
    if (max_cores < 1 || frequencies.empty()) throw Error(Errc::domain_violation, "empty operating grid");
    if (ramp_seconds < 0) throw Error(Errc::domain_violation, "ramp must be non-negative");
    for (int m = 1; m <= max_cores; ++m)
      for (Hertz f : frequencies) {
        const auto& c = cpu_at({m, f});
        const CpuPowerCurve curve(c.op, c.coefficients, 0.0, c.op.capacity());
        if (curve.baseline() != baseline)
          throw Error(Errc::domain_violation, "curve " + to_string(c.op) + " does not start at the baseline");
        if (m >= 2)
          for (int i = 0; i <= 64; ++i) {
            const Acps rho = c.op.capacity() * i / 64.0;
            if (curve.second_derivative(rho) > 1e-12 * std::abs(curve.coefficients()[2]))
              throw Error(Errc::domain_violation, "curve " + to_string(c.op) + " is not concave");
          }
      }
    for (const auto& d : disk)
      if (!(d.watts > 0.0) || !(d.throughput > 0.0))
        throw Error(Errc::domain_violation, "disk truth needs positive power and throughput");
    for (const auto& n : net)
      if (!(n.watts > 0.0) || n.cycles_per_packet < 0.0 || n.cycles_per_byte < 0.0)
        throw Error(Errc::domain_violation, "network truth needs positive power and non-negative cycle costs");
  }

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

namespace sim_defaults {

inline const std::vector<Hertz>& nemesis_frequencies() {
  static const std::vector<Hertz> f{1.596e9, 1.729e9, 1.862e9, 1.995e9, 2.128e9, 2.261e9,
                                    2.394e9, 2.527e9, 2.666e9, 2.793e9, 2.794e9};
  return f;
}

inline const std::vector<Bytes>& block_sizes() {
  static const std::vector<Bytes> b{10 * units::kib, 100 * units::kib, units::mib,
                                    10 * units::mib, 64 * units::mib,  100 * units::mib};
  return b;
}

inline const std::vector<Bytes>& packet_sizes() {
  static const std::vector<Bytes> s{64, 500, 1000, 1470};
  return s;
}

inline std::vector<BitsPerSecond> rates_for(Bytes packet_size) {
  if (packet_size <= 64) return {25e6, 50e6, 100e6, 150e6, 200e6};
  return {100e6, 200e6, 400e6, 600e6, 800e6};
}

}  // namespace sim_defaults

/// A synthetic machine shaped after a 4-core server with 11 frequencies.
///
/// The CPU part uses P(rho) = baseline + D(m,f) g(rho / (m f)) with a cubic g, so
/// every curve is exactly cubic. The efficiency optimum sits near 2.16 GHz, away
/// from both ends of the frequency range. All constants are synthetic.
inline GroundTruth nemesis_like_truth(double noise_sigma = 0.5) {
  GroundTruth t;
  t.name = "nemesis-like";
  t.baseline = 84.5;
  t.noise_sigma = noise_sigma;
  t.max_cores = 4;
  t.frequencies = sim_defaults::nemesis_frequencies();
  const Hertz f0 = t.frequencies.front();

  for (int m = 1; m <= t.max_cores; ++m)
    for (Hertz f : t.frequencies) {
      const double x = f / f0;
      const double dyn = std::pow(m, 0.85) * (7.4 + 1.5 * x * x * x);
      const double a[3] = {m == 1 ? 1.05 : 1.6, m == 1 ? -0.07 : -0.8, m == 1 ? 0.02 : 0.2};
      const double cap = m * f;
      t.cpu.push_back({{m, f}, {t.baseline, dyn * a[0] / cap, dyn * a[1] / (cap * cap), dyn * a[2] / (cap * cap * cap)}});
    }

  for (Hertz f : t.frequencies) {
    const double x = f / f0;
    for (Bytes b : sim_defaults::block_sizes()) {
      const double read_thr = 110e6 * (0.97 + 0.03 * b / (b + 256 * units::kib));
      t.disk.push_back({f, b, DiskDirection::read, 4.0 * (1.0 + 0.02 * (x - 1.0)), read_thr});
      const double s = b / (b + 768 * units::kib);
      t.disk.push_back({f, b, DiskDirection::write, (2.5 + 2.5 * s) * (1.0 + 0.01 * (x - 1.0)), 95e6 * s});
    }
    for (Bytes s : sim_defaults::packet_sizes())
      for (NetDirection dir : {NetDirection::send, NetDirection::receive}) {
        const bool recv = dir == NetDirection::receive;
        const double w = (1.8 + 0.5 * (x - 1.0)) * (recv ? 1.1 : 1.0) * (1.0 + 0.05 * std::log10(s / 64.0));
        t.net.push_back({f, s, dir, w, recv ? 2500.0 : 1500.0, 1.5});
      }
  }
  return t;
}

struct DiskActivity {
  DiskDirection direction = DiskDirection::read;
  Bytes block_size = 0.0;

  friend bool operator==(const DiskActivity&, const DiskActivity&) = default;
};

struct NetActivity {
  NetDirection direction = NetDirection::send;
  Bytes packet_size = 0.0;
  BitsPerSecond rate = 0.0;

  friend bool operator==(const NetActivity&, const NetActivity&) = default;
};

/// What the machine is doing during one second.
struct Activity {
  OperatingPoint op;
  double load_fraction = 0.0;
  std::optional<DiskActivity> disk;
  std::optional<NetActivity> net;

  friend bool operator==(const Activity&, const Activity&) = default;
};

struct PowerState {
  Acps rho = 0.0;
  OperatingPoint op;
  std::optional<DiskActivity> disk;
  std::optional<NetActivity> net;
};

/// Baseline-inclusive CPU polynomial at rho plus the disk and network addends.
inline Watts true_power(const GroundTruth& truth, const PowerState& state) {
  if (!(state.rho >= 0.0) || state.rho > state.op.capacity() * (1.0 + 1e-12))
    throw Error(Errc::domain_violation, "load " + text::format_double(state.rho) + " outside [0, capacity] of " +
                                            to_string(state.op));
  const auto& c = truth.cpu_at(state.op);
  double p = 0.0;
  for (auto it = c.coefficients.rbegin(); it != c.coefficients.rend(); ++it) p = p * state.rho + *it;
  if (state.disk) p += truth.disk_at(state.op.frequency, state.disk->block_size, state.disk->direction).watts;
  if (state.net) {
    if (!(state.net->rate > 0.0) || state.net->rate > truth.limits.cap(state.net->packet_size))
      throw Error(Errc::domain_violation, "network rate outside the achievable range");
    p += truth.net_at(state.op.frequency, state.net->packet_size, state.net->direction).watts;
  }
  return p;
}

/// Per-core tick deltas produced by one second of `a`.
inline std::vector<CoreTicks> activity_ticks(const GroundTruth& truth, const Activity& a) {
  if (a.op.cores < 1 || a.op.cores > truth.max_cores)
    throw Error(Errc::domain_violation, "active core count outside [1, " + std::to_string(truth.max_cores) + "]");
  if (!(a.load_fraction >= 0.0 && a.load_fraction <= 1.0))
    throw Error(Errc::domain_violation, "load fraction outside [0, 1]");

  const auto m = static_cast<std::size_t>(a.op.cores);
  std::vector<CoreTicks> cores(static_cast<std::size_t>(truth.max_cores));
  std::vector<std::uint64_t> used(m, 0);

  // Spread `n` ticks evenly over the active cores, spilling past saturated ones.
  auto spread = [&](std::uint64_t n, std::uint64_t CoreTicks::*field) {
    while (n > 0) {
      std::size_t open = 0;
      for (std::size_t i = 0; i < m; ++i) open += used[i] < 100 ? 1 : 0;
      if (open == 0) return;
      const std::uint64_t share = std::max<std::uint64_t>(1, n / open);
      for (std::size_t i = 0; i < m && n > 0; ++i) {
        const std::uint64_t take = std::min({share, n, 100 - used[i]});
        cores[i].*field += take;
        used[i] += take;
        n -= take;
      }
    }
  };

  spread(truth.os_floor_ticks * m, &CoreTicks::system);
  spread(static_cast<std::uint64_t>(std::floor(a.load_fraction * 100.0 * static_cast<double>(m) + 1e-9)),
         &CoreTicks::user);
  std::uint64_t iowait = 0;
  if (a.disk) {
    const TickCost cost = a.disk->direction == DiskDirection::read ? truth.disk_read_ticks : truth.disk_write_ticks;
    spread(cost.active, &CoreTicks::system);
    iowait = cost.iowait;
  }
  if (a.net) {
    const auto& n = truth.net_at(a.op.frequency, a.net->packet_size, a.net->direction);
    const double pps = a.net->rate / (units::bits_per_byte * a.net->packet_size);
    const double cycles = pps * (n.cycles_per_packet + n.cycles_per_byte * a.net->packet_size);
    spread(static_cast<std::uint64_t>(std::llround(cycles * units::ticks_per_second / a.op.frequency)),
           &CoreTicks::softirq);
  }
  for (std::size_t i = 0; i < m && iowait > 0; ++i) {
    const std::uint64_t take = std::min(iowait, 100 - used[i]);
    cores[i].iowait += take;
    used[i] += take;
    iowait -= take;
  }
  for (std::size_t i = 0; i < cores.size(); ++i) cores[i].idle = 100 - (i < m ? used[i] : 0);
  return cores;
}

/// Load executed during one second of `a`, measured exactly as a tick reader would.
inline Acps activity_rho(const GroundTruth& truth, const Activity& a) {
  std::uint64_t active = 0;
  for (const auto& c : activity_ticks(truth, a)) active += c.active();
  return static_cast<double>(active) * a.op.frequency / units::ticks_per_second;
}

/// Deterministic per-second timeline generator.
class SimEngine {
 public:
  SimEngine(GroundTruth truth, std::uint64_t seed) : truth_(std::move(truth)), rng_(seed) {
    truth_.validate();
    counters_.assign(static_cast<std::size_t>(truth_.max_cores), CoreTicks{});
  }

  const GroundTruth& truth() const { return truth_; }

  void run(const Activity& a, int seconds) {
    if (seconds < 0) throw Error(Errc::invalid_argument, "negative duration");
    if (seconds == 0) return;
    if (!truth_.has_frequency(a.op.frequency))
      throw Error(Errc::domain_violation, "frequency " + text::format_double(a.op.frequency) + " not offered");
    const auto ticks = activity_ticks(truth_, a);
    std::uint64_t active = 0;
    for (const auto& c : ticks) active += c.active();
    const Acps rho = static_cast<double>(active) * a.op.frequency / units::ticks_per_second;
    const Watts target = true_power(truth_, {rho, a.op, a.disk, a.net});

    if (!last_ || *last_ != a) {
      ramp_from_ = last_ ? last_power_ : target;
      ramp_left_ = last_ ? truth_.ramp_seconds : 0;
      last_ = a;
    }
    std::normal_distribution<double> noise(0.0, truth_.noise_sigma > 0.0 ? truth_.noise_sigma : 1.0);
    for (int s = 0; s < seconds; ++s) {
      Watts p = target;
      if (ramp_left_ > 0) {
        const int step = truth_.ramp_seconds - ramp_left_ + 1;
        p = ramp_from_ + (target - ramp_from_) * step / (truth_.ramp_seconds + 1);
        --ramp_left_;
      }
      const Seconds t = now_;
      true_samples_.push_back({t, p});
      samples_.push_back({t, truth_.noise_sigma > 0.0 ? p + noise(rng_) : p});
      last_power_ = p;
      for (std::size_t i = 0; i < counters_.size(); ++i) {
        auto& c = counters_[i];
        const auto& d = ticks[i];
        c.user += d.user;
        c.nice += d.nice;
        c.system += d.system;
        c.irq += d.irq;
        c.softirq += d.softirq;
        c.iowait += d.iowait;
        c.idle += d.idle;
      }
      now_ += 1.0;
    }
  }

  Seconds now() const { return now_; }
  TickSnapshot ticks() const { return {now_, counters_}; }
  const std::vector<PowerSample>& samples() const { return samples_; }
  const std::vector<PowerSample>& true_samples() const { return true_samples_; }

  std::vector<PowerSample> samples_between(Seconds from, Seconds to) const { return window(samples_, from, to); }

  /// Noise-free energy drawn in [from, to).
  Joules true_energy(Seconds from, Seconds to) const {
    Joules e = 0.0;
    for (const auto& s : window(true_samples_, from, to)) e += s.watts;
    return e;
  }

 private:
  static std::vector<PowerSample> window(const std::vector<PowerSample>& v, Seconds from, Seconds to) {
    auto lo = std::lower_bound(v.begin(), v.end(), from,
                               [](const PowerSample& s, Seconds t) { return s.timestamp < t; });
    auto hi = std::lower_bound(lo, v.end(), to, [](const PowerSample& s, Seconds t) { return s.timestamp < t; });
    return {lo, hi};
  }

  GroundTruth truth_;
  std::mt19937_64 rng_;
  Seconds now_ = 0.0;
  std::vector<CoreTicks> counters_;
  std::vector<PowerSample> samples_;
  std::vector<PowerSample> true_samples_;
  std::optional<Activity> last_;
  Watts last_power_ = 0.0;
  Watts ramp_from_ = 0.0;
  int ramp_left_ = 0;
};

struct TimelineSegment {
  Activity activity;
  int seconds = 0;
};

struct EmittedStreams {
  std::vector<PowerSample> samples;
  std::vector<PowerSample> true_samples;
  std::vector<TickSnapshot> snapshots;  // one per second boundary, starting at t = 0
};

inline EmittedStreams emit_samples(const GroundTruth& truth, const std::vector<TimelineSegment>& timeline,
                                   std::uint64_t seed) {
  SimEngine engine(truth, seed);
  EmittedStreams out;
  out.snapshots.push_back(engine.ticks());
  for (const auto& seg : timeline)
    for (int s = 0; s < seg.seconds; ++s) {
      engine.run(seg.activity, 1);
      out.snapshots.push_back(engine.ticks());
    }
  out.samples = engine.samples();
  out.true_samples = engine.true_samples();
  return out;
}

/// HostInterface over a SimEngine.
class SimHost : public HostInterface {
 public:
  explicit SimHost(GroundTruth truth, std::uint64_t seed = 42) : engine_(std::move(truth), seed) {
    op_ = {1, engine_.truth().frequencies.front()};
  }

  std::string describe() const override { return "sim:" + engine_.truth().name; }

  void set_frequency(Hertz frequency) override {
    if (!engine_.truth().has_frequency(frequency))
      throw Error(Errc::host_failure, "frequency " + text::format_double(frequency) + " Hz is not offered");
    op_.frequency = frequency;
  }

  void set_active_cores(int cores) override {
    if (cores < 1 || cores > engine_.truth().max_cores)
      throw Error(Errc::host_failure, "cannot activate " + std::to_string(cores) + " cores");
    op_.cores = cores;
  }

  void apply_cpu_load(double fraction, int cores, Seconds duration) override {
    set_active_cores(cores);
    run({op_, fraction, std::nullopt, std::nullopt}, duration);
  }

  DiskIoResult disk_io(DiskDirection direction, Bytes block_size, Bytes volume, bool /*sync_each_block*/) override {
    const DiskTruth* d = nullptr;
    try {
      d = &engine_.truth().disk_at(op_.frequency, block_size, direction);
    } catch (const Error& e) {
      throw Error(Errc::host_failure, e.what());
    }
    const int secs = std::max(1, static_cast<int>(std::llround(volume / d->throughput)));
    run({op_, 0.0, DiskActivity{direction, block_size}, std::nullopt}, secs);
    return {d->throughput * secs, static_cast<double>(secs)};
  }

  void flush_caches() override { ++flushes_; }

  NetTransferResult net_transfer(NetDirection direction, Bytes packet_size, BitsPerSecond rate,
                                 Seconds duration) override {
    if (rate > engine_.truth().limits.cap(packet_size))
      throw Error(Errc::host_failure, "rate above the achievable cap");
    const Seconds secs = std::ceil(duration);
    run({op_, 0.0, std::nullopt, NetActivity{direction, packet_size, rate}}, duration);
    return {rate * secs / units::bits_per_byte, secs};
  }

  TickSnapshot read_ticks() override { return engine_.ticks(); }

  std::vector<PowerSample> power_stream(Seconds from, Seconds to) override { return engine_.samples_between(from, to); }

  SimEngine& engine() { return engine_; }
  const SimEngine& engine() const { return engine_; }
  int flush_count() const { return flushes_; }

 private:
  void run(const Activity& a, Seconds duration) {
    if (!(duration > 0.0)) throw Error(Errc::host_failure, "duration must be positive");
    try {
      engine_.run(a, static_cast<int>(std::ceil(duration)));
    } catch (const Error& e) {
      throw Error(Errc::host_failure, e.what());
    }
  }

  SimEngine engine_;
  OperatingPoint op_;
  int flushes_ = 0;
};

// ---------------------------------------------------------------------------
// Simulated applications

struct AppPhaseSpec {
  std::string name;
  OperatingPoint op;
  double load_fraction = 0.0;
  int seconds = 0;
  int disk_read_seconds = 0;
  int disk_write_seconds = 0;
  Bytes block_size = 0.0;
  std::optional<NetActivity> net;
};

struct AppRun {
  ActivityTrace trace;
  std::vector<Joules> true_phase_energy;
  Joules true_energy = 0.0;
  Seconds start = 0.0;
  Seconds duration = 0.0;
};

/// Runs phases back to back. Within a phase the disk reads come first, then the
/// writes, then plain computation; network traffic spans the whole phase. The
/// returned trace holds what a tick reader would have measured.
inline AppRun run_application(SimEngine& engine, const std::vector<AppPhaseSpec>& phases) {
  AppRun out;
  out.start = engine.now();
  const auto& truth = engine.truth();
  for (const auto& p : phases) {
    if (p.disk_read_seconds + p.disk_write_seconds > p.seconds)
      throw Error(Errc::invalid_argument, "phase `" + p.name + "` has more disk time than duration");
    const Seconds t0 = engine.now();
    const TickSnapshot k0 = engine.ticks();
    Activity a{p.op, p.load_fraction, std::nullopt, p.net};
    Phase ph;
    ph.name = p.name;
    ph.op = p.op;
    ph.block_size = p.block_size;
    if (p.disk_read_seconds > 0) {
      a.disk = DiskActivity{DiskDirection::read, p.block_size};
      engine.run(a, p.disk_read_seconds);
      ph.disk_read = truth.disk_at(p.op.frequency, p.block_size, DiskDirection::read).throughput * p.disk_read_seconds;
    }
    if (p.disk_write_seconds > 0) {
      a.disk = DiskActivity{DiskDirection::write, p.block_size};
      engine.run(a, p.disk_write_seconds);
      ph.disk_write =
          truth.disk_at(p.op.frequency, p.block_size, DiskDirection::write).throughput * p.disk_write_seconds;
    }
    a.disk.reset();
    engine.run(a, p.seconds - p.disk_read_seconds - p.disk_write_seconds);

    const TickSnapshot k1 = engine.ticks();
    ph.duration = engine.now() - t0;
    ph.active_cycles = static_cast<double>(classify_ticks(k0, k1).active) * p.op.frequency / units::ticks_per_second;
    if (p.net) {
      ph.net_rate = p.net->rate;
      ph.packet_size = p.net->packet_size;
      const Bytes v = p.net->rate * *ph.duration / units::bits_per_byte;
      (p.net->direction == NetDirection::send ? ph.net_send : ph.net_recv) = v;
    }
    out.true_phase_energy.push_back(engine.true_energy(t0, engine.now()));
    out.true_energy += out.true_phase_energy.back();
    out.trace.phases.push_back(std::move(ph));
  }
  out.duration = engine.now() - out.start;
  return out;
}

/// Ten map-reduce-like iterations on all cores: alternating 45%/55% CPU load,
/// a 6 s read and a 4 s write of 64 MiB blocks, and UDP traffic throughout.
inline std::vector<AppPhaseSpec> hadoop_like_app(const GroundTruth& truth, Hertz frequency,
                                                 std::optional<NetActivity> net) {
  std::vector<AppPhaseSpec> phases;
  for (int i = 0; i < 10; ++i) {
    AppPhaseSpec p;
    p.name = "iter" + std::to_string(i);
    p.op = {truth.max_cores, frequency};
    p.load_fraction = i % 2 == 0 ? 0.45 : 0.55;
    p.seconds = 40 + (i % 3) - 1;
    p.disk_read_seconds = 6;
    p.disk_write_seconds = 4;
    p.block_size = 64 * units::mib;
    p.net = net;
    phases.push_back(std::move(p));
  }
  return phases;
}

}  // namespace powercal
