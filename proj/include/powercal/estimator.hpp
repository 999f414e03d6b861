#pragma once

#include <cmath>
#include <span>
#include <string>

#include "powercal/error.hpp"
#include "powercal/lookup.hpp"
#include "powercal/telemetry.hpp"
#include "powercal/text.hpp"
#include "powercal/types.hpp"

namespace powercal {

/// T = C / rho.
inline Seconds estimate_runtime(double active_cycles, Acps load) {
  if (!(active_cycles > 0.0) || !(load > 0.0))
    throw Error(Errc::invalid_argument, "runtime needs positive cycles and load");
  return active_cycles / load;
}

/// rho = C / T.
inline Acps estimate_load(double active_cycles, Seconds duration) {
  if (!(duration > 0.0)) throw Error(Errc::invalid_argument, "load needs a positive duration");
  if (!(active_cycles >= 0.0)) throw Error(Errc::invalid_argument, "active cycles must be non-negative");
  return active_cycles / duration;
}

inline const CpuPowerCurve& require_curve(const ServerProfile& profile, const OperatingPoint& op) {
  const auto* c = profile.find_curve(op);
  if (!c) throw Error(Errc::uncalibrated_operating_point, "profile has no curve for " + to_string(op));
  return *c;
}

/// Baseline plus CPU energy: P(rho) * C / rho.
inline Joules estimate_cpu_baseline_energy(const ServerProfile& profile, const OperatingPoint& op, Acps rho_app,
                                           double c_app) {
  const auto& curve = require_curve(profile, op);
  if (!(rho_app > 0.0)) throw Error(Errc::invalid_argument, "load must be positive");
  if (!curve.covers(rho_app))
    throw Error(Errc::load_out_of_domain, "load " + text::format_double(rho_app) + " outside [" +
                                              text::format_double(curve.rho_min()) + ", " +
                                              text::format_double(curve.rho_max()) + "] of " + to_string(op));
  if (!(c_app >= 0.0)) throw Error(Errc::invalid_argument, "active cycles must be non-negative");
  return curve(rho_app) * c_app / rho_app;
}

/// V_r / eta_r + V_w / eta_w with efficiencies resolved at (frequency, block size).
inline Joules estimate_disk_energy(const ServerProfile& profile, const OperatingPoint& op, Bytes block_size,
                                   Bytes v_read, Bytes v_write) {
  if (v_read < 0.0 || v_write < 0.0) throw Error(Errc::invalid_argument, "volumes must be non-negative");
  Joules e = 0.0;
  if (v_read > 0.0) e += v_read / lookup_disk(profile.disk, op.frequency, block_size, DiskDirection::read).efficiency;
  if (v_write > 0.0)
    e += v_write / lookup_disk(profile.disk, op.frequency, block_size, DiskDirection::write).efficiency;
  return e;
}

/// 8 V_s / eta_s(R) + 8 V_r / eta_r(R); volumes in bytes, eta in bits per joule.
inline Joules estimate_net_energy(const ServerProfile& profile, const OperatingPoint& op, Bytes packet_size,
                                  BitsPerSecond rate, Bytes v_send, Bytes v_recv) {
  if (v_send < 0.0 || v_recv < 0.0) throw Error(Errc::invalid_argument, "volumes must be non-negative");
  auto term = [&](Bytes v, NetDirection dir) -> Joules {
    if (v == 0.0) return 0.0;
    const auto entry = lookup_network(profile.network, op.frequency, packet_size, dir);
    if (!entry.covers(rate))
      throw Error(Errc::rate_out_of_domain, text::format_double(units::to_mbps(rate)) + " Mbps outside [" +
                                                text::format_double(units::to_mbps(entry.rate_min)) + ", " +
                                                text::format_double(units::to_mbps(entry.rate_max)) + "] Mbps for " +
                                                to_string(dir));
    const double eta = entry.efficiency(rate);
    if (!(eta > 0.0)) throw Error(Errc::non_positive_power, "network efficiency is not positive at this rate");
    return v * units::bits_per_byte / eta;
  };
  return term(v_send, NetDirection::send) + term(v_recv, NetDirection::receive);
}

/// Energy of one phase. Missing durations come from C / rho; `auto` network
/// volumes come from R * T.
inline PhaseEnergy estimate_phase(const ServerProfile& profile, const Phase& phase) {
  PhaseEnergy out;
  out.name = phase.name;
  if (phase.duration) {
    out.duration = *phase.duration;
    out.rho = estimate_load(phase.active_cycles, out.duration);
  } else if (phase.rho) {
    out.rho = *phase.rho;
    out.duration = estimate_runtime(phase.active_cycles, out.rho);
  } else {
    throw Error(Errc::invalid_argument, "phase has neither a duration nor a load");
  }
  const Bytes auto_volume = phase.net_rate * out.duration / units::bits_per_byte;
  const Bytes v_send = phase.net_send.value_or(auto_volume);
  const Bytes v_recv = phase.net_recv.value_or(auto_volume);

  out.e_baseline_cpu = estimate_cpu_baseline_energy(profile, phase.op, out.rho, phase.active_cycles);
  out.e_disk = estimate_disk_energy(profile, phase.op, phase.block_size, phase.disk_read, phase.disk_write);
  out.e_network = estimate_net_energy(profile, phase.op, phase.packet_size, phase.net_rate, v_send, v_recv);
  out.e_total = out.e_baseline_cpu + out.e_disk + out.e_network;
  return out;
}

/// Per-phase estimates summed into totals. The first failing phase aborts with a PhaseError.
inline EnergyEstimate estimate_total(const ServerProfile& profile, const ActivityTrace& trace) {
  EnergyEstimate out;
  for (std::size_t i = 0; i < trace.phases.size(); ++i) {
    try {
      out.per_phase.push_back(estimate_phase(profile, trace.phases[i]));
    } catch (const Error& e) {
      throw PhaseError(i, trace.phases[i].name, e);
    }
    const auto& p = out.per_phase.back();
    out.e_baseline_cpu += p.e_baseline_cpu;
    out.e_disk += p.e_disk;
    out.e_network += p.e_network;
    out.duration += p.duration;
  }
  out.e_total = out.e_baseline_cpu + out.e_disk + out.e_network;
  return out;
}

/// (measured - estimated) / measured, where measured = mean sample power * duration.
inline double score_estimate(const EnergyEstimate& estimate, std::span<const PowerSample> measured,
                             Seconds duration) {
  if (!(duration > 0.0)) throw Error(Errc::invalid_argument, "duration must be positive");
  if (measured.empty()) throw Error(Errc::insufficient_samples, "no measured samples");
  const Seconds span = measured.back().timestamp - measured.front().timestamp + 1.0;
  if (span + 1e-9 < duration)
    throw Error(Errc::insufficient_samples, "samples cover " + text::format_double(span) + " s of a " +
                                                text::format_double(duration) + " s run");
  double sum = 0.0;
  for (const auto& s : measured) sum += s.watts;
  const Joules e = sum / static_cast<double>(measured.size()) * duration;
  return (e - estimate.e_total) / e;
}

}  // namespace powercal
