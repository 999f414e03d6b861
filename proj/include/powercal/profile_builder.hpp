#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "powercal/envelope.hpp"
#include "powercal/fitting.hpp"
#include "powercal/types.hpp"
#include "powercal/workloads.hpp"

namespace powercal {

struct ProfileOptions {
  std::string name;
  int degree = 3;
  int net_order = 2;
  int envelope_points = kDefaultEnvelopePoints;
  bool envelopes = true;
};

struct ProfileFit {
  ServerProfile profile;
  std::vector<FitReport> cpu_reports;
  std::vector<FitReport> net_reports;
  std::vector<std::string> warnings;
};

namespace detail {

inline void fit_disk_model(const CalibrationDataset& data, ProfileFit& out) {
  struct Acc {
    Bytes volume = 0.0;
    Joules energy = 0.0;
    Seconds time = 0.0;
  };
  std::map<DiskKey, Acc> acc;
  for (const auto& o : data.disk) {
    const auto* curve = out.profile.find_curve(o.op);
    if (!curve) {
      out.warnings.push_back(o.label + ": no CPU curve for " + to_string(o.op) + ", disk slot skipped");
      continue;
    }
    const auto iso = isolate_component_power(o.power, *curve, o.rho);
    if (iso.out_of_domain) {
      out.warnings.push_back(o.label + ": load outside the CPU curve domain, disk slot skipped");
      continue;
    }
    if (!iso.usable()) {
      out.warnings.push_back(o.label + ": isolated disk power " + text::format_double(iso.watts) +
                             " W is not positive, excluded");
      continue;
    }
    auto& a = acc[{o.op.frequency, o.block_size, o.direction}];
    a.volume += o.volume;
    a.energy += iso.watts * o.duration;
    a.time += o.duration;
  }
  for (const auto& [key, a] : acc)
    out.profile.disk.entries[key] = {disk_efficiency(a.volume, a.energy / a.time, a.time), a.energy / a.time};

  // Write efficiency should not drop as blocks grow.
  std::map<Hertz, std::vector<double>> writes;
  for (const auto& [key, e] : out.profile.disk.entries)
    if (key.direction == DiskDirection::write) writes[key.frequency].push_back(e.efficiency);
  for (const auto& [f, effs] : writes)
    for (std::size_t i = 1; i < effs.size(); ++i)
      if (effs[i] < effs[i - 1] * 0.99) {
        out.warnings.push_back("write efficiency decreases with block size at " + text::format_double(f) + " Hz");
        break;
      }
}

inline void fit_network_model(const CalibrationDataset& data, int order, ProfileFit& out) {
  std::map<NetKey, std::vector<RatePoint>> points;
  for (const auto& o : data.net) {
    const auto* curve = out.profile.find_curve(o.op);
    if (!curve) {
      out.warnings.push_back(o.label + ": no CPU curve for " + to_string(o.op) + ", network slot skipped");
      continue;
    }
    const auto iso = isolate_component_power(o.power, *curve, o.rho);
    if (iso.out_of_domain) {
      out.warnings.push_back(o.label + ": load outside the CPU curve domain, network slot skipped");
      continue;
    }
    if (!iso.usable()) {
      out.warnings.push_back(o.label + ": isolated network power " + text::format_double(iso.watts) +
                             " W is not positive, excluded");
      continue;
    }
    points[{o.op.frequency, o.packet_size, o.direction}].push_back({o.rate, o.rate / iso.watts});
  }
  for (const auto& [key, pts] : points) {
    const std::string label = "net_" + to_string(key.direction) + ":f=" + text::format_double(key.frequency) +
                              ":S=" + text::format_double(key.packet_size);
    try {
      auto fit = fit_network_efficiency(pts, order);
      fit.report.label = label;
      BitsPerSecond lo = pts.front().rate, hi = pts.front().rate;
      for (const auto& p : pts) {
        lo = std::min(lo, p.rate);
        hi = std::max(hi, p.rate);
      }
      out.profile.network.entries[key] = {fit.beta1, fit.beta2, lo, hi};
      out.net_reports.push_back(std::move(fit.report));
    } catch (const Error& e) {
      out.warnings.push_back(label + ": " + e.what());
    }
  }
}

}  // namespace detail

/// Fits every model the dataset supports. CPU curves are mandatory; disk and
/// network models are added when the dataset carries those slots.
inline ProfileFit fit_profile(const CalibrationDataset& data, const ProfileOptions& options = {}) {
  ProfileFit out;
  auto& p = out.profile;
  p.name = options.name.empty() ? data.host : options.name;

  std::map<OperatingPoint, std::vector<LoadSample>> by_op;
  for (const auto& o : data.cpu) by_op[o.sample.op].push_back(o.sample);
  if (by_op.empty()) throw Error(Errc::insufficient_data, "dataset holds no CPU observations");

  std::set<Hertz> freqs;
  for (const auto& [op, samples] : by_op) {
    auto fit = fit_cpu_curve(samples, options.degree);
    p.cpu_curves.push_back(fit.curve);
    out.cpu_reports.push_back(std::move(fit.report));
    freqs.insert(op.frequency);
    p.max_cores = std::max(p.max_cores, op.cores);
  }
  p.frequencies.assign(freqs.begin(), freqs.end());
  const auto base = extract_baseline(p.cpu_curves);
  p.baseline = base.baseline;
  p.baseline_spread = base.spread;

  if (data.disk.empty())
    out.warnings.push_back("dataset has no disk slots, profile carries no disk model");
  else
    detail::fit_disk_model(data, out);
  if (data.net.empty())
    out.warnings.push_back("dataset has no network slots, profile carries no network model");
  else
    detail::fit_network_model(data, options.net_order, out);

  if (options.envelopes) {
    p.min_power_envelope = minimal_power_envelope(p.cpu_curves, options.envelope_points);
    p.max_efficiency_envelope = maximal_efficiency_envelope(p.cpu_curves, options.envelope_points);
    for (const auto& w : p.min_power_envelope->warnings) out.warnings.push_back("envelope: " + w);
  }
  return out;
}

}  // namespace powercal
