#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "powercal/error.hpp"
#include "powercal/units.hpp"

namespace powercal {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kMaxCpuDegree = 7;

/// (active cores, shared clock) configuration. All cores always run at the same frequency.
struct OperatingPoint {
  int cores = 1;
  Hertz frequency = 0.0;

  Acps capacity() const { return cores * frequency; }

  friend auto operator<=>(const OperatingPoint&, const OperatingPoint&) = default;
};

inline std::string to_string(const OperatingPoint& op) {
  std::ostringstream os;
  os << op.cores << "c@" << op.frequency / units::giga << "GHz";
  return os.str();
}

struct LoadSample {
  Acps rho = 0.0;
  Watts power = 0.0;
  OperatingPoint op;
  Watts stddev = 0.0;

  friend bool operator==(const LoadSample&, const LoadSample&) = default;
};

/// A core cannot retire more cycles than its clock. Real hosts occasionally do
/// (SMT accounting), so this is a warning condition, never a hard error.
inline bool exceeds_capacity(const LoadSample& s) { return s.rho > s.op.capacity() * (1.0 + 1e-12); }

/// Baseline-inclusive CPU power polynomial P(rho) = sum_k alpha_k rho^k for one operating point.
class CpuPowerCurve {
 public:
  CpuPowerCurve(OperatingPoint op, std::vector<double> coefficients, Acps rho_min, Acps rho_max,
                double fit_error = 0.0)
      : op_(op),
        coefficients_(std::move(coefficients)),
        rho_min_(rho_min),
        rho_max_(rho_max),
        fit_error_(fit_error) {
    validate();
  }

  const OperatingPoint& op() const { return op_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  Acps rho_min() const { return rho_min_; }
  Acps rho_max() const { return rho_max_; }
  double fit_error() const { return fit_error_; }

  /// alpha_0: power as load tends to zero.
  Watts baseline() const { return coefficients_.front(); }

  bool covers(Acps rho) const { return rho >= rho_min_ && rho <= rho_max_; }

  Watts operator()(Acps rho) const {
    double acc = 0.0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * rho + *it;
    return acc;
  }

  /// d^2P/drho^2, used for concavity checks.
  double second_derivative(Acps rho) const {
    double acc = 0.0;
    for (int k = degree(); k >= 2; --k) acc = acc * rho + k * (k - 1) * coefficients_[k];
    return acc;
  }

  friend bool operator==(const CpuPowerCurve&, const CpuPowerCurve&) = default;

 private:
  void validate() const {
    const auto where = " (" + to_string(op_) + ")";
    if (op_.cores < 1 || !(op_.frequency > 0.0))
      throw Error(Errc::domain_violation, "operating point needs cores >= 1 and frequency > 0" + where);
    if (coefficients_.size() < 2 || degree() > kMaxCpuDegree)
      throw Error(Errc::domain_violation, "curve degree must be in [1, 7]" + where);
    for (double c : coefficients_)
      if (!std::isfinite(c)) throw Error(Errc::domain_violation, "non-finite coefficient" + where);
    if (!(baseline() > 0.0)) throw Error(Errc::domain_violation, "alpha_0 must be strictly positive" + where);
    if (!(rho_min_ >= 0.0) || !(rho_max_ >= rho_min_) || !std::isfinite(rho_max_))
      throw Error(Errc::domain_violation, "curve domain must satisfy 0 <= rho_min <= rho_max" + where);
    constexpr int probes = 64;
    for (int i = 0; i <= probes; ++i) {
      const Acps rho = rho_min_ + (rho_max_ - rho_min_) * i / probes;
      if (!((*this)(rho) > 0.0))
        throw Error(Errc::domain_violation, "curve is non-positive inside its domain" + where);
    }
  }

  OperatingPoint op_;
  std::vector<double> coefficients_;
  Acps rho_min_;
  Acps rho_max_;
  double fit_error_;
};

enum class EnvelopeKind { minimal_power, maximal_efficiency };

inline std::string to_string(EnvelopeKind k) {
  return k == EnvelopeKind::minimal_power ? "minimal_power" : "maximal_efficiency";
}

struct EnvelopePoint {
  Acps rho = 0.0;
  double value = 0.0;  // watts or ACPS/J depending on kind
  OperatingPoint source;

  friend bool operator==(const EnvelopePoint&, const EnvelopePoint&) = default;
};

struct EnvelopeCurve {
  EnvelopeKind kind = EnvelopeKind::minimal_power;
  std::vector<EnvelopePoint> breakpoints;
  std::vector<std::string> warnings;

  std::size_t source_switches() const {
    std::size_t n = 0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (breakpoints[i].source != breakpoints[i - 1].source) ++n;
    return n;
  }

  friend bool operator==(const EnvelopeCurve&, const EnvelopeCurve&) = default;
};

enum class DiskDirection { read, write };
enum class NetDirection { send, receive };

inline std::string to_string(DiskDirection d) { return d == DiskDirection::read ? "read" : "write"; }
inline std::string to_string(NetDirection d) { return d == NetDirection::send ? "send" : "receive"; }

struct DiskKey {
  Hertz frequency = 0.0;
  Bytes block_size = 0.0;
  DiskDirection direction = DiskDirection::read;

  friend auto operator<=>(const DiskKey&, const DiskKey&) = default;
};

struct DiskEntry {
  double efficiency = 0.0;  // bytes per joule of isolated disk energy
  Watts mean_power = 0.0;   // isolated disk power

  friend bool operator==(const DiskEntry&, const DiskEntry&) = default;
};

struct DiskModel {
  std::map<DiskKey, DiskEntry> entries;

  bool empty() const { return entries.empty(); }
  friend bool operator==(const DiskModel&, const DiskModel&) = default;
};

struct NetKey {
  Hertz frequency = 0.0;
  Bytes packet_size = 0.0;
  NetDirection direction = NetDirection::send;

  friend auto operator<=>(const NetKey&, const NetKey&) = default;
};

/// eta_N(R) = beta1 R + beta2 R^2 in bits per joule with R in bits per second.
struct NetEntry {
  double beta1 = 0.0;  // W^-1
  double beta2 = 0.0;  // W^-1 bps^-1
  BitsPerSecond rate_min = 0.0;
  BitsPerSecond rate_max = 0.0;

  double efficiency(BitsPerSecond rate) const { return beta1 * rate + beta2 * rate * rate; }
  bool covers(BitsPerSecond rate) const { return rate >= rate_min && rate <= rate_max; }

  friend bool operator==(const NetEntry&, const NetEntry&) = default;
};

struct NetworkModel {
  std::map<NetKey, NetEntry> entries;

  bool empty() const { return entries.empty(); }
  friend bool operator==(const NetworkModel&, const NetworkModel&) = default;
};

struct ServerProfile {
  int schema_version = kSchemaVersion;
  std::string name;
  std::vector<Hertz> frequencies;
  int max_cores = 0;
  std::vector<CpuPowerCurve> cpu_curves;
  Watts baseline = 0.0;         // consensus alpha_0 (median)
  Watts baseline_spread = 0.0;  // max - min of per-curve alpha_0
  DiskModel disk;
  NetworkModel network;
  std::optional<EnvelopeCurve> min_power_envelope;
  std::optional<EnvelopeCurve> max_efficiency_envelope;

  const CpuPowerCurve* find_curve(const OperatingPoint& op) const {
    auto it = std::find_if(cpu_curves.begin(), cpu_curves.end(),
                           [&](const CpuPowerCurve& c) { return c.op() == op; });
    return it == cpu_curves.end() ? nullptr : &*it;
  }

  friend bool operator==(const ServerProfile&, const ServerProfile&) = default;
};

/// One execution phase of an application. Volumes are bytes.
struct Phase {
  std::string name;
  double active_cycles = 0.0;
  std::optional<Seconds> duration;
  std::optional<Acps> rho;  // used to derive duration when it is absent
  Bytes disk_read = 0.0;
  Bytes disk_write = 0.0;
  // nullopt means "derive from net_rate x duration".
  std::optional<Bytes> net_send = 0.0;
  std::optional<Bytes> net_recv = 0.0;
  BitsPerSecond net_rate = 0.0;
  Bytes packet_size = 0.0;
  Bytes block_size = 0.0;
  OperatingPoint op;

  friend bool operator==(const Phase&, const Phase&) = default;
};

struct ActivityTrace {
  std::vector<Phase> phases;

  friend bool operator==(const ActivityTrace&, const ActivityTrace&) = default;
};

struct PhaseEnergy {
  std::string name;
  Seconds duration = 0.0;
  Acps rho = 0.0;
  Joules e_baseline_cpu = 0.0;
  Joules e_disk = 0.0;
  Joules e_network = 0.0;
  Joules e_total = 0.0;

  friend bool operator==(const PhaseEnergy&, const PhaseEnergy&) = default;
};

/// E_B and E_C are only ever reported jointly.
struct EnergyEstimate {
  Joules e_baseline_cpu = 0.0;
  Joules e_disk = 0.0;
  Joules e_network = 0.0;
  Joules e_total = 0.0;
  Seconds duration = 0.0;
  std::vector<PhaseEnergy> per_phase;

  friend bool operator==(const EnergyEstimate&, const EnergyEstimate&) = default;
};

}  // namespace powercal
