#pragma once

// Structured-text (JSON) persistence. Every top-level document carries
// `schema_version` and `kind`; loaders reject anything else.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "powercal/error.hpp"
#include "powercal/hostsim.hpp"
#include "powercal/types.hpp"
#include "powercal/workloads.hpp"

namespace powercal::json {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Field helpers

namespace detail {

template <class T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::parse_error, std::string("missing field `") + key + "`");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("field `") + key + "`: " + e.what());
  }
}

template <class T>
std::optional<T> get_opt(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, key);
}

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline DiskDirection disk_direction(const std::string& s) {
  if (s == "read") return DiskDirection::read;
  if (s == "write") return DiskDirection::write;
  throw Error(Errc::parse_error, "unknown disk direction `" + s + "`");
}

inline NetDirection net_direction(const std::string& s) {
  if (s == "send") return NetDirection::send;
  if (s == "receive") return NetDirection::receive;
  throw Error(Errc::parse_error, "unknown network direction `" + s + "`");
}

inline Json document(const char* kind) { return Json{{"schema_version", kSchemaVersion}, {"kind", kind}}; }

inline void check_document(const Json& j, const char* kind) {
  if (!j.is_object()) throw Error(Errc::parse_error, "document is not an object");
  const auto version = get<int>(j, "schema_version");
  if (version != kSchemaVersion)
    throw Error(Errc::schema_version, "schema_version " + std::to_string(version) + " is not supported (expected " +
                                          std::to_string(kSchemaVersion) + ")");
  const auto k = get<std::string>(j, "kind");
  if (k != kind) throw Error(Errc::parse_error, "expected a `" + std::string(kind) + "` document, got `" + k + "`");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Value types

inline Json encode(const OperatingPoint& op) { return {{"cores", op.cores}, {"frequency", op.frequency}}; }

inline OperatingPoint decode_operating_point(const Json& j) {
  return {detail::get<int>(j, "cores"), detail::get<double>(j, "frequency")};
}

inline Json encode(const CpuPowerCurve& c) {
  return {{"operating_point", encode(c.op())},
          {"coefficients", c.coefficients()},
          {"degree", c.degree()},
          {"domain", {c.rho_min(), c.rho_max()}},
          {"fit_error", c.fit_error()}};
}

inline CpuPowerCurve decode_curve(const Json& j) {
  const auto coef = detail::get<std::vector<double>>(j, "coefficients");
  const auto domain = detail::get<std::vector<double>>(j, "domain");
  if (domain.size() != 2) throw Error(Errc::parse_error, "curve domain needs two values");
  if (j.contains("degree") && detail::get<int>(j, "degree") + 1 != static_cast<int>(coef.size()))
    throw Error(Errc::parse_error, "curve degree disagrees with its coefficient count");
  return CpuPowerCurve(decode_operating_point(detail::get<Json>(j, "operating_point")), coef, domain[0], domain[1],
                       detail::get_opt<double>(j, "fit_error").value_or(0.0));
}

inline Json encode(const EnvelopeCurve& e) {
  Json pts = Json::array();
  for (const auto& p : e.breakpoints) pts.push_back({{"rho", p.rho}, {"value", p.value}, {"source", encode(p.source)}});
  return {{"kind", to_string(e.kind)}, {"breakpoints", pts}, {"warnings", e.warnings}};
}

inline EnvelopeCurve decode_envelope(const Json& j) {
  EnvelopeCurve e;
  const auto kind = detail::get<std::string>(j, "kind");
  if (kind == "minimal_power")
    e.kind = EnvelopeKind::minimal_power;
  else if (kind == "maximal_efficiency")
    e.kind = EnvelopeKind::maximal_efficiency;
  else
    throw Error(Errc::parse_error, "unknown envelope kind `" + kind + "`");
  for (const auto& p : detail::get<Json>(j, "breakpoints"))
    e.breakpoints.push_back({detail::get<double>(p, "rho"), detail::get<double>(p, "value"),
                             decode_operating_point(detail::get<Json>(p, "source"))});
  for (std::size_t i = 1; i < e.breakpoints.size(); ++i)
    if (!(e.breakpoints[i].rho > e.breakpoints[i - 1].rho))
      throw Error(Errc::parse_error, "envelope breakpoints are not strictly increasing");
  e.warnings = detail::get_opt<std::vector<std::string>>(j, "warnings").value_or(std::vector<std::string>{});
  return e;
}

inline Json encode(const DiskModel& m) {
  Json entries = Json::array();
  for (const auto& [k, e] : m.entries)
    entries.push_back({{"frequency", k.frequency},
                       {"block_size", k.block_size},
                       {"direction", to_string(k.direction)},
                       {"efficiency", e.efficiency},
                       {"mean_power", e.mean_power}});
  return {{"entries", entries}};
}

inline DiskModel decode_disk_model(const Json& j) {
  DiskModel m;
  for (const auto& e : detail::get<Json>(j, "entries")) {
    const DiskKey k{detail::get<double>(e, "frequency"), detail::get<double>(e, "block_size"),
                    detail::disk_direction(detail::get<std::string>(e, "direction"))};
    const DiskEntry v{detail::get<double>(e, "efficiency"), detail::get<double>(e, "mean_power")};
    if (!(v.efficiency > 0.0)) throw Error(Errc::parse_error, "disk efficiency must be positive");
    m.entries[k] = v;
  }
  return m;
}

inline Json encode(const NetworkModel& m) {
  Json entries = Json::array();
  for (const auto& [k, e] : m.entries)
    entries.push_back({{"frequency", k.frequency},
                       {"packet_size", k.packet_size},
                       {"direction", to_string(k.direction)},
                       {"beta1", e.beta1},
                       {"beta2", e.beta2},
                       {"rate_min", e.rate_min},
                       {"rate_max", e.rate_max}});
  return {{"entries", entries}};
}

inline NetworkModel decode_network_model(const Json& j) {
  NetworkModel m;
  for (const auto& e : detail::get<Json>(j, "entries")) {
    const NetKey k{detail::get<double>(e, "frequency"), detail::get<double>(e, "packet_size"),
                   detail::net_direction(detail::get<std::string>(e, "direction"))};
    m.entries[k] = {detail::get<double>(e, "beta1"), detail::get<double>(e, "beta2"),
                    detail::get<double>(e, "rate_min"), detail::get<double>(e, "rate_max")};
  }
  return m;
}

// ---------------------------------------------------------------------------
// Server profile

inline Json encode(const ServerProfile& p) {
  Json j = detail::document("server_profile");
  j["units"] = {
      {"power", "W"},
      {"load", "active cycles per second"},
      {"frequency", "Hz"},
      {"disk_efficiency", "bytes per joule"},
      {"network_efficiency", "eta = beta1*R + beta2*R^2 in bit/J with R in bit/s; beta1 in W^-1, beta2 in W^-1 bps^-1"},
      {"network_energy", "E = 8 * volume_bytes / eta"},
  };
  j["name"] = p.name;
  j["frequencies"] = p.frequencies;
  j["max_cores"] = p.max_cores;
  j["baseline"] = p.baseline;
  j["baseline_spread"] = p.baseline_spread;
  Json curves = Json::array();
  for (const auto& c : p.cpu_curves) curves.push_back(encode(c));
  j["cpu_curves"] = curves;
  j["disk"] = encode(p.disk);
  j["network"] = encode(p.network);
  Json env = Json::object();
  if (p.min_power_envelope) env["minimal_power"] = encode(*p.min_power_envelope);
  if (p.max_efficiency_envelope) env["maximal_efficiency"] = encode(*p.max_efficiency_envelope);
  j["envelopes"] = env;
  return j;
}

inline ServerProfile decode_profile(const Json& j) {
  detail::check_document(j, "server_profile");
  ServerProfile p;
  p.schema_version = detail::get<int>(j, "schema_version");
  p.name = detail::get<std::string>(j, "name");
  p.frequencies = detail::get<std::vector<double>>(j, "frequencies");
  p.max_cores = detail::get<int>(j, "max_cores");
  p.baseline = detail::get<double>(j, "baseline");
  p.baseline_spread = detail::get<double>(j, "baseline_spread");
  for (const auto& c : detail::get<Json>(j, "cpu_curves")) p.cpu_curves.push_back(decode_curve(c));
  if (j.contains("disk")) p.disk = decode_disk_model(j.at("disk"));
  if (j.contains("network")) p.network = decode_network_model(j.at("network"));
  if (j.contains("envelopes")) {
    const auto& env = j.at("envelopes");
    if (env.contains("minimal_power")) p.min_power_envelope = decode_envelope(env.at("minimal_power"));
    if (env.contains("maximal_efficiency")) p.max_efficiency_envelope = decode_envelope(env.at("maximal_efficiency"));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Sweep plans and datasets

inline Json encode(const SweepPlan& plan) {
  Json j = detail::document("sweep_plan");
  j["sweep"] = to_string(plan.kind);
  j["slot_length"] = plan.slot_length;
  Json slots = Json::array();
  for (const auto& s : plan.slots) {
    Json params = std::visit(
        [](const auto& p) -> Json {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, CpuSlot>) {
            return {{"type", "cpu"}, {"operating_point", encode(p.op)}, {"load_fraction", p.load_fraction}};
          } else if constexpr (std::is_same_v<P, DiskSlot>) {
            return {{"type", "disk"},         {"operating_point", encode(p.op)}, {"block_size", p.block_size},
                    {"volume", p.volume},     {"direction", to_string(p.direction)},
                    {"flush_before", p.flush_before}, {"sync_each_block", p.sync_each_block}};
          } else {
            return {{"type", "net"},           {"operating_point", encode(p.op)}, {"packet_size", p.packet_size},
                    {"rate", p.rate},          {"direction", to_string(p.direction)},
                    {"repetitions", p.repetitions}};
          }
        },
        s.params);
    slots.push_back({{"start", s.slot.start}, {"end", s.slot.end}, {"label", s.slot.label}, {"params", params}});
  }
  j["slots"] = slots;
  return j;
}

inline SweepPlan decode_plan(const Json& j) {
  detail::check_document(j, "sweep_plan");
  SweepPlan plan;
  const auto kind = detail::get<std::string>(j, "sweep");
  const SweepKind kinds[] = {SweepKind::cpu, SweepKind::disk_read, SweepKind::disk_write, SweepKind::net_send,
                             SweepKind::net_recv};
  bool found = false;
  for (auto k : kinds)
    if (to_string(k) == kind) {
      plan.kind = k;
      found = true;
    }
  if (!found) throw Error(Errc::parse_error, "unknown sweep kind `" + kind + "`");
  plan.slot_length = detail::get<double>(j, "slot_length");
  for (const auto& s : detail::get<Json>(j, "slots")) {
    const Timeslot slot{detail::get<double>(s, "start"), detail::get<double>(s, "end"),
                        detail::get<std::string>(s, "label")};
    const auto& p = detail::get<Json>(s, "params");
    const auto type = detail::get<std::string>(p, "type");
    const auto op = decode_operating_point(detail::get<Json>(p, "operating_point"));
    if (type == "cpu") {
      plan.slots.push_back({slot, CpuSlot{op, detail::get<double>(p, "load_fraction")}});
    } else if (type == "disk") {
      plan.slots.push_back(
          {slot, DiskSlot{op, detail::get<double>(p, "block_size"), detail::get<double>(p, "volume"),
                          detail::disk_direction(detail::get<std::string>(p, "direction")),
                          detail::get<bool>(p, "flush_before"), detail::get<bool>(p, "sync_each_block")}});
    } else if (type == "net") {
      plan.slots.push_back({slot, NetSlot{op, detail::get<double>(p, "packet_size"), detail::get<double>(p, "rate"),
                                          detail::net_direction(detail::get<std::string>(p, "direction")),
                                          detail::get<int>(p, "repetitions")}});
    } else {
      throw Error(Errc::parse_error, "unknown slot type `" + type + "`");
    }
  }
  return plan;
}

inline Json encode(const CalibrationDataset& d) {
  Json j = detail::document("calibration_dataset");
  j["host"] = d.host;
  Json cpu = Json::array();
  for (const auto& o : d.cpu)
    cpu.push_back({{"label", o.label},
                   {"operating_point", encode(o.sample.op)},
                   {"rho", o.sample.rho},
                   {"power", o.sample.power},
                   {"stddev", o.sample.stddev},
                   {"load_fraction", o.load_fraction},
                   {"samples", o.samples}});
  Json disk = Json::array();
  for (const auto& o : d.disk)
    disk.push_back({{"label", o.label},
                    {"operating_point", encode(o.op)},
                    {"direction", to_string(o.direction)},
                    {"block_size", o.block_size},
                    {"volume", o.volume},
                    {"duration", o.duration},
                    {"rho", o.rho},
                    {"power", o.power},
                    {"stddev", o.stddev}});
  Json net = Json::array();
  for (const auto& o : d.net)
    net.push_back({{"label", o.label},
                   {"operating_point", encode(o.op)},
                   {"direction", to_string(o.direction)},
                   {"packet_size", o.packet_size},
                   {"rate", o.rate},
                   {"duration", o.duration},
                   {"rho", o.rho},
                   {"power", o.power},
                   {"stddev", o.stddev},
                   {"repetitions", o.repetitions}});
  Json failures = Json::array();
  for (const auto& f : d.failures) failures.push_back({{"label", f.label}, {"reason", f.reason}});
  j["cpu"] = cpu;
  j["disk"] = disk;
  j["net"] = net;
  j["failures"] = failures;
  j["warnings"] = d.warnings;
  return j;
}

inline CalibrationDataset decode_dataset(const Json& j) {
  detail::check_document(j, "calibration_dataset");
  CalibrationDataset d;
  d.host = detail::get<std::string>(j, "host");
  using detail::get;
  for (const auto& o : get<Json>(j, "cpu"))
    d.cpu.push_back({get<std::string>(o, "label"),
                     {get<double>(o, "rho"), get<double>(o, "power"), decode_operating_point(get<Json>(o, "operating_point")),
                      get<double>(o, "stddev")},
                     get<double>(o, "load_fraction"),
                     get<std::size_t>(o, "samples")});
  for (const auto& o : get<Json>(j, "disk"))
    d.disk.push_back({get<std::string>(o, "label"), decode_operating_point(get<Json>(o, "operating_point")),
                      detail::disk_direction(get<std::string>(o, "direction")), get<double>(o, "block_size"),
                      get<double>(o, "volume"), get<double>(o, "duration"), get<double>(o, "rho"),
                      get<double>(o, "power"), get<double>(o, "stddev")});
  for (const auto& o : get<Json>(j, "net"))
    d.net.push_back({get<std::string>(o, "label"), decode_operating_point(get<Json>(o, "operating_point")),
                     detail::net_direction(get<std::string>(o, "direction")), get<double>(o, "packet_size"),
                     get<double>(o, "rate"), get<double>(o, "duration"), get<double>(o, "rho"), get<double>(o, "power"),
                     get<double>(o, "stddev"), get<int>(o, "repetitions")});
  for (const auto& f : get<Json>(j, "failures"))
    d.failures.push_back({get<std::string>(f, "label"), get<std::string>(f, "reason")});
  d.warnings = detail::get_opt<std::vector<std::string>>(j, "warnings").value_or(std::vector<std::string>{});
  return d;
}

// ---------------------------------------------------------------------------
// Ground truth

inline Json encode(const GroundTruth& t) {
  Json j = detail::document("ground_truth");
  j["name"] = t.name;
  j["baseline"] = t.baseline;
  j["noise_sigma"] = t.noise_sigma;
  j["max_cores"] = t.max_cores;
  j["frequencies"] = t.frequencies;
  Json cpu = Json::array();
  for (const auto& c : t.cpu) cpu.push_back({{"operating_point", encode(c.op)}, {"coefficients", c.coefficients}});
  Json disk = Json::array();
  for (const auto& d : t.disk)
    disk.push_back({{"frequency", d.frequency},
                    {"block_size", d.block_size},
                    {"direction", to_string(d.direction)},
                    {"watts", d.watts},
                    {"throughput", d.throughput}});
  Json net = Json::array();
  for (const auto& n : t.net)
    net.push_back({{"frequency", n.frequency},
                   {"packet_size", n.packet_size},
                   {"direction", to_string(n.direction)},
                   {"watts", n.watts},
                   {"cycles_per_packet", n.cycles_per_packet},
                   {"cycles_per_byte", n.cycles_per_byte}});
  j["cpu_poly"] = cpu;
  j["disk_power"] = disk;
  j["net_power"] = net;
  j["disk_read_ticks"] = {{"active", t.disk_read_ticks.active}, {"iowait", t.disk_read_ticks.iowait}};
  j["disk_write_ticks"] = {{"active", t.disk_write_ticks.active}, {"iowait", t.disk_write_ticks.iowait}};
  j["os_floor_ticks"] = t.os_floor_ticks;
  j["ramp_seconds"] = t.ramp_seconds;
  j["network_limits"] = {{"line_rate", t.limits.line_rate},
                         {"frame_overhead", t.limits.frame_overhead},
                         {"max_packet_rate", t.limits.max_packet_rate}};
  return j;
}

inline GroundTruth decode_truth(const Json& j) {
  detail::check_document(j, "ground_truth");
  using detail::get;
  GroundTruth t;
  t.name = get<std::string>(j, "name");
  t.baseline = get<double>(j, "baseline");
  t.noise_sigma = get<double>(j, "noise_sigma");
  t.max_cores = get<int>(j, "max_cores");
  t.frequencies = get<std::vector<double>>(j, "frequencies");
  for (const auto& c : get<Json>(j, "cpu_poly"))
    t.cpu.push_back({decode_operating_point(get<Json>(c, "operating_point")), get<std::vector<double>>(c, "coefficients")});
  for (const auto& d : get<Json>(j, "disk_power"))
    t.disk.push_back({get<double>(d, "frequency"), get<double>(d, "block_size"),
                      detail::disk_direction(get<std::string>(d, "direction")), get<double>(d, "watts"),
                      get<double>(d, "throughput")});
  for (const auto& n : get<Json>(j, "net_power"))
    t.net.push_back({get<double>(n, "frequency"), get<double>(n, "packet_size"),
                     detail::net_direction(get<std::string>(n, "direction")), get<double>(n, "watts"),
                     get<double>(n, "cycles_per_packet"), get<double>(n, "cycles_per_byte")});
  auto ticks = [&](const char* key, TickCost def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    return TickCost{get<std::uint64_t>(v, "active"), get<std::uint64_t>(v, "iowait")};
  };
  t.disk_read_ticks = ticks("disk_read_ticks", t.disk_read_ticks);
  t.disk_write_ticks = ticks("disk_write_ticks", t.disk_write_ticks);
  t.os_floor_ticks = detail::get_opt<std::uint64_t>(j, "os_floor_ticks").value_or(t.os_floor_ticks);
  t.ramp_seconds = detail::get_opt<int>(j, "ramp_seconds").value_or(t.ramp_seconds);
  if (j.contains("network_limits")) {
    const auto& l = j.at("network_limits");
    t.limits = {get<double>(l, "line_rate"), get<double>(l, "frame_overhead"), get<double>(l, "max_packet_rate")};
  }
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------
// Traces and estimates

inline Json encode_volume(const std::optional<Bytes>& v) { return v ? Json(*v) : Json("auto"); }

inline std::optional<Bytes> decode_volume(const Json& j, const char* key) {
  if (!j.contains(key)) return 0.0;
  const auto& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  return detail::get<double>(j, key);
}

inline Json encode(const ActivityTrace& t) {
  Json j = detail::document("activity_trace");
  Json phases = Json::array();
  for (const auto& p : t.phases)
    phases.push_back({{"name", p.name},
                      {"active_cycles", p.active_cycles},
                      {"duration", detail::opt(p.duration)},
                      {"rho", detail::opt(p.rho)},
                      {"disk_read_volume", p.disk_read},
                      {"disk_write_volume", p.disk_write},
                      {"net_send_volume", encode_volume(p.net_send)},
                      {"net_recv_volume", encode_volume(p.net_recv)},
                      {"net_rate", p.net_rate},
                      {"packet_size", p.packet_size},
                      {"block_size", p.block_size},
                      {"operating_point", encode(p.op)}});
  j["phases"] = phases;
  return j;
}

inline ActivityTrace decode_trace(const Json& j) {
  detail::check_document(j, "activity_trace");
  using detail::get;
  ActivityTrace t;
  for (const auto& p : get<Json>(j, "phases")) {
    Phase ph;
    ph.name = get<std::string>(p, "name");
    ph.active_cycles = get<double>(p, "active_cycles");
    ph.duration = detail::get_opt<double>(p, "duration");
    ph.rho = detail::get_opt<double>(p, "rho");
    ph.disk_read = detail::get_opt<double>(p, "disk_read_volume").value_or(0.0);
    ph.disk_write = detail::get_opt<double>(p, "disk_write_volume").value_or(0.0);
    ph.net_send = decode_volume(p, "net_send_volume");
    ph.net_recv = decode_volume(p, "net_recv_volume");
    ph.net_rate = detail::get_opt<double>(p, "net_rate").value_or(0.0);
    ph.packet_size = detail::get_opt<double>(p, "packet_size").value_or(0.0);
    ph.block_size = detail::get_opt<double>(p, "block_size").value_or(0.0);
    ph.op = decode_operating_point(get<Json>(p, "operating_point"));
    t.phases.push_back(std::move(ph));
  }
  return t;
}

inline Json encode(const PhaseEnergy& p) {
  return {{"name", p.name},
          {"duration", p.duration},
          {"rho", p.rho},
          {"e_baseline_cpu", p.e_baseline_cpu},
          {"e_disk", p.e_disk},
          {"e_network", p.e_network},
          {"e_total", p.e_total}};
}

inline Json encode(const EnergyEstimate& e) {
  Json j = detail::document("energy_estimate");
  j["e_baseline_cpu"] = e.e_baseline_cpu;
  j["e_disk"] = e.e_disk;
  j["e_network"] = e.e_network;
  j["e_total"] = e.e_total;
  j["duration"] = e.duration;
  Json phases = Json::array();
  for (const auto& p : e.per_phase) phases.push_back(encode(p));
  j["per_phase"] = phases;
  return j;
}

inline EnergyEstimate decode_estimate(const Json& j) {
  detail::check_document(j, "energy_estimate");
  using detail::get;
  EnergyEstimate e;
  e.e_baseline_cpu = get<double>(j, "e_baseline_cpu");
  e.e_disk = get<double>(j, "e_disk");
  e.e_network = get<double>(j, "e_network");
  e.e_total = get<double>(j, "e_total");
  e.duration = get<double>(j, "duration");
  for (const auto& p : get<Json>(j, "per_phase"))
    e.per_phase.push_back({get<std::string>(p, "name"), get<double>(p, "duration"), get<double>(p, "rho"),
                           get<double>(p, "e_baseline_cpu"), get<double>(p, "e_disk"), get<double>(p, "e_network"),
                           get<double>(p, "e_total")});
  return e;
}

// ---------------------------------------------------------------------------
// Text and files

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot open `" + path + "`");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write `" + path + "`");
  out << content;
  if (!out) throw Error(Errc::invalid_argument, "failed writing `" + path + "`");
}

inline Json load(const std::string& path) { return parse(read_file(path)); }
inline void save(const std::string& path, const Json& j) { write_file(path, dump(j)); }

}  // namespace powercal::json
