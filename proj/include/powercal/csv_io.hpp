#pragma once

// Flat CSV formats: calibration datasets, activity traces, estimates, envelopes
// and fit reports. Numbers are written in shortest round-trip form.

#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "powercal/error.hpp"
#include "powercal/fitting.hpp"
#include "powercal/text.hpp"
#include "powercal/types.hpp"
#include "powercal/workloads.hpp"

namespace powercal::csv {

using text::format_double;

namespace detail {

/// `kind:key=value:key=value` into the kind and a key map.
inline std::pair<std::string, std::map<std::string, std::string>> split_label(std::string_view label) {
  const auto parts = text::split(label, ':');
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string_view::npos) continue;
    kv.emplace(std::string(parts[i].substr(0, eq)), std::string(parts[i].substr(eq + 1)));
  }
  return {std::string(parts.front()), kv};
}

inline double number(const std::map<std::string, std::string>& kv, const char* key, std::size_t line) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(line, std::string("label lacks `") + key + "=`");
  const auto v = text::parse_double(it->second);
  if (!v) throw ParseError(line, std::string("bad value for `") + key + "`");
  return *v;
}

/// Drops trailing `:key=value` parts that are not part of the slot label.
inline std::string strip_keys(std::string_view label, std::initializer_list<std::string_view> keys) {
  std::string out(label);
  for (;;) {
    const auto pos = out.rfind(':');
    if (pos == std::string::npos) return out;
    const std::string_view tail(out.data() + pos + 1, out.size() - pos - 1);
    bool hit = false;
    for (auto k : keys)
      if (tail.substr(0, k.size()) == k && tail.size() > k.size() && tail[k.size()] == '=') hit = true;
    if (!hit) return out;
    out.resize(pos);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Calibration dataset

inline constexpr std::string_view kDatasetHeader = "label,cores,freq_hz,rho_acps,power_w,stddev_w";

inline void write_dataset(std::ostream& out, const CalibrationDataset& d) {
  out << "# schema_version: " << d.schema_version << '\n';
  out << "# host: " << d.host << '\n';
  out << kDatasetHeader << '\n';
  auto row = [&](const std::string& label, const OperatingPoint& op, double rho, double p, double sd) {
    out << label << ',' << op.cores << ',' << format_double(op.frequency) << ',' << format_double(rho) << ','
        << format_double(p) << ',' << format_double(sd) << '\n';
  };
  for (const auto& o : d.cpu)
    row(o.label + ":n=" + std::to_string(o.samples), o.sample.op, o.sample.rho, o.sample.power, o.sample.stddev);
  for (const auto& o : d.disk)
    row(o.label + ":bytes=" + format_double(o.volume) + ":T=" + format_double(o.duration), o.op, o.rho, o.power,
        o.stddev);
  for (const auto& o : d.net)
    row(o.label + ":T=" + format_double(o.duration) + ":reps=" + std::to_string(o.repetitions), o.op, o.rho, o.power,
        o.stddev);
  for (const auto& f : d.failures) out << "# failed: " << f.label << "; " << f.reason << '\n';
  for (const auto& w : d.warnings) out << "# warning: " << w << '\n';
}

inline CalibrationDataset read_dataset(std::istream& in) {
  CalibrationDataset d;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const auto c = text::trim(body.substr(1));
      auto starts = [&](std::string_view p) { return c.substr(0, p.size()) == p; };
      if (starts("schema_version:")) {
        const auto v = text::parse_int(c.substr(15));
        if (!v) throw ParseError(lineno, "bad schema_version");
        if (*v != kSchemaVersion)
          throw ParseError(Errc::schema_version, lineno, "schema_version " + std::to_string(*v) + " is not supported");
      } else if (starts("host:")) {
        d.host = std::string(text::trim(c.substr(5)));
      } else if (starts("failed:")) {
        const auto rest = text::trim(c.substr(7));
        const auto semi = rest.find(';');
        d.failures.push_back({std::string(text::trim(rest.substr(0, semi))),
                              semi == std::string_view::npos ? "" : std::string(text::trim(rest.substr(semi + 1)))});
      } else if (starts("warning:")) {
        d.warnings.emplace_back(text::trim(c.substr(8)));
      }
      continue;
    }
    if (!header) {
      if (body != kDatasetHeader) throw ParseError(lineno, "expected header `" + std::string(kDatasetHeader) + "`");
      header = true;
      continue;
    }
    const auto f = text::split(body, ',');
    if (f.size() != 6) throw ParseError(lineno, "expected 6 columns");
    const auto cores = text::parse_int(f[1]);
    const auto freq = text::parse_double(f[2]);
    const auto rho = text::parse_double(f[3]);
    const auto power = text::parse_double(f[4]);
    const auto sd = text::parse_double(f[5]);
    if (!cores || !freq || !rho || !power || !sd) throw ParseError(lineno, "bad numeric column");
    const OperatingPoint op{static_cast<int>(*cores), *freq};
    const auto [kind, kv] = detail::split_label(f[0]);
    if (kind == "cpu") {
      const auto n = kv.count("n") ? text::parse_int(kv.at("n")) : std::optional<long long>(0);
      if (!n) throw ParseError(lineno, "bad sample count");
      d.cpu.push_back({detail::strip_keys(f[0], {"n"}), {*rho, *power, op, *sd}, detail::number(kv, "load", lineno),
                       static_cast<std::size_t>(*n)});
    } else if (kind == "disk_read" || kind == "disk_write") {
      d.disk.push_back({detail::strip_keys(f[0], {"bytes", "T"}), op,
                        kind == "disk_read" ? DiskDirection::read : DiskDirection::write,
                        detail::number(kv, "B", lineno), detail::number(kv, "bytes", lineno),
                        detail::number(kv, "T", lineno), *rho, *power, *sd});
    } else if (kind == "net_send" || kind == "net_recv") {
      const auto reps = kv.count("reps") ? text::parse_int(kv.at("reps")) : std::optional<long long>(1);
      if (!reps) throw ParseError(lineno, "bad repetition count");
      d.net.push_back({detail::strip_keys(f[0], {"T", "reps"}), op,
                       kind == "net_send" ? NetDirection::send : NetDirection::receive, detail::number(kv, "S", lineno),
                       detail::number(kv, "R", lineno), detail::number(kv, "T", lineno), *rho, *power, *sd,
                       static_cast<int>(*reps)});
    } else {
      throw ParseError(lineno, "unknown observation kind `" + kind + "`");
    }
  }
  if (!header) throw ParseError(lineno, "missing header");
  return d;
}

// ---------------------------------------------------------------------------
// Activity traces

inline constexpr std::string_view kTraceHeader =
    "phase,cycles,duration_s,v_dr,v_dw,v_ns,v_nr,rate_bps,pkt_b,block_b,cores,freq_hz";

/// Columns are matched by header name; `rho_acps` is an optional extra column.
/// An empty duration is derived from cycles / rho; `auto` network volumes from R * T.
inline ActivityTrace read_trace(std::istream& in) {
  ActivityTrace t;
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, std::size_t> col;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto f = text::split(body, ',');
    if (col.empty()) {
      for (std::size_t i = 0; i < f.size(); ++i) col[std::string(text::trim(f[i]))] = i;
      for (auto name : text::split(kTraceHeader, ','))
        if (!col.count(std::string(name))) throw ParseError(lineno, "trace header lacks `" + std::string(name) + "`");
      continue;
    }
    if (f.size() != col.size()) throw ParseError(lineno, "expected " + std::to_string(col.size()) + " columns");
    auto cell = [&](const char* name) { return text::trim(f[col.at(name)]); };
    auto num = [&](const char* name) {
      const auto v = text::parse_double(cell(name));
      if (!v || !std::isfinite(*v)) throw ParseError(lineno, std::string("bad value in `") + name + "`");
      return *v;
    };
    auto volume = [&](const char* name) -> std::optional<Bytes> {
      if (cell(name) == "auto") return std::nullopt;
      const double v = num(name);
      if (v < 0.0) throw ParseError(lineno, std::string("negative volume in `") + name + "`");
      return v;
    };
    Phase p;
    p.name = std::string(cell("phase"));
    p.active_cycles = num("cycles");
    if (!cell("duration_s").empty()) p.duration = num("duration_s");
    if (col.count("rho_acps") && !cell("rho_acps").empty()) p.rho = num("rho_acps");
    p.disk_read = volume("v_dr").value_or(-1.0);
    p.disk_write = volume("v_dw").value_or(-1.0);
    if (p.disk_read < 0.0 || p.disk_write < 0.0) throw ParseError(lineno, "disk volumes cannot be `auto`");
    p.net_send = volume("v_ns");
    p.net_recv = volume("v_nr");
    p.net_rate = num("rate_bps");
    p.packet_size = num("pkt_b");
    p.block_size = num("block_b");
    const auto cores = text::parse_int(cell("cores"));
    if (!cores) throw ParseError(lineno, "bad core count");
    p.op = {static_cast<int>(*cores), num("freq_hz")};
    if (!p.duration && !p.rho) throw ParseError(lineno, "phase needs a duration or a rho_acps value");
    t.phases.push_back(std::move(p));
  }
  return t;
}

inline void write_trace(std::ostream& out, const ActivityTrace& t) {
  bool with_rho = false;
  for (const auto& p : t.phases) with_rho = with_rho || p.rho.has_value();
  out << kTraceHeader << (with_rho ? ",rho_acps" : "") << '\n';
  auto vol = [](const std::optional<Bytes>& v) { return v ? format_double(*v) : std::string("auto"); };
  for (const auto& p : t.phases) {
    out << p.name << ',' << format_double(p.active_cycles) << ',' << (p.duration ? format_double(*p.duration) : "")
        << ',' << format_double(p.disk_read) << ',' << format_double(p.disk_write) << ',' << vol(p.net_send) << ','
        << vol(p.net_recv) << ',' << format_double(p.net_rate) << ',' << format_double(p.packet_size) << ','
        << format_double(p.block_size) << ',' << p.op.cores << ',' << format_double(p.op.frequency);
    if (with_rho) out << ',' << (p.rho ? format_double(*p.rho) : "");
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Estimates

inline void write_estimate(std::ostream& out, const EnergyEstimate& e) {
  out << "phase,duration_s,rho_acps,e_baseline_cpu_j,e_disk_j,e_network_j,e_total_j\n";
  for (const auto& p : e.per_phase)
    out << p.name << ',' << format_double(p.duration) << ',' << format_double(p.rho) << ','
        << format_double(p.e_baseline_cpu) << ',' << format_double(p.e_disk) << ',' << format_double(p.e_network)
        << ',' << format_double(p.e_total) << '\n';
  out << "total," << format_double(e.duration) << ",," << format_double(e.e_baseline_cpu) << ','
      << format_double(e.e_disk) << ',' << format_double(e.e_network) << ',' << format_double(e.e_total) << '\n';
}

inline void write_estimate_text(std::ostream& out, const EnergyEstimate& e) {
  std::ostringstream os;
  os << std::fixed;
  auto row = [&](const std::string& name, double t, double bc, double d, double n, double tot) {
    os << std::left << std::setw(16) << name << std::right << std::setprecision(1) << std::setw(10) << t
       << std::setprecision(3) << std::setw(14) << bc << std::setw(12) << d << std::setw(12) << n << std::setw(14)
       << tot << '\n';
  };
  os << std::left << std::setw(16) << "phase" << std::right << std::setw(10) << "T [s]" << std::setw(14)
     << "E_B+E_C [J]" << std::setw(12) << "E_D [J]" << std::setw(12) << "E_N [J]" << std::setw(14) << "E_app [J]"
     << '\n';
  for (const auto& p : e.per_phase) row(p.name, p.duration, p.e_baseline_cpu, p.e_disk, p.e_network, p.e_total);
  row("total", e.duration, e.e_baseline_cpu, e.e_disk, e.e_network, e.e_total);
  out << os.str();
}

// ---------------------------------------------------------------------------
// Envelopes and fit reports

inline void write_envelope(std::ostream& out, const EnvelopeCurve& env) {
  out << (env.kind == EnvelopeKind::minimal_power ? "rho,p_min_w,src_cores,src_freq\n"
                                                  : "rho,eta_max_acps_per_j,src_cores,src_freq\n");
  for (const auto& p : env.breakpoints)
    out << format_double(p.rho) << ',' << format_double(p.value) << ',' << p.source.cores << ','
        << format_double(p.source.frequency) << '\n';
}

inline void write_fit_reports(std::ostream& out, const std::vector<FitReport>& reports) {
  out << "label,degree,points,residual_rms,max_abs_residual,condition\n";
  for (const auto& r : reports) {
    double worst = 0.0;
    for (double v : r.residuals) worst = std::max(worst, std::abs(v));
    out << r.label << ',' << r.degree << ',' << r.points << ',' << format_double(r.residual_rms) << ','
        << format_double(worst) << ',' << format_double(r.condition) << '\n';
  }
}

}  // namespace powercal::csv
