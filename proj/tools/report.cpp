#include <filesystem>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"

namespace powercal::cli {

namespace {

using text::format_double;

struct Manifest {
  std::ostringstream body;

  void add(const std::string& file, const std::string& columns, const std::string& meaning) {
    body << file << '\n' << "  columns: " << columns << '\n' << "  " << meaning << '\n';
  }
};

void curves(const ServerProfile& p, const std::filesystem::path& dir, Manifest& m) {
  std::ostringstream coef;
  coef << "cores,freq_hz,degree,rho_min,rho_max,fit_error";
  for (int k = 0; k <= kMaxCpuDegree; ++k) coef << ",alpha_" << k;
  coef << '\n';
  std::ostringstream sampled;
  sampled << "cores,freq_hz,rho,power_w\n";
  for (const auto& c : p.cpu_curves) {
    coef << c.op().cores << ',' << format_double(c.op().frequency) << ',' << c.degree() << ','
         << format_double(c.rho_min()) << ',' << format_double(c.rho_max()) << ',' << format_double(c.fit_error());
    for (int k = 0; k <= kMaxCpuDegree; ++k)
      coef << ',' << (k <= c.degree() ? format_double(c.coefficients()[static_cast<std::size_t>(k)]) : "");
    coef << '\n';
    for (int i = 0; i <= 32; ++i) {
      const Acps rho = c.rho_min() + (c.rho_max() - c.rho_min()) * i / 32.0;
      sampled << c.op().cores << ',' << format_double(c.op().frequency) << ',' << format_double(rho) << ','
              << format_double(c(rho)) << '\n';
    }
  }
  write_text((dir / "cpu_curves.csv").string(), coef.str());
  write_text((dir / "cpu_curves_sampled.csv").string(), sampled.str());
  m.add("cpu_curves.csv", "cores,freq_hz,degree,rho_min,rho_max,fit_error,alpha_0..alpha_7",
        "P(rho) = sum alpha_k rho^k in W with rho in active cycles per second; unused orders are empty");
  m.add("cpu_curves_sampled.csv", "cores,freq_hz,rho,power_w", "each curve evaluated at 33 evenly spaced loads");
}

void envelopes(const ServerProfile& p, const std::filesystem::path& dir, Manifest& m) {
  if (!p.min_power_envelope || !p.max_efficiency_envelope)
    throw Error(Errc::missing_artifact, "profile `" + p.name + "` carries no envelopes");
  std::ostringstream a, b;
  csv::write_envelope(a, *p.min_power_envelope);
  csv::write_envelope(b, *p.max_efficiency_envelope);
  write_text((dir / "min_power_envelope.csv").string(), a.str());
  write_text((dir / "max_efficiency_envelope.csv").string(), b.str());
  m.add("min_power_envelope.csv", "rho,p_min_w,src_cores,src_freq",
        "lowest power over all operating points at each load, with the winning operating point");
  m.add("max_efficiency_envelope.csv", "rho,eta_max_acps_per_j,src_cores,src_freq",
        "highest rho / (P(rho) - alpha_0) over all operating points at each load");
}

void efficiency(const ServerProfile& p, const std::filesystem::path& dir, Manifest& m) {
  std::ostringstream cpu;
  cpu << "cores,freq_hz,rho,eta_acps_per_j\n";
  for (const auto& c : p.cpu_curves)
    for (int i = 0; i <= 32; ++i) {
      const Acps rho = c.rho_min() + (c.rho_max() - c.rho_min()) * i / 32.0;
      if (!(rho > 0.0) || !(c(rho) > c.baseline())) continue;
      cpu << c.op().cores << ',' << format_double(c.op().frequency) << ',' << format_double(rho) << ','
          << format_double(cpu_efficiency(c, rho)) << '\n';
    }
  write_text((dir / "cpu_efficiency.csv").string(), cpu.str());
  m.add("cpu_efficiency.csv", "cores,freq_hz,rho,eta_acps_per_j",
        "rho / (P(rho) - alpha_0) per curve; loads where P(rho) <= alpha_0 are omitted");

  if (!p.disk.empty()) {
    std::ostringstream disk;
    disk << "direction,freq_hz,block_b,efficiency_mb_per_j,mean_power_w\n";
    for (const auto& [k, e] : p.disk.entries)
      disk << to_string(k.direction) << ',' << format_double(k.frequency) << ',' << format_double(k.block_size)
           << ',' << format_double(units::to_mb_per_joule(e.efficiency)) << ',' << format_double(e.mean_power)
           << '\n';
    write_text((dir / "disk_efficiency.csv").string(), disk.str());
    m.add("disk_efficiency.csv", "direction,freq_hz,block_b,efficiency_mb_per_j,mean_power_w",
          "bytes moved per joule of isolated disk energy, in decimal MB/J");
  }
  if (!p.network.empty()) {
    std::ostringstream net;
    net << "direction,freq_hz,pkt_b,beta1_per_w,beta2_per_w_mbps,rate_min_mbps,rate_max_mbps\n";
    for (const auto& [k, e] : p.network.entries)
      net << to_string(k.direction) << ',' << format_double(k.frequency) << ',' << format_double(k.packet_size)
          << ',' << format_double(e.beta1) << ',' << format_double(e.beta2 / reference::beta2_published_to_si) << ','
          << format_double(units::to_mbps(e.rate_min)) << ',' << format_double(units::to_mbps(e.rate_max)) << '\n';
    write_text((dir / "network_efficiency.csv").string(), net.str());
    m.add("network_efficiency.csv", "direction,freq_hz,pkt_b,beta1_per_w,beta2_per_w_mbps,rate_min_mbps,rate_max_mbps",
          "eta = beta1 R + beta2 R^2 in Mbit/J with R in Mbps (published-table units)");
  }
}

}  // namespace

int run_report(const ReportArgs& a) {
  const auto profile = load_profile(a.profile);
  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  Manifest m;
  const bool all = a.what == "all";
  if (all || a.what == "curves") curves(profile, dir, m);
  if (all || a.what == "envelopes") envelopes(profile, dir, m);
  if (all || a.what == "efficiency") efficiency(profile, dir, m);
  write_text((dir / "manifest.txt").string(), "profile: " + profile.name + "\n" + m.body.str());
  std::cout << "wrote " << a.what << " report for `" << profile.name << "` to " << dir.string() << '\n';
  return kOk;
}

}  // namespace powercal::cli
