#pragma once

// Independent reference computations used by the tests. Nothing here calls into
// the fitting code: the least-squares oracle is plain Gaussian elimination on
// the normal equations in long double.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "powercal/powercal.hpp"

namespace oracle {

using Poly = std::vector<long double>;

inline long double horner(const Poly& c, long double x) {
  long double acc = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<long double> solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0L) throw std::runtime_error("singular normal equations");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Least-squares polynomial coefficients (raw rho basis) via normal equations on
/// x = rho / scale. Columns listed in `powers`, so zero-intercept models work too.
inline std::vector<long double> normal_equations(std::span<const double> xs, std::span<const double> ys,
                                                 const std::vector<int>& powers) {
  long double scale = 0.0L;
  for (double x : xs) scale = std::max<long double>(scale, std::fabs(x));
  const std::size_t p = powers.size();
  std::vector<std::vector<long double>> ata(p, std::vector<long double>(p, 0.0L));
  std::vector<long double> aty(p, 0.0L);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long double x = xs[i] / scale;
    for (std::size_t r = 0; r < p; ++r) {
      const long double xr = std::pow(x, powers[r]);
      aty[r] += xr * ys[i];
      for (std::size_t c = 0; c < p; ++c) ata[r][c] += xr * std::pow(x, powers[c]);
    }
  }
  auto sol = solve(ata, aty);
  for (std::size_t r = 0; r < p; ++r) sol[r] /= std::pow(scale, powers[r]);
  return sol;
}

inline std::vector<long double> poly_fit(std::span<const powercal::LoadSample> samples, int degree) {
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    xs.push_back(s.rho);
    ys.push_back(s.power);
  }
  std::vector<int> powers;
  for (int k = 0; k <= degree; ++k) powers.push_back(k);
  return normal_equations(xs, ys, powers);
}

/// Coefficient agreement measured in the normalized basis: each alpha_k is scaled
/// by rho_max^k and compared against the largest scaled oracle coefficient.
inline double scaled_coefficient_error(const std::vector<double>& got, const std::vector<long double>& want,
                                       double rho_max) {
  long double norm = 0.0L;
  for (std::size_t k = 0; k < want.size(); ++k) norm = std::max(norm, std::fabs(want[k] * std::pow(rho_max, k)));
  long double worst = 0.0L;
  for (std::size_t k = 0; k < want.size(); ++k)
    worst = std::max(worst, std::fabs((got[k] - want[k]) * std::pow(rho_max, k)) / norm);
  return static_cast<double>(worst);
}

inline double rel_err(double got, double want) {
  if (want == 0.0) return std::fabs(got);
  return std::fabs(got - want) / std::fabs(want);
}

/// Real roots of a x^2 + b x + c in [lo, hi], computed with the stable quadratic formula.
inline std::vector<double> quadratic_roots(double a, double b, double c, double lo, double hi) {
  std::vector<double> out;
  if (a == 0.0) {
    if (b != 0.0) out.push_back(-c / b);
  } else {
    const double disc = b * b - 4 * a * c;
    if (disc < 0.0) return out;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    out.push_back(q / a);
    if (q != 0.0) out.push_back(c / q);
  }
  std::erase_if(out, [&](double r) { return r < lo || r > hi; });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle

namespace fixtures {

/// The calibration grid the CLI uses for `calibrate all`, run against `truth`.
inline powercal::CalibrationDataset calibrate_everything(const powercal::GroundTruth& truth, std::uint64_t seed,
                                                         int repetitions, double trim = 5.0) {
  using namespace powercal;
  SimHost host(truth, seed);
  const auto& freqs = truth.frequencies;
  CalibrationDataset data;
  data.host = host.describe();
  const ExecuteOptions opt{trim, repetitions};
  const auto ladder = default_load_ladder();
  data.merge(execute_sweep(plan_cpu_sweep(freqs, truth.max_cores, ladder), host, opt));
  const DiskSweepOptions disk{30.0, truth.max_cores};
  for (auto dir : {DiskDirection::read, DiskDirection::write})
    data.merge(execute_sweep(plan_disk_sweep(freqs, sim_defaults::block_sizes(), 256 * units::mib, dir, disk), host,
                             opt));
  NetSweepOptions net;
  net.cores = truth.max_cores;
  net.limits = truth.limits;
  for (auto dir : {NetDirection::send, NetDirection::receive})
    for (Bytes s : sim_defaults::packet_sizes()) {
      const std::vector<Bytes> sizes{s};
      data.merge(execute_sweep(plan_net_sweep(freqs, sizes, sim_defaults::rates_for(s), dir, net), host, opt));
    }
  return data;
}

inline powercal::CalibrationDataset calibrate_cpu(const powercal::GroundTruth& truth, std::uint64_t seed,
                                                  int repetitions) {
  using namespace powercal;
  SimHost host(truth, seed);
  const auto ladder = default_load_ladder();
  return execute_sweep(plan_cpu_sweep(truth.frequencies, truth.max_cores, ladder), host, {5.0, repetitions});
}

/// Two-frequency, two-core truth that is small enough for hand reasoning.
inline powercal::GroundTruth tiny_truth(double sigma = 0.0, double baseline = 50.0) {
  using namespace powercal;
  GroundTruth t;
  t.name = "tiny";
  t.baseline = baseline;
  t.noise_sigma = sigma;
  t.max_cores = 2;
  t.frequencies = {1.0e9, 2.0e9};
  for (int m = 1; m <= 2; ++m)
    for (Hertz f : t.frequencies) {
      const double cap = m * f;
      const double d = 10.0 * m * f / 1e9;
      t.cpu.push_back({{m, f}, {baseline, 1.5 * d / cap, -0.6 * d / (cap * cap), 0.1 * d / (cap * cap * cap)}});
    }
  for (Hertz f : t.frequencies)
    for (Bytes b : sim_defaults::block_sizes()) {
      t.disk.push_back({f, b, DiskDirection::read, 4.0, 100e6});
      t.disk.push_back({f, b, DiskDirection::write, 5.0, 80e6 * b / (b + units::mib)});
    }
  for (Hertz f : t.frequencies)
    for (Bytes s : sim_defaults::packet_sizes())
      for (auto dir : {NetDirection::send, NetDirection::receive}) t.net.push_back({f, s, dir, 2.0, 1500.0, 1.5});
  return t;
}

}  // namespace fixtures
