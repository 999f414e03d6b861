#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "powercal/error.hpp"
#include "powercal/text.hpp"
#include "powercal/types.hpp"

namespace powercal {

/// Condition number of the normalized design matrix above which a fit is refused.
inline constexpr double kIllConditionedThreshold = 1e10;

struct FitReport {
  std::string label;
  int degree = 0;
  std::size_t points = 0;
  /// RMS of the watt (or efficiency) residuals divided by the mean observed value.
  double residual_rms = 0.0;
  std::vector<double> residuals;  // per point, (observed - fitted) / observed
  double condition = 0.0;

  friend bool operator==(const FitReport&, const FitReport&) = default;
};

struct CpuFit {
  CpuPowerCurve curve;
  FitReport report;
};

namespace detail {

inline std::size_t distinct_count(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

struct LsqSolution {
  Eigen::VectorXd coef;
  double condition = 0.0;
};

inline LsqSolution least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : INFINITY;
  return {a.colPivHouseholderQr().solve(y), cond};
}

inline void fill_residuals(FitReport& r, std::span<const double> observed, std::span<const double> fitted) {
  double ss = 0.0, sum = 0.0;
  r.residuals.clear();
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - fitted[i];
    ss += d * d;
    sum += observed[i];
    r.residuals.push_back(observed[i] != 0.0 ? d / observed[i] : d);
  }
  const double n = static_cast<double>(observed.size());
  const double mean = sum / n;
  r.residual_rms = mean != 0.0 ? std::sqrt(ss / n) / std::abs(mean) : std::sqrt(ss / n);
}

}  // namespace detail

/// Least-squares polynomial P(rho) = sum alpha_k rho^k through the samples of one operating point.
/// Loads are scaled to [0, 1] before solving; coefficients come back in ACPS units.
inline CpuFit fit_cpu_curve(std::span<const LoadSample> samples, int degree = 3) {
  if (degree < 1 || degree > kMaxCpuDegree)
    throw Error(Errc::invalid_argument, "degree " + std::to_string(degree) + " outside [1, 7]");
  if (samples.empty()) throw Error(Errc::insufficient_data, "no samples");
  const OperatingPoint op = samples.front().op;
  std::vector<double> rhos;
  for (const auto& s : samples) {
    if (s.op != op) throw Error(Errc::invalid_argument, "samples mix operating points");
    if (!(s.rho >= 0.0) || !std::isfinite(s.rho) || !(s.power > 0.0))
      throw Error(Errc::invalid_argument, "samples need rho >= 0 and power > 0");
    rhos.push_back(s.rho);
  }
  const auto n = static_cast<std::size_t>(degree);
  if (detail::distinct_count(rhos) < n + 1)
    throw Error(Errc::insufficient_data, to_string(op) + ": " + std::to_string(detail::distinct_count(rhos)) +
                                             " distinct loads for degree " + std::to_string(degree));

  const double scale = *std::max_element(rhos.begin(), rhos.end());
  Eigen::MatrixXd a(samples.size(), n + 1);
  Eigen::VectorXd y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i].rho / scale;
    double p = 1.0;
    for (std::size_t k = 0; k <= n; ++k, p *= x) a(i, k) = p;
    y(i) = samples[i].power;
  }
  const auto sol = detail::least_squares(a, y);
  if (!(sol.condition <= kIllConditionedThreshold))
    throw Error(Errc::ill_conditioned, to_string(op) + ": condition " + text::format_double(sol.condition) +
                                           " at degree " + std::to_string(degree) + ", lower the degree");

  std::vector<double> coef(n + 1);
  double sk = 1.0;
  for (std::size_t k = 0; k <= n; ++k, sk *= scale) coef[k] = sol.coef(k) / sk;

  const Eigen::VectorXd fitted = a * sol.coef;
  FitReport report{"cpu:" + to_string(op), degree, samples.size(), 0.0, {}, sol.condition};
  detail::fill_residuals(report, std::span<const double>(y.data(), y.size()),
                         std::span<const double>(fitted.data(), fitted.size()));

  const auto [lo, hi] = std::minmax_element(rhos.begin(), rhos.end());
  return {CpuPowerCurve(op, std::move(coef), *lo, *hi, report.residual_rms), std::move(report)};
}

struct BaselineEstimate {
  Watts baseline = 0.0;
  Watts spread = 0.0;
};

/// Median of the curves' alpha_0 and their max - min spread.
inline BaselineEstimate extract_baseline(std::span<const CpuPowerCurve> curves) {
  if (curves.empty()) throw Error(Errc::insufficient_data, "no curves to take a baseline from");
  std::vector<double> a0;
  for (const auto& c : curves) a0.push_back(c.baseline());
  std::sort(a0.begin(), a0.end());
  const std::size_t m = a0.size() / 2;
  const double median = a0.size() % 2 == 1 ? a0[m] : 0.5 * (a0[m - 1] + a0[m]);
  return {median, a0.back() - a0.front()};
}

/// rho / (P(rho) - alpha_0): cycles per joule spent above the baseline.
inline double cpu_efficiency(const CpuPowerCurve& curve, Acps rho) {
  if (!(rho > 0.0)) throw Error(Errc::invalid_argument, "efficiency needs rho > 0");
  if (!curve.covers(rho))
    throw Error(Errc::load_out_of_domain, "rho " + text::format_double(rho) + " outside the domain of " +
                                              to_string(curve.op()));
  const double active = curve(rho) - curve.baseline();
  if (!(active > 0.0))
    throw Error(Errc::degenerate_power, to_string(curve.op()) + ": P(rho) <= alpha_0 at rho " +
                                            text::format_double(rho));
  return rho / active;
}

struct IsolatedPower {
  Watts watts = 0.0;
  bool negative = false;       // excluded from efficiency computation
  bool out_of_domain = false;  // rho was not covered by the curve

  bool usable() const { return !negative && !out_of_domain && watts > 0.0; }
};

/// Total measured power minus the CPU+baseline share at the measured load.
inline IsolatedPower isolate_component_power(Watts total_mean, const CpuPowerCurve& curve, Acps rho) {
  const Watts w = total_mean - curve(rho);
  return {w, w < 0.0, !curve.covers(rho)};
}

/// Bytes moved per joule of isolated disk energy.
inline double disk_efficiency(Bytes volume, Watts p_disk, Seconds duration) {
  if (!(p_disk > 0.0))
    throw Error(Errc::non_positive_power, "isolated disk power " + text::format_double(p_disk) + " W");
  if (!(duration > 0.0)) throw Error(Errc::invalid_argument, "duration must be positive");
  if (!(volume >= 0.0)) throw Error(Errc::invalid_argument, "volume must be non-negative");
  return volume / (p_disk * duration);
}

struct RatePoint {
  BitsPerSecond rate = 0.0;
  double efficiency = 0.0;  // bits per joule
};

struct NetFit {
  double beta1 = 0.0;
  double beta2 = 0.0;
  FitReport report;
};

/// Zero-intercept least squares eta = beta1 R (+ beta2 R^2 when order is 2).
inline NetFit fit_network_efficiency(std::span<const RatePoint> points, int order = 2) {
  if (order != 1 && order != 2) throw Error(Errc::invalid_argument, "network model order must be 1 or 2");
  std::vector<double> rates;
  for (const auto& p : points) {
    if (!(p.rate > 0.0) || !std::isfinite(p.rate)) throw Error(Errc::invalid_argument, "rates must be positive");
    if (!std::isfinite(p.efficiency)) throw Error(Errc::invalid_argument, "efficiencies must be finite");
    rates.push_back(p.rate);
  }
  if (detail::distinct_count(rates) < 2)
    throw Error(Errc::insufficient_data, "network fit needs at least 2 distinct rates");

  const double scale = *std::max_element(rates.begin(), rates.end());
  const auto cols = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), cols);
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i].rate / scale;
    a(i, 0) = x;
    if (order == 2) a(i, 1) = x * x;
    y(i) = points[i].efficiency;
  }
  const auto sol = detail::least_squares(a, y);
  if (!(sol.condition <= kIllConditionedThreshold))
    throw Error(Errc::ill_conditioned, "network fit condition " + text::format_double(sol.condition));

  NetFit out;
  out.beta1 = sol.coef(0) / scale;
  out.beta2 = order == 2 ? sol.coef(1) / (scale * scale) : 0.0;
  out.report.degree = order;
  out.report.points = points.size();
  out.report.condition = sol.condition;
  const Eigen::VectorXd fitted = a * sol.coef;
  detail::fill_residuals(out.report, std::span<const double>(y.data(), y.size()),
                         std::span<const double>(fitted.data(), fitted.size()));
  return out;
}

}  // namespace powercal
