#pragma once

// Lower envelope of power curves and upper envelope of CPU efficiencies across
// operating points.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powercal/error.hpp"
#include "powercal/fitting.hpp"
#include "powercal/text.hpp"
#include "powercal/types.hpp"

namespace powercal {

inline constexpr int kDefaultEnvelopePoints = 512;

/// Evenly spaced loads over the union of the curve domains. The last point is the
/// union maximum exactly.
inline std::vector<Acps> envelope_grid(std::span<const CpuPowerCurve> curves, int resolution = kDefaultEnvelopePoints) {
  if (curves.empty()) throw Error(Errc::empty_grid, "no curves");
  if (resolution < 2) throw Error(Errc::empty_grid, "grid resolution must be at least 2");
  Acps lo = curves.front().rho_min();
  Acps hi = curves.front().rho_max();
  for (const auto& c : curves) {
    lo = std::min(lo, c.rho_min());
    hi = std::max(hi, c.rho_max());
  }
  if (!(hi > lo)) throw Error(Errc::empty_grid, "curves span a degenerate load range");
  std::vector<Acps> grid(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (resolution - 1);
  grid.back() = hi;
  return grid;
}

/// Cheapest covering curve at rho; ties go to the earliest curve.
inline std::optional<EnvelopePoint> min_power_at(std::span<const CpuPowerCurve> curves, Acps rho) {
  std::optional<EnvelopePoint> best;
  for (const auto& c : curves) {
    if (!c.covers(rho)) continue;
    const Watts p = c(rho);
    if (!best || p < best->value) best = EnvelopePoint{rho, p, c.op()};
  }
  return best;
}

/// Most efficient covering curve at rho. Curves whose power does not exceed
/// their baseline at rho are skipped.
inline std::optional<EnvelopePoint> max_efficiency_at(std::span<const CpuPowerCurve> curves, Acps rho) {
  std::optional<EnvelopePoint> best;
  if (!(rho > 0.0)) return best;
  for (const auto& c : curves) {
    if (!c.covers(rho)) continue;
    const double active = c(rho) - c.baseline();
    if (!(active > 0.0)) continue;
    const double eta = rho / active;
    if (!best || eta > best->value) best = EnvelopePoint{rho, eta, c.op()};
  }
  return best;
}

namespace detail {

template <class Pick>
EnvelopeCurve build_envelope(EnvelopeKind kind, std::span<const CpuPowerCurve> curves, int resolution, Pick pick) {
  const auto grid = envelope_grid(curves, resolution);
  EnvelopeCurve env{kind, {}, {}};
  std::optional<EnvelopePoint> prev;
  for (Acps rho : grid) {
    const auto here = pick(curves, rho);
    if (!here) continue;
    if (prev && prev->source != here->source) {
      // Locate where the previous winner stops winning.
      Acps a = prev->rho;
      Acps b = rho;
      for (int it = 0; it < 200; ++it) {
        const Acps mid = a + 0.5 * (b - a);
        if (mid <= a || mid >= b) break;
        const auto w = pick(curves, mid);
        if (w && w->source == prev->source)
          a = mid;
        else
          b = mid;
      }
      if (b > prev->rho && b < rho)
        if (auto sw = pick(curves, b)) env.breakpoints.push_back(*sw);
    }
    env.breakpoints.push_back(*here);
    prev = here;
  }
  if (env.breakpoints.empty()) throw Error(Errc::empty_grid, "no grid point is covered by a usable curve");
  return env;
}

inline const CpuPowerCurve* curve_for(std::span<const CpuPowerCurve> curves, const OperatingPoint& op) {
  for (const auto& c : curves)
    if (c.op() == op) return &c;
  return nullptr;
}

}  // namespace detail

/// P_min(rho) sampled on the grid, with extra breakpoints where the winning
/// operating point changes. Convex stretches inside a single-source segment are
/// reported as warnings.
inline EnvelopeCurve minimal_power_envelope(std::span<const CpuPowerCurve> curves,
                                            int resolution = kDefaultEnvelopePoints) {
  auto env = detail::build_envelope(EnvelopeKind::minimal_power, curves, resolution,
                                    [](std::span<const CpuPowerCurve> cs, Acps r) { return min_power_at(cs, r); });
  std::size_t i = 0;
  while (i < env.breakpoints.size()) {
    std::size_t j = i;
    while (j + 1 < env.breakpoints.size() && env.breakpoints[j + 1].source == env.breakpoints[i].source) ++j;
    const auto* c = detail::curve_for(curves, env.breakpoints[i].source);
    const double scale = c->rho_max() * c->rho_max();
    for (std::size_t k = i; k <= j; ++k)
      if (c->second_derivative(env.breakpoints[k].rho) * scale > 1e-9) {
        env.warnings.push_back("segment of " + to_string(c->op()) + " over [" +
                               text::format_double(env.breakpoints[i].rho) + ", " +
                               text::format_double(env.breakpoints[j].rho) + "] is not concave");
        break;
      }
    i = j + 1;
  }
  return env;
}

/// eta_max(rho): upper envelope of rho / (P(rho) - alpha_0).
inline EnvelopeCurve maximal_efficiency_envelope(std::span<const CpuPowerCurve> curves,
                                                 int resolution = kDefaultEnvelopePoints) {
  return detail::build_envelope(EnvelopeKind::maximal_efficiency, curves, resolution,
                                [](std::span<const CpuPowerCurve> cs, Acps r) { return max_efficiency_at(cs, r); });
}

}  // namespace powercal
