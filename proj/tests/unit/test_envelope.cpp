#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace powercal;

namespace {

std::vector<CpuPowerCurve> truth_curves(const GroundTruth& t) {
  std::vector<CpuPowerCurve> out;
  for (const auto& c : t.cpu) out.emplace_back(c.op, c.coefficients, 0.0, c.op.capacity());
  return out;
}

}  // namespace

TEST(MinimalPowerEnvelope, SingleCurveIsTheCurve) {
  const std::vector<CpuPowerCurve> cs{{{1, 2e9}, {80, 6e-9, -1e-18}, 1e8, 2e9}};
  const auto env = minimal_power_envelope(cs, 64);
  ASSERT_EQ(env.breakpoints.size(), 64u);
  for (const auto& p : env.breakpoints) EXPECT_EQ(p.value, cs[0](p.rho));
  EXPECT_EQ(env.breakpoints.front().rho, 1e8);
  EXPECT_EQ(env.breakpoints.back().rho, 2e9);
  EXPECT_EQ(env.source_switches(), 0u);
  EXPECT_TRUE(env.warnings.empty());
}

TEST(MinimalPowerEnvelope, LinearCrossingAtAnalyticPoint) {
  // 100 + 1e-8 rho and 90 + 2e-8 rho meet at rho = 1e9.
  const std::vector<CpuPowerCurve> cs{{{1, 2e9}, {100, 1e-8}, 0, 2e9}, {{2, 2e9}, {90, 2e-8}, 0, 2e9}};
  const auto env = minimal_power_envelope(cs, 100);
  EXPECT_EQ(env.source_switches(), 1u);
  const auto it = std::adjacent_find(env.breakpoints.begin(), env.breakpoints.end(),
                                     [](const auto& a, const auto& b) { return a.source != b.source; });
  ASSERT_NE(it, env.breakpoints.end());
  EXPECT_NEAR((it + 1)->rho, 1e9, 1e-3);
  EXPECT_EQ(it->source, (OperatingPoint{2, 2e9}));
}

TEST(MinimalPowerEnvelope, ConcaveQuadraticsCrossWhereTheFormulaSays) {
  const std::vector<double> qa{84.5, 8e-9, -1.5e-18}, qb{86.5, 5e-9, -0.5e-18};
  const Acps hi = 1.5e9;
  const std::vector<CpuPowerCurve> cs{{{1, 1.5e9}, qa, 0, hi}, {{2, 0.75e9}, qb, 0, hi}};
  const auto roots = oracle::quadratic_roots(qa[2] - qb[2], qa[1] - qb[1], qa[0] - qb[0], 0.0, hi);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_NEAR(roots[0], 1e9, 1e-3);
  const auto env = minimal_power_envelope(cs, 512);
  ASSERT_EQ(env.source_switches(), 1u);
  const auto it = std::adjacent_find(env.breakpoints.begin(), env.breakpoints.end(),
                                     [](const auto& x, const auto& y) { return x.source != y.source; });
  EXPECT_NEAR((it + 1)->rho, roots[0], 1e-6 * hi);
  EXPECT_TRUE(env.warnings.empty());
}

TEST(MinimalPowerEnvelope, PointwiseLowerBoundOnSimulatorTruth) {
  const auto cs = truth_curves(nemesis_like_truth(0.0));
  const auto env = minimal_power_envelope(cs);
  for (const auto& p : env.breakpoints)
    for (const auto& c : cs) {
      if (c.covers(p.rho)) {
        EXPECT_LE(p.value, c(p.rho));
      }
    }
  EXPECT_TRUE(std::is_sorted(env.breakpoints.begin(), env.breakpoints.end(),
                             [](const auto& x, const auto& y) { return x.rho <= y.rho; }));
}

TEST(MinimalPowerEnvelope, SourcesBelongToTheInputs) {
  const auto cs = truth_curves(nemesis_like_truth(0.0));
  const auto env = minimal_power_envelope(cs);
  for (const auto& p : env.breakpoints)
    EXPECT_TRUE(std::any_of(cs.begin(), cs.end(), [&](const auto& c) { return c.op() == p.source; }));
}

TEST(MinimalPowerEnvelope, ConvexSegmentWarns) {
  const std::vector<CpuPowerCurve> cs{{{1, 1e9}, {80, 1e-9, 1e-17}, 0, 1e9}};
  EXPECT_FALSE(minimal_power_envelope(cs, 32).warnings.empty());
}

TEST(MinimalPowerEnvelope, EmptyInputs) {
  const std::vector<CpuPowerCurve> none;
  try {
    minimal_power_envelope(none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_grid);
  }
  const std::vector<CpuPowerCurve> one{{{1, 1e9}, {80, 1e-9}, 0, 1e9}};
  EXPECT_THROW(minimal_power_envelope(one, 1), Error);
}

TEST(MaximalEfficiencyEnvelope, SingleLinearCurveIsFlat) {
  const std::vector<CpuPowerCurve> cs{{{1, 2e9}, {80, 4e-9}, 0, 2e9}};
  const auto env = maximal_efficiency_envelope(cs, 50);
  // rho = 0 has no efficiency, so the first grid point is skipped.
  ASSERT_EQ(env.breakpoints.size(), 49u);
  for (const auto& p : env.breakpoints) EXPECT_NEAR(p.value, 2.5e8, 1e-4);
}

TEST(MaximalEfficiencyEnvelope, GlobalMaximumAtAMiddleFrequency) {
  const auto truth = nemesis_like_truth(0.0);
  const auto cs = truth_curves(truth);
  // Exhaustive grid evaluation of every ground-truth curve.
  double best = 0.0;
  OperatingPoint arg;
  for (const auto& c : cs)
    for (int i = 1; i <= 1000; ++i) {
      const Acps rho = c.rho_max() * i / 1000.0;
      const double eta = rho / (c(rho) - c.baseline());
      if (eta > best) {
        best = eta;
        arg = c.op();
      }
    }
  EXPECT_GT(arg.frequency, truth.frequencies.front());
  EXPECT_LT(arg.frequency, truth.frequencies.back());
  const auto env = maximal_efficiency_envelope(cs, 2048);
  const auto top = std::max_element(env.breakpoints.begin(), env.breakpoints.end(),
                                    [](const auto& x, const auto& y) { return x.value < y.value; });
  EXPECT_EQ(top->source.frequency, arg.frequency);
  EXPECT_NEAR(top->value, best, 1e-3 * best);
}

TEST(MaximalEfficiencyEnvelope, PerCurveMaximumAtTopLoad) {
  for (const auto& c : truth_curves(nemesis_like_truth(0.0))) {
    int arg = 0;
    double best = 0.0;
    for (int i = 1; i <= 256; ++i) {
      const double eta = cpu_efficiency(c, c.rho_max() * i / 256.0);
      if (eta > best) {
        best = eta;
        arg = i;
      }
    }
    EXPECT_EQ(arg, 256) << to_string(c.op());
  }
}

TEST(MaximalEfficiencyEnvelope, PointwiseUpperBound) {
  const auto cs = truth_curves(nemesis_like_truth(0.0));
  const auto env = maximal_efficiency_envelope(cs);
  for (const auto& p : env.breakpoints)
    for (const auto& c : cs) {
      if (c.covers(p.rho) && c(p.rho) > c.baseline()) {
        EXPECT_GE(p.value, cpu_efficiency(c, p.rho));
      }
    }
}

TEST(EnvelopeGrid, SpansUnionOfDomains) {
  const std::vector<CpuPowerCurve> cs{{{1, 1e9}, {80, 1e-9}, 2e8, 1e9}, {{2, 1e9}, {80, 1e-9}, 5e8, 2e9}};
  const auto g = envelope_grid(cs, 10);
  EXPECT_EQ(g.front(), 2e8);
  EXPECT_EQ(g.back(), 2e9);
  EXPECT_EQ(g.size(), 10u);
}

TEST(EnvelopeAt, TiesGoToTheEarliestCurve) {
  const std::vector<CpuPowerCurve> cs{{{1, 1e9}, {80, 1e-9}, 0, 1e9}, {{2, 1e9}, {80, 1e-9}, 0, 1e9}};
  EXPECT_EQ(min_power_at(cs, 5e8)->source.cores, 1);
  EXPECT_EQ(max_efficiency_at(cs, 5e8)->source.cores, 1);
  EXPECT_FALSE(min_power_at(cs, 2e9).has_value());
}
