#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace powercal;

TEST(TruePower, ZeroLoadIsBaseline) {
  const auto t = sim_defaults::nemesis_frequencies();
  const auto truth = nemesis_like_truth(0.0);
  for (Hertz f : t) EXPECT_EQ(true_power(truth, {0.0, {2, f}, {}, {}}), 84.5);
}

TEST(TruePower, CubicMatchesHandEvaluation) {
  const auto truth = nemesis_like_truth(0.0);
  const OperatingPoint op{1, 1.596e9};
  // x = 1, D = 7.4 + 1.5 = 8.9; g(u) = 1.05u - 0.07u^2 + 0.02u^3 with u = 1e9 / 1.596e9.
  const long double u = 1e9L / 1.596e9L;
  const long double want = 84.5L + 8.9L * (1.05L * u - 0.07L * u * u + 0.02L * u * u * u);
  EXPECT_NEAR(true_power(truth, {1e9, op, {}, {}}), static_cast<double>(want), 1e-12 * 100);
}

TEST(TruePower, DiskAddendIsConfiguredWatts) {
  const auto truth = nemesis_like_truth(0.0);
  const OperatingPoint op{4, 2.128e9};
  const Bytes b = 64 * units::mib;
  const Watts cpu = true_power(truth, {3e9, op, {}, {}});
  const Watts total = true_power(truth, {3e9, op, DiskActivity{DiskDirection::write, b}, {}});
  EXPECT_NEAR(total - cpu, truth.disk_at(op.frequency, b, DiskDirection::write).watts, 1e-12 * total);
}

TEST(TruePower, NetworkAddendIgnoresRate) {
  const auto truth = nemesis_like_truth(0.0);
  const OperatingPoint op{4, 2.128e9};
  const Watts a = true_power(truth, {3e9, op, {}, NetActivity{NetDirection::send, 1470, 100e6}});
  const Watts b = true_power(truth, {3e9, op, {}, NetActivity{NetDirection::send, 1470, 800e6}});
  EXPECT_EQ(a, b);
}

TEST(TruePower, DomainViolations) {
  const auto truth = nemesis_like_truth(0.0);
  EXPECT_THROW(true_power(truth, {5e9, {1, 1.596e9}, {}, {}}), Error);
  EXPECT_THROW(true_power(truth, {0.0, {5, 1.596e9}, {}, {}}), Error);
  EXPECT_THROW(true_power(truth, {0.0, {1, 1.7e9}, {}, {}}), Error);
  EXPECT_THROW(true_power(truth, {0.0, {1, 1.596e9}, DiskActivity{DiskDirection::read, 3000}, {}}), Error);
  EXPECT_THROW(true_power(truth, {0.0, {1, 1.596e9}, {}, NetActivity{NetDirection::send, 64, 900e6}}), Error);
}

TEST(GroundTruthDefaults, ShapesAsDocumented) {
  const auto truth = nemesis_like_truth();
  EXPECT_NO_THROW(truth.validate());
  EXPECT_EQ(truth.baseline, 84.5);
  EXPECT_EQ(truth.noise_sigma, 0.5);
  EXPECT_EQ(truth.cpu.size(), 44u);
  // Write efficiency throughput / watts increases with block size at every frequency.
  for (Hertz f : truth.frequencies) {
    double prev = 0.0;
    for (Bytes b : sim_defaults::block_sizes()) {
      const auto& d = truth.disk_at(f, b, DiskDirection::write);
      EXPECT_GT(d.throughput / d.watts, prev);
      prev = d.throughput / d.watts;
    }
  }
}

TEST(GroundTruthDefaults, NonConcaveMultiCoreCurveIsRejected) {
  auto t = fixtures::tiny_truth();
  t.cpu.back().coefficients = {50.0, 1e-9, 1e-18};
  EXPECT_THROW(t.validate(), Error);
  auto u = fixtures::tiny_truth();
  u.cpu[1].coefficients[0] = 51.0;
  EXPECT_THROW(u.validate(), Error);
}

TEST(EmitSamples, ZeroSigmaEqualsTruth) {
  const auto truth = nemesis_like_truth(0.0);
  const std::vector<TimelineSegment> tl{{{{1, 1.596e9}, 0.3, {}, {}}, 10}, {{{4, 2.794e9}, 1.0, {}, {}}, 10}};
  const auto s = emit_samples(truth, tl, 1);
  ASSERT_EQ(s.samples.size(), 20u);
  EXPECT_EQ(s.samples, s.true_samples);
  EXPECT_EQ(s.snapshots.size(), 21u);
}

TEST(EmitSamples, SampleMeanWithinStandardError) {
  auto truth = nemesis_like_truth(0.5);
  truth.ramp_seconds = 0;
  const Activity a{{2, 2.128e9}, 0.6, {}, {}};
  const std::vector<TimelineSegment> tl{{a, 200}};
  const auto s = emit_samples(truth, tl, 42);
  double sum = 0.0;
  for (const auto& p : s.samples) sum += p.watts;
  const Watts want = true_power(truth, {activity_rho(truth, a), a.op, {}, {}});
  EXPECT_NEAR(sum / 200.0, want, 3 * 0.5 / std::sqrt(200.0));
}

TEST(EmitSamples, SameSeedSameStream) {
  const auto truth = nemesis_like_truth(0.5);
  const std::vector<TimelineSegment> tl{{{{3, 2.394e9}, 0.8, {}, {}}, 50}};
  EXPECT_EQ(emit_samples(truth, tl, 9).samples, emit_samples(truth, tl, 9).samples);
  EXPECT_NE(emit_samples(truth, tl, 9).samples, emit_samples(truth, tl, 10).samples);
}

TEST(EmitSamples, TicksFollowInjectedLoad) {
  const auto truth = nemesis_like_truth(0.0);
  for (double load : {0.0, 0.13, 0.5, 0.97, 1.0})
    for (int m = 1; m <= 4; ++m) {
      const Activity a{{m, 1.862e9}, load, {}, {}};
      const std::vector<TimelineSegment> tl{{a, 3}};
      const auto s = emit_samples(truth, tl, 1);
      const auto d = classify_ticks(s.snapshots[1], s.snapshots[2]);
      const auto want = std::min<std::uint64_t>(100u * m, static_cast<std::uint64_t>(std::floor(load * 100 * m + 1e-9)) + m);
      EXPECT_EQ(d.active, want) << "load " << load << " m " << m;
      EXPECT_EQ(d.active + d.passive, 400u);
    }
}

TEST(EmitSamples, RampAfterChangeOfActivity) {
  const auto truth = nemesis_like_truth(0.0);
  const Activity idle{{1, 1.596e9}, 0.0, {}, {}};
  const Activity busy{{1, 1.596e9}, 1.0, {}, {}};
  const auto s = emit_samples(truth, {{idle, 5}, {busy, 5}}, 1);
  const Watts lo = s.samples[4].watts;
  const Watts hi = s.samples[9].watts;
  EXPECT_GT(s.samples[5].watts, lo);
  EXPECT_LT(s.samples[5].watts, s.samples[6].watts);
  EXPECT_LT(s.samples[6].watts, hi);
  EXPECT_EQ(s.samples[7].watts, hi);
}

TEST(SimEngine, TrueEnergyIntegratesSamples) {
  const auto truth = nemesis_like_truth(0.0);
  SimEngine e(truth, 1);
  e.run({{2, 1.995e9}, 0.4, {}, {}}, 10);
  double sum = 0.0;
  for (const auto& s : e.true_samples()) sum += s.watts;
  EXPECT_DOUBLE_EQ(e.true_energy(0, 10), sum);
  EXPECT_EQ(e.samples_between(2, 5).size(), 3u);
}

TEST(SimHost, RejectsUnknownFrequencyAndCores) {
  SimHost host(nemesis_like_truth(0.0));
  EXPECT_THROW(host.set_frequency(3e9), Error);
  EXPECT_THROW(host.set_active_cores(5), Error);
  try {
    host.set_frequency(1e9);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::host_failure);
  }
}

TEST(Application, HadoopLikeShape) {
  const auto truth = nemesis_like_truth(0.0);
  SimEngine engine(truth, 42);
  const auto run = run_application(engine, hadoop_like_app(truth, 2.128e9, NetActivity{NetDirection::send, 64, 150e6}));
  ASSERT_EQ(run.trace.phases.size(), 10u);
  double total = 0.0;
  for (double e : run.true_phase_energy) total += e;
  EXPECT_DOUBLE_EQ(total, run.true_energy);
  EXPECT_EQ(run.duration, 399.0);
  for (const auto& p : run.trace.phases) {
    EXPECT_EQ(p.block_size, 64 * units::mib);
    EXPECT_EQ(*p.net_send, 150e6 * *p.duration / 8);
    EXPECT_EQ(*p.net_recv, 0.0);
    EXPECT_EQ(p.op.cores, 4);
  }
}
