#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace powercal;

namespace {

const OperatingPoint kOp{1, 2e9};

ServerProfile flat_profile() {
  ServerProfile p;
  p.name = "flat";
  p.frequencies = {2e9};
  p.max_cores = 1;
  p.cpu_curves.emplace_back(kOp, std::vector<double>{100.0, 0.0}, 0.0, 2e9);
  p.baseline = 100.0;
  for (Bytes b : {1e6, 64 * units::mib}) {
    p.disk.entries[{2e9, b, DiskDirection::read}] = {1e7, 3.0};
    p.disk.entries[{2e9, b, DiskDirection::write}] = {5e6, 4.0};
  }
  for (Bytes s : {64.0, 1470.0})
    for (auto d : {NetDirection::send, NetDirection::receive})
      p.network.entries[{2e9, s, d}] = {1.0 / 2.0, 0.0, 1e6, 9e8};
  return p;
}

Phase cpu_phase(double cycles, Seconds t) {
  Phase ph;
  ph.name = "p";
  ph.active_cycles = cycles;
  ph.duration = t;
  ph.op = kOp;
  return ph;
}

}  // namespace

TEST(EstimateRuntime, Quotient) {
  EXPECT_EQ(estimate_runtime(2e9, 1e9), 2.0);
  EXPECT_THROW(estimate_runtime(0.0, 1e9), Error);
  EXPECT_THROW(estimate_runtime(1e9, 0.0), Error);
}

TEST(EstimateLoad, QuotientAndInverse) {
  EXPECT_EQ(estimate_load(3e9, 3.0), 1e9);
  EXPECT_THROW(estimate_load(3e9, 0.0), Error);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(1e6, 1e12), t(0.1, 1e3);
  for (int i = 0; i < 100; ++i) {
    const double cc = c(rng), tt = t(rng);
    EXPECT_NEAR(estimate_runtime(cc, estimate_load(cc, tt)), tt, 1e-12 * tt);
  }
}

TEST(EstimateLoad, SimulatedPhaseMatchesInjectedLoad) {
  const auto truth = nemesis_like_truth(0.0);
  SimEngine engine(truth, 1);
  AppPhaseSpec spec{"only", {3, 2.394e9}, 0.6, 20, 0, 0, 0.0, std::nullopt};
  const auto run = run_application(engine, {spec});
  const auto& ph = run.trace.phases[0];
  const Acps rho = estimate_load(ph.active_cycles, *ph.duration);
  // Injected 0.6 of capacity plus the one-tick-per-core floor.
  EXPECT_NEAR(rho, 0.61 * 3 * 2.394e9, 1e-6 * rho);
  EXPECT_EQ(estimate_runtime(ph.active_cycles, rho), 20.0);
}

TEST(EstimateCpuBaselineEnergy, FlatCurve) {
  const auto p = flat_profile();
  EXPECT_EQ(estimate_cpu_baseline_energy(p, kOp, 1e9, 1e9), 100.0);
  try {
    estimate_cpu_baseline_energy(p, kOp, 3e9, 1e9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::load_out_of_domain);
  }
  try {
    estimate_cpu_baseline_energy(p, {2, 2e9}, 1e9, 1e9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::uncalibrated_operating_point);
  }
}

TEST(EstimateCpuBaselineEnergy, MatchesIntegratedTruthForAPurePhase) {
  auto truth = nemesis_like_truth(0.0);
  truth.ramp_seconds = 0;
  SimEngine engine(truth, 1);
  const auto run = run_application(engine, {{"cpu", {2, 1.862e9}, 0.7, 30, 0, 0, 0.0, std::nullopt}});
  ServerProfile p;
  for (const auto& c : truth.cpu) p.cpu_curves.emplace_back(c.op, c.coefficients, 0.0, c.op.capacity());
  const auto& ph = run.trace.phases[0];
  const double e = estimate_cpu_baseline_energy(p, ph.op, estimate_load(ph.active_cycles, *ph.duration), ph.active_cycles);
  EXPECT_NEAR(e, run.true_energy, 1e-9 * run.true_energy);
}

TEST(EstimateCpuBaselineEnergy, InvariantToSplitPreservingLoad) {
  const ServerProfile p = [] {
    ServerProfile q;
    q.cpu_curves.emplace_back(kOp, std::vector<double>{80, 6e-9, -1e-18}, 0.0, 2e9);
    return q;
  }();
  const double whole = estimate_cpu_baseline_energy(p, kOp, 1.2e9, 6e9);
  const double halves = 2 * estimate_cpu_baseline_energy(p, kOp, 1.2e9, 3e9);
  EXPECT_NEAR(whole, halves, 1e-12 * whole);
}

TEST(EstimateDiskEnergy, Cases) {
  const auto p = flat_profile();
  EXPECT_EQ(estimate_disk_energy(p, kOp, 1e6, 0, 0), 0.0);
  EXPECT_EQ(estimate_disk_energy(p, kOp, 1e6, 1e9, 0), 100.0);
  EXPECT_EQ(estimate_disk_energy(p, kOp, 64 * units::mib, 1e9, 1e9), 100.0 + 200.0);
  try {
    estimate_disk_energy(p, kOp, 1e9, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::uncalibrated_block_size);
  }
  // A zero volume never consults the model, so an uncalibrated block size is harmless.
  EXPECT_EQ(estimate_disk_energy(p, kOp, 1e9, 0, 0), 0.0);
}

TEST(EstimateDiskEnergy, HadoopBlockUsesTheGridPoint) {
  auto p = flat_profile();
  p.disk.entries[{2e9, 64 * units::mib, DiskDirection::read}] = {2.5e7, 3.0};
  EXPECT_EQ(estimate_disk_energy(p, kOp, 64 * units::mib, 2.5e9, 0), 100.0);
}

TEST(EstimateNetEnergy, ZeroVolumes) { EXPECT_EQ(estimate_net_energy(flat_profile(), kOp, 64, 1e8, 0, 0), 0.0); }

TEST(EstimateNetEnergy, PublishedSurvivorRow) {
  ServerProfile p;
  p.network = reference::published_network_model("Survivor");
  // Worked in published units: eta = 1.751e-2 * 100 + 1.904e-5 * 100^2 = 1.9414 Mbit/J, V = 1000 Mbit.
  const double want = 1000.0 / 1.9414;
  const double got = estimate_net_energy(p, {1, 1.2e9}, 64, 1e8, 0, 1e9 / 8);
  EXPECT_NEAR(got, want, 1e-9 * want);
}

TEST(EstimateNetEnergy, RateIndependentPower) {
  const auto p = flat_profile();
  // eta = R / 2 W, so E = 8 V * 2 / R.
  EXPECT_DOUBLE_EQ(estimate_net_energy(p, kOp, 1470, 4e8, 5e8, 0), 8 * 5e8 * 2 / 4e8);
  try {
    estimate_net_energy(p, kOp, 1470, 9.5e8, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::rate_out_of_domain);
  }
  try {
    estimate_net_energy(p, kOp, 9000, 1e8, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::uncalibrated_packet_size);
  }
}

TEST(EstimateTotal, SinglePlainPhase) {
  const ActivityTrace t{{cpu_phase(2e9, 2.0)}};
  const auto e = estimate_total(flat_profile(), t);
  EXPECT_EQ(e.e_total, 200.0);
  EXPECT_EQ(e.e_disk, 0.0);
  EXPECT_EQ(e.e_network, 0.0);
  EXPECT_EQ(e.duration, 2.0);
}

TEST(EstimateTotal, TenIdenticalPhases) {
  auto ph = cpu_phase(1.5e9, 1.0);
  ph.disk_read = 1e8;
  ph.block_size = 1e6;
  ph.net_rate = 1e8;
  ph.packet_size = 64;
  ph.net_send = 1e7;
  const auto one = estimate_total(flat_profile(), {{ph}});
  const auto ten = estimate_total(flat_profile(), {std::vector<Phase>(10, ph)});
  EXPECT_NEAR(ten.e_total, 10 * one.e_total, 1e-12 * ten.e_total);
  EXPECT_EQ(ten.per_phase.size(), 10u);
}

TEST(EstimateTotal, EmptyTraceIsZero) {
  const auto e = estimate_total(flat_profile(), {});
  EXPECT_EQ(e.e_total, 0.0);
  EXPECT_TRUE(e.per_phase.empty());
}

TEST(EstimateTotal, AutoVolumeAndDerivedDuration) {
  auto ph = cpu_phase(2e9, 0.0);
  ph.duration.reset();
  ph.rho = 1e9;
  ph.net_rate = 1e8;
  ph.packet_size = 64;
  ph.net_send.reset();
  const auto e = estimate_total(flat_profile(), {{ph}});
  EXPECT_EQ(e.duration, 2.0);
  // V = R T / 8 = 2.5e7 B sent; eta = R / 2.
  EXPECT_DOUBLE_EQ(e.e_network, 8 * 2.5e7 * 2 / 1e8);
  ph.rho.reset();
  EXPECT_THROW(estimate_total(flat_profile(), {{ph}}), PhaseError);
}

TEST(EstimateTotal, FailingPhaseIsNamed) {
  auto bad = cpu_phase(1e9, 1.0);
  bad.name = "shuffle";
  bad.op = {1, 2.5e9};
  const ActivityTrace t{{cpu_phase(1e9, 1.0), bad}};
  try {
    estimate_total(flat_profile(), t);
    FAIL();
  } catch (const PhaseError& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_EQ(e.phase_name(), "shuffle");
    EXPECT_EQ(e.cause(), Errc::uncalibrated_operating_point);
    EXPECT_NE(std::string(e.what()).find("shuffle"), std::string::npos);
  }
}

TEST(ScoreEstimate, Cases) {
  EnergyEstimate e;
  e.e_total = 93.0;
  std::vector<PowerSample> s;
  for (int i = 0; i < 10; ++i) s.push_back({static_cast<double>(i), 10.0});
  EXPECT_NEAR(score_estimate(e, s, 10.0), 0.07, 1e-15);
  e.e_total = 100.0;
  EXPECT_EQ(score_estimate(e, s, 10.0), 0.0);
  try {
    score_estimate(e, s, 20.0);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::insufficient_samples);
  }
  EXPECT_THROW(score_estimate(e, {}, 1.0), Error);
}
