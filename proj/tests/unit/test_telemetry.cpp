#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <thread>

#include "oracles.hpp"

using namespace powercal;

namespace {

TickSnapshot one_core(Seconds t, CoreTicks c) { return {t, {c}}; }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::invalid_argument;
}

}  // namespace

TEST(ClassifyTicks, DirectDelta) {
  CoreTicks c;
  c.user = 100;
  c.idle = 900;
  const auto d = classify_ticks(one_core(0, {}), one_core(10, c));
  EXPECT_EQ(d.active, 100u);
  EXPECT_EQ(d.passive, 900u);
}

TEST(ClassifyTicks, IowaitCountsAsPassive) {
  CoreTicks a, b;
  a.user = 50;
  a.iowait = 10;
  b.user = 80;
  b.iowait = 40;
  const auto d = classify_ticks(one_core(0, a), one_core(1, b));
  EXPECT_EQ(d.active, 30u);
  EXPECT_EQ(d.passive, 30u);
}

TEST(ClassifyTicks, EveryActiveFieldContributes) {
  CoreTicks b{1, 2, 3, 4, 5, 6, 7};
  const auto d = classify_ticks(one_core(0, {}), one_core(1, b));
  EXPECT_EQ(d.active, 15u);
  EXPECT_EQ(d.passive, 13u);
}

TEST(ClassifyTicks, RegressionIsReported) {
  CoreTicks a, b;
  a.user = 10;
  b.user = 9;
  EXPECT_EQ(code_of([&] { classify_ticks(one_core(0, a), one_core(1, b)); }), Errc::counter_regression);
}

TEST(ClassifyTicks, RejectsOutOfOrderSnapshots) {
  EXPECT_EQ(code_of([&] { classify_ticks(one_core(5, {}), one_core(5, {})); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([&] { classify_ticks(TickSnapshot{0, {{}, {}}}, one_core(1, {})); }), Errc::invalid_argument);
}

TEST(ClassifyTicks, SumsAcrossCores) {
  TickSnapshot a{0, std::vector<CoreTicks>(4)};
  TickSnapshot b = a;
  b.timestamp = 1;
  for (auto& c : b.cores) {
    c.user = 25;
    c.idle = 75;
  }
  const auto d = classify_ticks(a, b);
  EXPECT_EQ(d.active, 100u);
  EXPECT_EQ(d.passive, 300u);
}

TEST(TicksToAcps, SaturatedCoreYieldsClockRate) { EXPECT_DOUBLE_EQ(ticks_to_acps(100, 2.0e9, 1.0), 2.0e9); }

TEST(TicksToAcps, HalfLoad) {
  // 50 ticks of 10 ms at 1.596 GHz: 0.5 s busy -> 7.98e8 cycles in one second.
  EXPECT_DOUBLE_EQ(ticks_to_acps(50, 1.596e9, 1.0), 0.5 * 1.596e9);
}

TEST(TicksToAcps, IdleIsZero) { EXPECT_EQ(ticks_to_acps(0, 3.1e9, 1.0), 0.0); }

TEST(TicksToAcps, MatchesSimulatorInjectedLoad) {
  const auto truth = fixtures::tiny_truth();
  SimEngine engine(truth, 1);
  const auto before = engine.ticks();
  engine.run({{1, 1.0e9}, 0.5, {}, {}}, 10);
  const auto d = classify_ticks(before, engine.ticks());
  // 50 load ticks per second plus one OS tick on the single active core.
  EXPECT_EQ(d.active, 510u);
  EXPECT_DOUBLE_EQ(ticks_to_acps(d.active, 1.0e9, 10.0), 0.51e9);
}

TEST(TicksToAcps, PreconditionsEnforced) {
  EXPECT_THROW(ticks_to_acps(1, 1e9, 0.0), Error);
  EXPECT_THROW(ticks_to_acps(1, 0.0, 1.0), Error);
}

TEST(TicksToAcps, LinearInTicksAndFrequency) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> ticks(0, 100000);
  std::uniform_real_distribution<double> freq(1e8, 4e9);
  for (int i = 0; i < 200; ++i) {
    const auto a = ticks(rng), b = ticks(rng);
    const double f = freq(rng);
    EXPECT_NEAR(ticks_to_acps(a + b, f, 3.0), ticks_to_acps(a, f, 3.0) + ticks_to_acps(b, f, 3.0),
                1e-6 * ticks_to_acps(a + b + 1, f, 3.0));
    EXPECT_NEAR(ticks_to_acps(a, 2 * f, 3.0), 2 * ticks_to_acps(a, f, 3.0), 1e-6 * ticks_to_acps(a + 1, f, 1.0));
  }
}

TEST(PowerStream, ParsesTwoSamples) {
  std::istringstream in("0.0,84.5\n1.0,84.7\n");
  const auto s = parse_power_stream(in);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (PowerSample{0.0, 84.5}));
  EXPECT_EQ(s[1], (PowerSample{1.0, 84.7}));
}

TEST(PowerStream, NonMonotonicTimestamp) {
  std::istringstream in("1.0,84.5\n0.5,84.0\n");
  try {
    parse_power_stream(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), Errc::non_monotonic_timestamp);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(PowerStream, MalformedLinesCarryLineNumbers) {
  for (const char* bad : {"0,1\n1,abc\n", "0,1\n1\n", "0,1\n\n2,-3\n"}) {
    std::istringstream in(bad);
    try {
      parse_power_stream(in);
      FAIL() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.code(), Errc::parse_error);
      EXPECT_GE(e.line(), 2u);
    }
  }
}

TEST(PowerStream, SimulatedConstantSlot) {
  GroundTruth t = fixtures::tiny_truth(0.0, 85.0);
  t.os_floor_ticks = 0;
  SimEngine engine(t, 3);
  engine.run({{1, 1.0e9}, 0.0, {}, {}}, 30);
  std::stringstream io;
  write_power_stream(io, engine.samples());
  const auto s = parse_power_stream(io);
  ASSERT_EQ(s.size(), 30u);
  EXPECT_EQ(summarize(s).mean, 85.0);
}

TEST(PowerStream, RoundTripIsExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(50, 300);
  std::vector<PowerSample> v;
  for (int i = 0; i < 100; ++i) v.push_back({i * 0.37, w(rng)});
  std::stringstream io;
  write_power_stream(io, v);
  EXPECT_EQ(parse_power_stream(io), v);
}

TEST(TickStream, RoundTripAndOrdering) {
  std::vector<TickSnapshot> v{{0, {{1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11, 12, 13, 14}}},
                              {1, {{2, 2, 3, 4, 5, 6, 8}, {9, 9, 10, 11, 12, 13, 15}}}};
  std::stringstream io;
  write_tick_stream(io, v);
  EXPECT_EQ(parse_tick_stream(io), v);
  std::istringstream bad("0,1,0,0,0,0,0,0,0\n");
  EXPECT_THROW(parse_tick_stream(bad), ParseError);
}

TEST(ProcStat, ReadsPerCoreLines) {
  std::istringstream in(
      "cpu  10 0 5 100 2 1 1 0 0 0\n"
      "cpu0 4 0 2 50 1 1 0 0 0 0\n"
      "cpu1 6 1 3 50 1 0 1 0 0 0\n"
      "intr 12345\n");
  const auto s = read_proc_stat(in, 2.0);
  ASSERT_EQ(s.cores.size(), 2u);
  EXPECT_EQ(s.cores[1], (CoreTicks{6, 1, 3, 0, 1, 1, 50}));
  EXPECT_EQ(s.timestamp, 2.0);
}

TEST(SlotStatistics, ConstantSignal) {
  std::vector<PowerSample> v;
  for (int i = 0; i < 30; ++i) v.push_back({static_cast<double>(i), 100.0});
  const auto st = slot_statistics(v, {0, 30, "x"}, 5);
  EXPECT_EQ(st.mean, 100.0);
  EXPECT_EQ(st.stddev, 0.0);
  EXPECT_EQ(st.count, 20u);
}

TEST(SlotStatistics, RampIsTrimmed) {
  std::vector<PowerSample> v;
  for (int i = 0; i < 30; ++i) v.push_back({static_cast<double>(i), i < 5 ? 20.0 * i : 100.0});
  EXPECT_EQ(slot_statistics(v, {0, 30, "ramp"}, 5).mean, 100.0);
}

TEST(SlotStatistics, NoisySimulatedSlotsAverageToTruth) {
  GroundTruth t = fixtures::tiny_truth(0.5, 85.0);
  t.os_floor_ticks = 0;
  SimHost host(t, 42);
  std::vector<PowerSample> kept;
  for (int rep = 0; rep < 10; ++rep) {
    const Seconds start = host.engine().now();
    host.apply_cpu_load(0.0, 1, 30);
    const auto w = trimmed_window(host.power_stream(start, start + 30), {start, start + 30, "idle"}, 5);
    kept.insert(kept.end(), w.begin(), w.end());
  }
  ASSERT_EQ(kept.size(), 200u);
  EXPECT_NEAR(summarize(kept).mean, 85.0, 0.5);
  EXPECT_NEAR(summarize(kept).mean, 85.0, 3 * 0.5 / std::sqrt(200.0));
}

TEST(SlotStatistics, InsufficientSamples) {
  std::vector<PowerSample> v{{5, 1}, {6, 1}};
  EXPECT_EQ(code_of([&] { slot_statistics(v, {0, 30, "x"}, 5); }), Errc::insufficient_samples);
}

TEST(SlotStatistics, SlotShorterThanTrimIsRejected) {
  std::vector<PowerSample> v{{0, 1}};
  EXPECT_THROW(slot_statistics(v, {0, 10, "x"}, 5), Error);
}

TEST(SlotStatistics, IgnoresOrderAndOutsideSamples) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(80, 90);
  std::vector<PowerSample> v;
  for (int i = 0; i < 30; ++i) v.push_back({static_cast<double>(i), w(rng)});
  const auto base = slot_statistics(v, {0, 30, "x"}, 5);
  auto shuffled = v;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  shuffled.push_back({-3, 1000});
  shuffled.push_back({29.5, 1});
  const auto other = slot_statistics(shuffled, {0, 30, "x"}, 5);
  EXPECT_EQ(base.mean, other.mean);
  EXPECT_EQ(base.stddev, other.stddev);
  EXPECT_EQ(base.count, other.count);
}

TEST(AppendLog, ReadersSeeConsistentPrefix) {
  AppendLog<int> log;
  std::thread writer([&] {
    for (int i = 0; i < 20000; ++i) log.append(i);
  });
  bool ok = true;
  for (int r = 0; r < 200; ++r) {
    const auto snap = log.snapshot();
    for (std::size_t i = 0; i < snap.size(); ++i) ok = ok && snap[i] == static_cast<int>(i);
  }
  writer.join();
  EXPECT_TRUE(ok);
  EXPECT_EQ(log.size(), 20000u);
  EXPECT_EQ(log.copy_if([](int v) { return v % 2 == 0; }).size(), 10000u);
}
