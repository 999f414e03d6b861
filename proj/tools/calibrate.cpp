#include <iostream>

#include "commands.hpp"
#include "common.hpp"

namespace powercal::cli {

namespace {

std::vector<SweepPlan> plans_for(const std::string& kind, const HostHandle& h, const CalibrateArgs& a) {
  std::vector<SweepPlan> plans;
  const bool all = kind == "all";
  if (all || kind == "cpu") {
    const auto ladder = default_load_ladder(a.load_step);
    plans.push_back(plan_cpu_sweep(h.frequencies, h.max_cores, ladder, a.slot_seconds));
  }
  const DiskSweepOptions disk{a.slot_seconds, h.max_cores};
  const Bytes volume = 256 * units::mib;
  if (all || kind == "disk-read")
    plans.push_back(plan_disk_sweep(h.frequencies, sim_defaults::block_sizes(), volume, DiskDirection::read, disk));
  if (all || kind == "disk-write")
    plans.push_back(plan_disk_sweep(h.frequencies, sim_defaults::block_sizes(), volume, DiskDirection::write, disk));

  NetSweepOptions net;
  net.slot_length = a.slot_seconds;
  net.cores = h.max_cores;
  if (h.truth) net.limits = h.truth->limits;
  for (const auto dir : {NetDirection::send, NetDirection::receive}) {
    if (!all && kind != (dir == NetDirection::send ? "net-send" : "net-recv")) continue;
    std::optional<SweepPlan> merged;
    for (Bytes s : sim_defaults::packet_sizes()) {
      const std::vector<Bytes> sizes{s};
      auto p = plan_net_sweep(h.frequencies, sizes, sim_defaults::rates_for(s), dir, net);
      merged = merged ? concat_plans(std::move(*merged), p) : std::move(p);
    }
    plans.push_back(std::move(*merged));
  }
  return plans;
}

}  // namespace

int run_calibrate(const CalibrateArgs& a) {
  auto handle = open_host(a.host, a.seed, a.noise_sigma);
  if (!a.dump_truth.empty()) {
    if (!handle.truth) throw Error(Errc::invalid_argument, "--dump-truth needs a simulated host");
    write_text(a.dump_truth, json::dump(json::encode(*handle.truth)));
  }

  std::optional<RecordingHost> recorder;
  HostInterface* host = handle.host.get();
  if (!a.record_dir.empty()) {
    recorder.emplace(*handle.host, handle.frequencies, handle.max_cores);
    host = &*recorder;
  }

  CalibrationDataset data;
  data.host = host->describe();
  std::size_t slots = 0;
  for (const auto& plan : plans_for(a.kind, handle, a)) {
    slots += plan.slots.size();
    data.merge(execute_sweep(plan, *host, {a.trim_seconds, a.repetitions}));
  }
  if (recorder) write_recording(a.record_dir, recorder->finish());

  write_text(a.out, render_dataset(data, a.out));
  std::cout << "calibrated " << slots << " slots on " << data.host << ": " << data.cpu.size() << " cpu, "
            << data.disk.size() << " disk, " << data.net.size() << " network observations; " << data.failures.size()
            << " failed\n";
  for (const auto& f : data.failures) warn("slot " + f.label + " failed: " + f.reason);
  for (const auto& w : data.warnings) warn(w);
  return kOk;
}

}  // namespace powercal::cli
