#include <filesystem>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"

namespace powercal::cli {

int run_simulate(const SimulateArgs& a) {
  if (a.host.rfind("sim:", 0) != 0) throw Error(Errc::invalid_argument, "simulate needs a `sim:` host");
  const std::string cfg = a.host.substr(4);
  const GroundTruth truth = cfg == "default" ? nemesis_like_truth() : json::decode_truth(json::load(cfg));
  if (!truth.has_frequency(a.frequency))
    throw Error(Errc::invalid_argument, "frequency " + text::format_double(a.frequency) + " Hz is not offered");

  const NetDirection direction = a.direction == "send" ? NetDirection::send : NetDirection::receive;
  std::optional<NetActivity> net;
  if (a.rate > 0.0) net = NetActivity{direction, a.packet_size, a.rate};

  SimEngine engine(truth, a.seed);
  const auto run = run_application(engine, hadoop_like_app(truth, a.frequency, net));

  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  std::ostringstream trace, power;
  csv::write_trace(trace, run.trace);
  write_power_stream(power, engine.samples());
  write_text((dir / "trace.csv").string(), trace.str());
  write_text((dir / "power.csv").string(), power.str());

  json::Json truth_doc{{"schema_version", kSchemaVersion},
                       {"kind", "application_truth"},
                       {"duration", run.duration},
                       {"true_energy", run.true_energy},
                       {"phase_energy", run.true_phase_energy}};
  write_text((dir / "truth.json").string(), json::dump(truth_doc));
  std::cout << "simulated " << run.trace.phases.size() << " phases over " << run.duration << " s, true energy "
            << text::format_double(run.true_energy) << " J\n";
  return kOk;
}

}  // namespace powercal::cli
