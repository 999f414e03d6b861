#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"

using namespace powercal::cli;

namespace {

// CLI11 silently drops an environment value that fails validation; a flag with
// the same value is a usage error, so the environment should be one too.
void reject_invalid_env(const CLI::App& sub) {
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string& name = opt->get_envname();
    if (name.empty() || opt->count() > 0) continue;
    const char* value = std::getenv(name.c_str());
    if (value && *value)
      throw CLI::ValidationError(opt->get_name(), name + "=" + value + " is not a valid value");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"powercal: server power calibration, model fitting and energy estimation"};
  app.require_subcommand(1);

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "run calibration sweeps and write a dataset");
  c->add_option("kind", cal.kind, "what to sweep")
      ->required()
      ->check(CLI::IsMember({"cpu", "disk-read", "disk-write", "net-send", "net-recv", "all"}));
  c->add_option("--host", cal.host, "sim:default, sim:<truth.json> or a recording directory")
      ->envname("POWERCAL_HOST")
      ->capture_default_str();
  c->add_option("--out", cal.out, "dataset path (.csv or .json)")->envname("POWERCAL_OUT")->required();
  c->add_option("--seed", cal.seed, "simulator seed")->envname("POWERCAL_SEED")->capture_default_str();
  c->add_option("--trim-seconds", cal.trim_seconds, "seconds dropped at each end of a slot")
      ->envname("POWERCAL_TRIM_SECONDS")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c->add_option("--repetitions", cal.repetitions, "repetitions of every cpu and disk slot")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--slot-seconds", cal.slot_seconds, "slot length")->check(CLI::PositiveNumber)->capture_default_str();
  c->add_option("--load-step", cal.load_step, "step of the descending load ladder")
      ->check(CLI::Range(0.001, 1.0))
      ->capture_default_str();
  c->add_option("--noise-sigma", cal.noise_sigma, "override the simulator's power noise (W)")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--dump-truth", cal.dump_truth, "write the simulator ground truth to this path");
  c->add_option("--record-dir", cal.record_dir, "also write a replayable recording to this directory");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "fit a server profile from datasets");
  f->add_option("datasets", fit.datasets, "dataset files")->required();
  f->add_option("--out", fit.out, "profile path")->envname("POWERCAL_OUT")->required();
  f->add_option("--degree", fit.degree, "CPU polynomial degree")
      ->envname("POWERCAL_DEGREE")
      ->check(CLI::Range(1, 7))
      ->capture_default_str();
  f->add_option("--net-order", fit.net_order, "network efficiency model order")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  f->add_option("--envelope-points", fit.envelope_points, "envelope grid resolution")
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  f->add_option("--name", fit.name, "profile name (defaults to the dataset host)");
  f->add_option("--report", fit.report, "write the fit report CSV here");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "export plot data from a profile");
  r->add_option("profile", rep.profile, "profile path")->required();
  r->add_option("--what", rep.what, "artifacts to export")
      ->check(CLI::IsMember({"curves", "envelopes", "efficiency", "all"}))
      ->capture_default_str();
  r->add_option("--out", rep.out, "output directory")->envname("POWERCAL_OUT")->required();

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "estimate the energy of an activity trace");
  e->add_option("profile", est.profile, "profile path")->required();
  e->add_option("trace", est.trace, "trace path (.csv or .json)")->required();
  e->add_option("--format", est.format, "output format")
      ->envname("POWERCAL_FORMAT")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  e->add_option("--measured", est.measured, "measured power CSV to score against");
  e->add_option("--out", est.out, "write here instead of standard output");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "run a simulated 10-phase application");
  s->add_option("--host", sim.host, "sim:default or sim:<truth.json>")->envname("POWERCAL_HOST")->capture_default_str();
  s->add_option("--out", sim.out, "output directory")->envname("POWERCAL_OUT")->required();
  s->add_option("--seed", sim.seed, "simulator seed")->envname("POWERCAL_SEED")->capture_default_str();
  s->add_option("--frequency", sim.frequency, "CPU frequency (Hz)")->capture_default_str();
  s->add_option("--packet-size", sim.packet_size, "UDP payload size (bytes)")->capture_default_str();
  s->add_option("--rate", sim.rate, "UDP rate (bps), 0 for no traffic")->capture_default_str();
  s->add_option("--direction", sim.direction, "traffic direction")
      ->check(CLI::IsMember({"send", "receive"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    for (const CLI::App* sub : app.get_subcommands()) reject_invalid_env(*sub);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    if (c->parsed()) return run_calibrate(cal);
    if (f->parsed()) return run_fit(fit);
    if (r->parsed()) return run_report(rep);
    if (e->parsed()) return run_estimate(est);
    if (s->parsed()) return run_simulate(sim);
  } catch (const powercal::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kRuntimeFailure;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}
