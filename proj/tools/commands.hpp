#pragma once

#include <optional>
#include <string>
#include <vector>

namespace powercal::cli {

struct CalibrateArgs {
  std::string kind;
  std::string host = "sim:default";
  std::string out;
  unsigned long long seed = 42;
  double trim_seconds = 5.0;
  int repetitions = 10;
  double slot_seconds = 30.0;
  double load_step = 0.03;
  std::optional<double> noise_sigma;
  std::string dump_truth;
  std::string record_dir;
};

struct FitArgs {
  std::vector<std::string> datasets;
  std::string out;
  int degree = 3;
  int net_order = 2;
  int envelope_points = 512;
  std::string name;
  std::string report;
};

struct ReportArgs {
  std::string profile;
  std::string what = "all";
  std::string out;
};

struct EstimateArgs {
  std::string profile;
  std::string trace;
  std::string format = "text";
  std::string measured;
  std::string out;
};

struct SimulateArgs {
  std::string host = "sim:default";
  std::string out;
  unsigned long long seed = 42;
  double frequency = 2.128e9;
  double packet_size = 64;
  double rate = 150e6;
  std::string direction = "send";
};

int run_calibrate(const CalibrateArgs& a);
int run_fit(const FitArgs& a);
int run_report(const ReportArgs& a);
int run_estimate(const EstimateArgs& a);
int run_simulate(const SimulateArgs& a);

}  // namespace powercal::cli
