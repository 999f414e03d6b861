#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "powercal/powercal.hpp"

namespace powercal::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeFailure = 1;
inline constexpr int kUsage = 2;

inline bool has_extension(const std::string& path, const char* ext) {
  return std::filesystem::path(path).extension() == ext;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_argument, "cannot open `" + path + "`");
  return in;
}

inline void write_text(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  json::write_file(path, content);
}

inline CalibrationDataset load_dataset(const std::string& path) {
  if (has_extension(path, ".json")) return json::decode_dataset(json::load(path));
  auto in = open_input(path);
  return csv::read_dataset(in);
}

inline std::string render_dataset(const CalibrationDataset& d, const std::string& path) {
  if (has_extension(path, ".json")) return json::dump(json::encode(d));
  std::ostringstream os;
  csv::write_dataset(os, d);
  return os.str();
}

inline ServerProfile load_profile(const std::string& path) { return json::decode_profile(json::load(path)); }

inline ActivityTrace load_trace(const std::string& path) {
  if (has_extension(path, ".json")) return json::decode_trace(json::load(path));
  auto in = open_input(path);
  return csv::read_trace(in);
}

/// A host chosen by `--host`: `sim:default`, `sim:<truth.json>` or a recording directory.
struct HostHandle {
  std::unique_ptr<HostInterface> host;
  std::vector<Hertz> frequencies;
  int max_cores = 1;
  std::optional<GroundTruth> truth;
};

inline HostHandle open_host(const std::string& selector, std::uint64_t seed, std::optional<double> noise_sigma) {
  HostHandle h;
  if (selector.rfind("sim:", 0) == 0) {
    const std::string cfg = selector.substr(4);
    GroundTruth truth = cfg == "default" ? nemesis_like_truth() : json::decode_truth(json::load(cfg));
    if (noise_sigma) truth.noise_sigma = *noise_sigma;
    h.frequencies = truth.frequencies;
    h.max_cores = truth.max_cores;
    h.truth = truth;
    h.host = std::make_unique<SimHost>(std::move(truth), seed);
    return h;
  }
  auto rec = read_recording(selector);
  h.frequencies = rec.frequencies;
  h.max_cores = rec.max_cores;
  h.host = std::make_unique<RecordedHost>(std::move(rec));
  return h;
}

inline void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

}  // namespace powercal::cli
