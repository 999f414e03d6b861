#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"

namespace powercal::cli {

int run_estimate(const EstimateArgs& a) {
  const auto profile = load_profile(a.profile);
  const auto trace = load_trace(a.trace);
  const auto est = estimate_total(profile, trace);

  std::optional<std::pair<Joules, double>> score;
  if (!a.measured.empty()) {
    auto in = open_input(a.measured);
    const auto samples = parse_power_stream(in);
    const double err = score_estimate(est, samples, est.duration);
    double sum = 0.0;
    for (const auto& s : samples) sum += s.watts;
    score = std::pair{sum / static_cast<double>(samples.size()) * est.duration, err};
  }

  std::ostringstream os;
  if (a.format == "json") {
    auto j = json::encode(est);
    if (score) j["measured"] = {{"e_measured", score->first}, {"relative_error", score->second}};
    os << json::dump(j);
  } else if (a.format == "csv") {
    csv::write_estimate(os, est);
    if (score)
      os << "# measured_j," << text::format_double(score->first) << "\n# relative_error,"
         << text::format_double(score->second) << '\n';
  } else {
    csv::write_estimate_text(os, est);
    if (score) os << "measured " << score->first << " J, relative error " << score->second << '\n';
  }
  if (a.out.empty())
    std::cout << os.str();
  else
    write_text(a.out, os.str());
  return kOk;
}

}  // namespace powercal::cli
