#include <algorithm>
#include <iostream>

#include "commands.hpp"
#include "common.hpp"

namespace powercal::cli {

int run_fit(const FitArgs& a) {
  CalibrationDataset data;
  for (const auto& path : a.datasets) data.merge(load_dataset(path));

  ProfileOptions opt;
  opt.name = a.name;
  opt.degree = a.degree;
  opt.net_order = a.net_order;
  opt.envelope_points = a.envelope_points;
  const auto fit = fit_profile(data, opt);
  write_text(a.out, json::dump(json::encode(fit.profile)));

  if (!a.report.empty()) {
    std::ostringstream os;
    auto reports = fit.cpu_reports;
    reports.insert(reports.end(), fit.net_reports.begin(), fit.net_reports.end());
    csv::write_fit_reports(os, reports);
    write_text(a.report, os.str());
  }

  double worst = 0.0;
  for (const auto& r : fit.cpu_reports) worst = std::max(worst, r.residual_rms);
  const auto& p = fit.profile;
  std::cout << "fitted " << p.cpu_curves.size() << " CPU curves of degree " << a.degree
            << " (worst relative residual RMS " << text::format_double(worst) << ")\n"
            << "baseline " << text::format_double(p.baseline) << " W, spread "
            << text::format_double(p.baseline_spread) << " W\n"
            << "disk entries " << p.disk.entries.size() << ", network entries " << p.network.entries.size() << '\n';
  for (const auto& w : fit.warnings) warn(w);
  return kOk;
}

}  // namespace powercal::cli
