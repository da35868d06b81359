#pragma once

#include <string>

#include "hawkesn/estimation.hpp"
#include "hawkesn/size_distribution.hpp"

namespace hawkesn {

[[nodiscard]] std::string size_distribution_to_csv(const SizeDistribution& d);
[[nodiscard]] std::string size_distribution_to_json(const SizeDistribution& d);

[[nodiscard]] std::string trajectory_to_csv(const SirTrajectory& tr);

/// FitReport as JSON with the fields of the type (params, log_likelihood,
/// starts, verdict, statistic).
[[nodiscard]] std::string fit_report_to_json(const FitReport& report, int indent = 2);

void write_file(const std::string& path, const std::string& content);
[[nodiscard]] std::string read_file(const std::string& path);

}  // namespace hawkesn
