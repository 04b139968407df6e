#pragma once

#include <string>
#include <vector>

#include "densepath/geometry.hpp"

namespace densepath {

inline constexpr double kMissThreshold = 2.0;  // meters, fixed-FDE convention

// Minimum over predictions of the final-point Euclidean distance.
double min_fde(const std::vector<std::vector<Vec2>>& preds, const std::vector<Vec2>& gt);
// Minimum over predictions of the mean pointwise Euclidean distance.
double min_ade(const std::vector<std::vector<Vec2>>& preds, const std::vector<Vec2>& gt);

struct ScenarioMetrics {
  std::string id;
  double min_ade = 0.0;
  double min_fde = 0.0;
  bool miss = false;
};

struct MetricReport {
  double min_ade = 0.0;   // mean over scenarios
  double min_fde = 0.0;   // mean over scenarios
  double miss_rate = 0.0;
  int count = 0;
  std::vector<ScenarioMetrics> per_scenario;
};

// Fraction of scenarios whose minFDE exceeds the threshold.
double miss_rate(const std::vector<std::pair<std::vector<std::vector<Vec2>>, std::vector<Vec2>>>& batch,
                 double threshold = kMissThreshold);

MetricReport aggregate_metrics(const std::vector<ScenarioMetrics>& per_scenario);

std::string report_to_json(const MetricReport& r);
void write_report_json(const std::string& path, const MetricReport& r);
void write_report_csv(const std::string& path, const MetricReport& r);

}  // namespace densepath
