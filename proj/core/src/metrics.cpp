#include "densepath/metrics.hpp"

#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace densepath {

namespace {

void check_batch(const std::vector<std::vector<Vec2>>& preds, const std::vector<Vec2>& gt,
                 const char* what) {
  if (preds.empty()) throw std::invalid_argument(std::string(what) + ": no predictions");
  if (gt.empty()) throw std::invalid_argument(std::string(what) + ": empty ground truth");
  for (const auto& p : preds) {
    if (p.size() != gt.size()) {
      throw std::invalid_argument(std::string(what) + ": horizon mismatch, prediction has " +
                                  std::to_string(p.size()) + " points, ground truth " +
                                  std::to_string(gt.size()));
    }
  }
}

}  // namespace

double min_fde(const std::vector<std::vector<Vec2>>& preds, const std::vector<Vec2>& gt) {
  check_batch(preds, gt, "min_fde");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : preds) best = std::min(best, dist(p.back(), gt.back()));
  return best;
}

double min_ade(const std::vector<std::vector<Vec2>>& preds, const std::vector<Vec2>& gt) {
  check_batch(preds, gt, "min_ade");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : preds) {
    double sum = 0.0;
    for (std::size_t t = 0; t < gt.size(); ++t) sum += dist(p[t], gt[t]);
    best = std::min(best, sum / static_cast<double>(gt.size()));
  }
  return best;
}

double miss_rate(const std::vector<std::pair<std::vector<std::vector<Vec2>>, std::vector<Vec2>>>& batch,
                 double threshold) {
  if (batch.empty()) throw std::invalid_argument("miss_rate: empty batch");
  int misses = 0;
  for (const auto& [preds, gt] : batch) {
    if (min_fde(preds, gt) > threshold) ++misses;
  }
  return static_cast<double>(misses) / static_cast<double>(batch.size());
}

MetricReport aggregate_metrics(const std::vector<ScenarioMetrics>& per_scenario) {
  if (per_scenario.empty()) throw std::invalid_argument("aggregate_metrics: empty input");
  MetricReport r;
  r.per_scenario = per_scenario;
  r.count = static_cast<int>(per_scenario.size());
  int misses = 0;
  for (const auto& m : per_scenario) {
    r.min_ade += m.min_ade;
    r.min_fde += m.min_fde;
    if (m.miss) ++misses;
  }
  r.min_ade /= r.count;
  r.min_fde /= r.count;
  r.miss_rate = static_cast<double>(misses) / r.count;
  return r;
}

std::string report_to_json(const MetricReport& r) {
  nlohmann::json j;
  j["min_ade"] = r.min_ade;
  j["min_fde"] = r.min_fde;
  j["miss_rate"] = r.miss_rate;
  j["count"] = r.count;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& m : r.per_scenario) {
    per.push_back({{"id", m.id}, {"min_ade", m.min_ade}, {"min_fde", m.min_fde}, {"miss", m.miss}});
  }
  j["per_scenario"] = std::move(per);
  return j.dump();
}

void write_report_json(const std::string& path, const MetricReport& r) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << report_to_json(r) << '\n';
}

void write_report_csv(const std::string& path, const MetricReport& r) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "scenario_id,min_ade,min_fde,miss\n";
  for (const auto& m : r.per_scenario) {
    os << m.id << ',' << m.min_ade << ',' << m.min_fde << ',' << (m.miss ? 1 : 0) << '\n';
  }
}

}  // namespace densepath
