// SPDX-License-Identifier: Apache-2.0

#include "scsim/report.hpp"

#include "scsim/types.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

namespace scsim {

double ExperimentReport::p2_tail(double threshold) const {
  double tail = 0.0;
  bool matched = false;
  for (std::size_t b = 0; b < p2_dist.size(); ++b) {
    if (kP2BucketEdges[b] == threshold) matched = true;
    if (kP2BucketEdges[b] >= threshold) tail += p2_dist[b];
  }
  if (!matched) throw contract_error("p2_tail: threshold must be a bucket edge");
  return tail;
}

json to_json(const ExperimentReport& report) {
  json j;
  j["per_user_throughput"] = report.per_user_throughput;
  j["aggregate_throughput"] = report.aggregate_throughput;
  j["group_throughput"] = report.group_throughput;
  j["user_group"] = report.user_group;
  json counts = json::array();
  for (const auto& [key, probability] : report.sched_count_dist) {
    counts.push_back({{"counts", key}, {"probability", probability}});
  }
  j["sched_count_dist"] = std::move(counts);
  json buckets = json::array();
  for (std::size_t b = 0; b < report.p2_dist.size(); ++b) {
    buckets.push_back({{"lo", kP2BucketEdges[b]},
                       {"hi", kP2BucketEdges[b + 1]},
                       {"probability", report.p2_dist[b]}});
  }
  j["p2_dist"] = std::move(buckets);
  j["runtime_stats"] = {{"blocks", report.runtime.blocks},
                        {"wall_seconds", report.runtime.wall_seconds},
                        {"blocks_per_second", report.runtime.blocks_per_second},
                        {"dominance_violations", report.runtime.dominance_violations}};
  return j;
}

json to_json(const SweepSeries& series) {
  json j;
  j["parameter"] = series.parameter;
  j["values"] = series.values;
  json reports = json::array();
  for (const ExperimentReport& report : series.reports) reports.push_back(to_json(report));
  j["reports"] = std::move(reports);
  return j;
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport report;
  report.per_user_throughput = j.at("per_user_throughput").get<std::vector<double>>();
  report.aggregate_throughput = j.at("aggregate_throughput").get<double>();
  report.group_throughput = j.at("group_throughput").get<std::vector<double>>();
  report.user_group = j.at("user_group").get<std::vector<int>>();
  for (const json& entry : j.at("sched_count_dist")) {
    report.sched_count_dist[entry.at("counts").get<std::vector<int>>()] =
        entry.at("probability").get<double>();
  }
  const json& buckets = j.at("p2_dist");
  for (std::size_t b = 0; b < report.p2_dist.size(); ++b) {
    report.p2_dist[b] = buckets.at(b).at("probability").get<double>();
  }
  const json& runtime = j.at("runtime_stats");
  report.runtime.blocks = runtime.at("blocks").get<long long>();
  report.runtime.wall_seconds = runtime.at("wall_seconds").get<double>();
  report.runtime.blocks_per_second = runtime.at("blocks_per_second").get<double>();
  report.runtime.dominance_violations = runtime.at("dominance_violations").get<long long>();
  return report;
}

SweepSeries series_from_json(const json& j) {
  SweepSeries series;
  series.parameter = j.at("parameter").get<std::string>();
  series.values = j.at("values").get<std::vector<double>>();
  for (const json& entry : j.at("reports")) series.reports.push_back(report_from_json(entry));
  return series;
}

std::string canonical_json(const ExperimentReport& report) {
  json j = to_json(report);
  j.erase("runtime_stats");
  return j.dump();
}

std::string canonical_json(const SweepSeries& series) {
  json j;
  j["parameter"] = series.parameter;
  j["values"] = series.values;
  json reports = json::array();
  for (const ExperimentReport& report : series.reports) {
    json r = to_json(report);
    r.erase("runtime_stats");
    reports.push_back(std::move(r));
  }
  j["reports"] = std::move(reports);
  return j.dump();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw io_error("cannot create directory " + path.parent_path().string());
  }
  const std::filesystem::path temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + temp.string() + " for writing");
    out << content;
    if (!out.flush()) throw io_error("write failed for " + temp.string());
  }
  std::filesystem::rename(temp, path, ec);
  if (ec) throw io_error("cannot rename " + temp.string() + " to " + path.string());
}

}  // namespace scsim
