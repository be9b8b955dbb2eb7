// SPDX-License-Identifier: Apache-2.0

#include "scsim/harness.hpp"

#include "scsim/oracle.hpp"
#include "scsim/policy.hpp"
#include "scsim/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <utility>

namespace scsim {

namespace {

int p2_bucket(double p2) {
  int bucket = 0;
  for (int b = 1; b < 5; ++b) {
    if (p2 >= kP2BucketEdges[b]) bucket = b;
  }
  return bucket;
}

double top_two_power(const Vec& p) {
  if (p.size() == 1) return 1.0;
  double first = -1.0, second = -1.0;
  for (Index l = 0; l < p.size(); ++l) {
    if (p[l] > first) {
      second = first;
      first = p[l];
    } else if (p[l] > second) {
      second = p[l];
    }
  }
  return first + second;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (const char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string group_letter(int group) { return std::string(1, static_cast<char>('A' + group)); }

void write_csv_files(const std::filesystem::path& out_dir,
                     const std::vector<std::string>& sweep_labels,
                     const std::vector<const ExperimentReport*>& reports) {
  std::string throughput = "sweep_value,user_id,group,throughput\n";
  std::string sched = "sweep_value,group_counts,probability\n";
  std::string p2 = "sweep_value,bucket_lo,bucket_hi,probability\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ExperimentReport& report = *reports[i];
    const std::string& label = sweep_labels[i];
    for (std::size_t user = 0; user < report.per_user_throughput.size(); ++user) {
      throughput += csv_field(label) + "," + std::to_string(user) + "," +
                    csv_field(group_letter(report.user_group[user])) + "," +
                    format_double(report.per_user_throughput[user]) + "\n";
    }
    for (const auto& [counts, probability] : report.sched_count_dist) {
      std::string joined;
      for (std::size_t g = 0; g < counts.size(); ++g) {
        if (g > 0) joined += ' ';
        joined += std::to_string(counts[g]);
      }
      sched += csv_field(label) + "," + csv_field(joined) + "," + format_double(probability) + "\n";
    }
    for (std::size_t b = 0; b < report.p2_dist.size(); ++b) {
      p2 += csv_field(label) + "," + format_double(kP2BucketEdges[b]) + "," +
            format_double(kP2BucketEdges[b + 1]) + "," + format_double(report.p2_dist[b]) + "\n";
    }
  }
  atomic_write(out_dir / "throughput.csv", throughput);
  atomic_write(out_dir / "sched_count_dist.csv", sched);
  atomic_write(out_dir / "p2_dist.csv", p2);
}

}  // namespace

ExperimentReport run_experiment(const ScenarioConfig& config) {
  validate(config);
  const std::vector<FadingSpec> fading = build_scenario(config);
  const std::vector<int> groups = group_of_user(config);
  const Index n_users = static_cast<Index>(fading.size());
  const int n_groups = static_cast<int>(config.groups.size());
  const bool superposition = config.policy.kind == PolicyKind::kSuperposition ||
                             config.policy.kind == PolicyKind::kSuperpositionCapped;

  BlockFadingChannel channel(fading, config.seed);
  ThroughputTracker tracker(n_users, config.window);
  Vec total = Vec::Zero(n_users);
  std::map<std::vector<int>, long long> count_hits;
  std::array<long long, 5> p2_hits{};
  long long dominance_violations = 0;
  std::vector<int> scheduled_per_group(n_groups);

  const auto start = std::chrono::steady_clock::now();
  for (long long n = 0; n < config.n_blocks; ++n) {
    const ChannelState state = channel.sample_block();
    std::optional<BlockDecision> decision;
    try {
      decision.emplace(schedule_block(config.policy, state, tracker, n));
    } catch (const std::exception& error) {
      throw contract_error("block " + std::to_string(n) + ": " + error.what());
    }
    if (n >= config.window) {
      total += decision->rates.r;
      std::fill(scheduled_per_group.begin(), scheduled_per_group.end(), 0);
      for (Index l = 0; l < n_users; ++l) {
        if (decision->alloc.p[l] > config.scheduled_threshold) ++scheduled_per_group[groups[l]];
      }
      ++count_hits[scheduled_per_group];
      ++p2_hits[p2_bucket(top_two_power(decision->alloc.p))];
      if (superposition) {
        const WeightVector weights = weights_from_utility(config.policy.utility, tracker);
        double best_vertex = 0.0;
        for (Index l = 0; l < n_users; ++l) {
          best_vertex = std::max(best_vertex, weights.beta[l] * log2_1p(state.snr[l]));
        }
        const double objective = sc_objective_any(state, weights, decision->alloc);
        if (objective + kCompareTol * std::max(1.0, std::abs(objective)) < best_vertex) {
          ++dominance_violations;
        }
      }
    }
    tracker.update(decision->rates);
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const double measured = static_cast<double>(config.n_blocks - config.window);
  ExperimentReport report;
  report.per_user_throughput.assign(n_users, 0.0);
  for (Index l = 0; l < n_users; ++l) report.per_user_throughput[l] = total[l] / measured;
  report.aggregate_throughput = 0.0;
  for (const double r : report.per_user_throughput) report.aggregate_throughput += r;
  report.group_throughput.assign(n_groups, 0.0);
  for (Index l = 0; l < n_users; ++l) {
    report.group_throughput[groups[l]] += report.per_user_throughput[l];
  }
  for (int g = 0; g < n_groups; ++g) report.group_throughput[g] /= config.groups[g].count;
  report.user_group = groups;
  for (const auto& [counts, hits] : count_hits) {
    report.sched_count_dist[counts] = static_cast<double>(hits) / measured;
  }
  for (std::size_t b = 0; b < p2_hits.size(); ++b) {
    report.p2_dist[b] = static_cast<double>(p2_hits[b]) / measured;
  }
  report.runtime.blocks = config.n_blocks;
  report.runtime.wall_seconds = wall;
  report.runtime.blocks_per_second = wall > 0.0 ? config.n_blocks / wall : 0.0;
  report.runtime.dominance_violations = dominance_violations;
  return report;
}

SweepSeries run_sweep(const ScenarioConfig& config, const std::string& parameter,
                      const std::vector<double>& values) {
  const int group = sweep_group_index(parameter);
  if (group >= static_cast<int>(config.groups.size())) {
    throw config_error("sweep.parameter: group out of range");
  }
  std::vector<std::future<ExperimentReport>> futures;
  futures.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ScenarioConfig point = config;
    point.sweep.reset();
    point.groups[group].mean_snr_db = values[i];
    point.seed = config.seed + i;  // per-point seed rule, point 0 matches run_experiment
    futures.push_back(
        std::async(std::launch::async, [point = std::move(point)] { return run_experiment(point); }));
  }
  SweepSeries series{parameter, values, {}};
  series.reports.reserve(values.size());
  for (auto& future : futures) series.reports.push_back(future.get());
  return series;
}

double kkt_residual(const AllocationProblem& problem, const PowerAllocation& sorted_alloc) {
  const double step = 1e-7;
  const Index n = problem.size();
  Vec p = sorted_alloc.p;
  const double base = sc_objective_raw(problem.snr, problem.beta, p);
  Vec derivative(n);
  for (Index l = 0; l < n; ++l) {
    const double saved = p[l];
    if (saved >= step) {
      p[l] = saved + step;
      const double up = sc_objective_raw(problem.snr, problem.beta, p);
      p[l] = saved - step;
      const double down = sc_objective_raw(problem.snr, problem.beta, p);
      derivative[l] = (up - down) / (2.0 * step);
    } else {
      p[l] = saved + step;
      const double up = sc_objective_raw(problem.snr, problem.beta, p);
      derivative[l] = (up - base) / step;
    }
    p[l] = saved;
  }
  double level = 0.0;
  Index actives = 0;
  for (Index l = 0; l < n; ++l) {
    if (sorted_alloc.p[l] > 0.0) {
      level += derivative[l];
      ++actives;
    }
  }
  level /= static_cast<double>(actives);
  double residual = 0.0;
  for (Index l = 0; l < n; ++l) {
    if (sorted_alloc.p[l] > 0.0) {
      residual = std::max(residual, std::abs(derivative[l] - level));
    } else {
      residual = std::max(residual, std::max(0.0, derivative[l] - level));
    }
  }
  return residual;
}

ReferenceInstance seven_user_instance() {
  Vec snr(7), beta(7);
  snr << 1.7, 3.3, 4.4, 6.7, 7.7, 8.3, 8.6;
  beta << 6.0, 29.7, 26.5, 15.4, 4.6, 17.6, 12.2;
  return {ChannelState(std::move(snr)), WeightVector(std::move(beta))};
}

namespace {

struct RandomInstance {
  ChannelState state;
  WeightVector weights;
};

RandomInstance random_instance(std::mt19937_64& engine, int l_min, int l_max) {
  const int span = l_max - l_min + 1;
  const Index n = l_min + static_cast<Index>(uniform_unit(engine) * span);
  Vec snr(n), beta(n);
  for (Index l = 0; l < n; ++l) {
    const double mean = 0.5 + 9.5 * uniform_unit(engine);
    snr[l] = exponential_sample(engine, mean);
    beta[l] = 0.1 + 29.9 * uniform_unit(engine);
  }
  return {ChannelState(std::move(snr)), WeightVector(std::move(beta))};
}

bool bitwise_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

class FailureLog {
 public:
  explicit FailureLog(std::size_t cap) : cap_(cap) {}

  void add(long long instance, const std::string& message) {
    ++count_;
    if (messages_.size() < cap_) {
      messages_.push_back("instance " + std::to_string(instance) + ": " + message);
    }
  }

  long long count() const { return count_; }
  std::vector<std::string> take() { return std::move(messages_); }

 private:
  std::size_t cap_;
  long long count_ = 0;
  std::vector<std::string> messages_;
};

}  // namespace

VerifyReport verify(const VerifyOptions& options) {
  VerifyReport report;
  report.instances = options.instances;
  FailureLog failures(25);
  std::mt19937_64 engine(mix64(options.seed));

  for (int i = 0; i < options.instances; ++i) {
    const RandomInstance instance = random_instance(engine, options.l_min, options.l_max);
    const Index n = instance.state.size();
    PurgeDiagnostics diag;
    PowerAllocation alloc = [&] {
      try {
        return allocate(instance.state, instance.weights, &diag);
      } catch (const std::exception& error) {
        failures.add(i, std::string("allocate threw: ") + error.what());
        return PowerAllocation::vertex(0, n);
      }
    }();
    const double objective = sc_objective_any(instance.state, instance.weights, alloc);

    // Simplex feasibility (also enforced by construction).
    double sum = 0.0;
    bool nonneg = true;
    for (Index l = 0; l < n; ++l) {
      sum += alloc.p[l];
      nonneg = nonneg && alloc.p[l] >= 0.0;
    }
    if (std::abs(sum - 1.0) > kSimplexTol || !nonneg) failures.add(i, "simplex violated");

    // Survivor structure of the purge sweeps.
    for (std::size_t t = 1; t < diag.after_weight_purge.size(); ++t) {
      const Index a = diag.after_weight_purge[t - 1];
      const Index b = diag.after_weight_purge[t];
      if (!(diag.marginal_full[a] > diag.marginal_full[b])) {
        failures.add(i, "weight purge left non-decreasing full marginals");
      }
    }
    for (std::size_t t = 1; t < diag.after_marginal_purge.size(); ++t) {
      const Index a = diag.after_marginal_purge[t - 1];
      const Index b = diag.after_marginal_purge[t];
      if (!(diag.marginal_zero[a] < diag.marginal_zero[b])) {
        failures.add(i, "marginal purge left non-increasing zero marginals");
      }
    }
    for (std::size_t t = 0; t < diag.crossings.size(); ++t) {
      if (!(diag.crossings[t] > 0.0 && diag.crossings[t] < 1.0)) {
        failures.add(i, "crossing outside (0, 1)");
      }
      if (t > 0 && !(diag.crossings[t] < diag.crossings[t - 1])) {
        failures.add(i, "crossings not strictly decreasing");
      }
    }

    // Every simplex vertex is feasible, so the optimum dominates all of them.
    double best_vertex = 0.0;
    for (Index l = 0; l < n; ++l) {
      best_vertex =
          std::max(best_vertex, instance.weights.beta[l] * log2_1p(instance.state.snr[l]));
    }
    if (objective + kCompareTol * std::max(1.0, std::abs(objective)) < best_vertex) {
      failures.add(i, "objective below best vertex");
    }

    // Permutation equivariance (exact).
    {
      std::vector<Index> perm(n);
      std::iota(perm.begin(), perm.end(), Index{0});
      for (Index l = n - 1; l > 0; --l) {
        const Index swap_with = static_cast<Index>(uniform_unit(engine) * (l + 1));
        std::swap(perm[l], perm[swap_with]);
      }
      Vec snr_perm(n), beta_perm(n);
      for (Index l = 0; l < n; ++l) {
        snr_perm[perm[l]] = instance.state.snr[l];
        beta_perm[perm[l]] = instance.weights.beta[l];
      }
      const PowerAllocation permuted =
          allocate(ChannelState(std::move(snr_perm)), WeightVector(std::move(beta_perm)));
      Vec expected(n);
      for (Index l = 0; l < n; ++l) expected[perm[l]] = alloc.p[l];
      if (!bitwise_equal(permuted.p, expected)) failures.add(i, "permutation equivariance violated");
    }

    // Common weight rescaling by a power of two leaves the result bit-identical.
    {
      const int exponent = 1 + static_cast<int>(uniform_unit(engine) * 3.0);
      const double scale = uniform_unit(engine) < 0.5 ? std::ldexp(1.0, exponent)
                                                      : std::ldexp(1.0, -exponent);
      const PowerAllocation rescaled =
          allocate(instance.state, WeightVector(instance.weights.beta * scale));
      if (!bitwise_equal(rescaled.p, alloc.p)) failures.add(i, "weight rescaling changed result");
    }

    // Stationarity at the returned point.
    const AllocationProblem problem(instance.state, instance.weights);
    Vec sorted_p(n);
    for (Index l = 0; l < n; ++l) sorted_p[l] = alloc.p[problem.perm[l]];
    const double residual = kkt_residual(problem, PowerAllocation(std::move(sorted_p)));
    report.max_kkt_residual = std::max(report.max_kkt_residual, residual);
    if (residual > kVerifyKktTol) failures.add(i, "KKT residual " + std::to_string(residual));

    // Brute-force oracle can approach the optimum only from below.
    {
      Vec snr_sorted(n), beta_sorted(n);
      for (Index l = 0; l < n; ++l) {
        snr_sorted[l] = problem.snr[l];
        beta_sorted[l] = problem.beta[l];
      }
      const OracleSolution oracle = cumulative_dp_maximize(
          ChannelState(std::move(snr_sorted)), WeightVector(std::move(beta_sorted)),
          options.resolution);
      const double gap = std::abs(objective - oracle.objective) / std::abs(objective);
      report.max_relative_gap = std::max(report.max_relative_gap, gap);
      if (gap > kVerifyGapTol) failures.add(i, "oracle gap " + std::to_string(gap));
    }

    // Two-user closed form must match the pipeline.
    if (n == 2) {
      const PowerAllocation closed = allocate_two_user(instance.state, instance.weights);
      const double diff = (closed.p - alloc.p).abs().maxCoeff();
      report.max_two_user_diff = std::max(report.max_two_user_diff, diff);
      if (diff > kVerifyTwoUserTol) failures.add(i, "two-user closed form deviates");
    }
  }

  // Fixed seven-user reference instance.
  {
    const ReferenceInstance ref = seven_user_instance();
    PurgeDiagnostics diag;
    const PowerAllocation alloc = allocate(ref.state, ref.weights, &diag);
    const std::vector<Index> expect_stage1 = {1, 2, 5, 6};
    const std::vector<Index> expect_final = {1, 2, 5};
    if (diag.after_weight_purge != expect_stage1) failures.add(-1, "reference: stage-1 survivors");
    if (diag.after_marginal_purge != expect_final || diag.after_crossing_purge != expect_final) {
      failures.add(-1, "reference: final active set");
    }
    if (diag.crossings.size() != 2 || std::abs(diag.crossings[0] - 0.40) > 0.005 ||
        std::abs(diag.crossings[1] - 0.09) > 0.005) {
      failures.add(-1, "reference: crossings");
    }
    if (std::abs(alloc.p[1] - 0.60) > 0.005 || std::abs(alloc.p[2] - 0.31) > 0.005 ||
        std::abs(alloc.p[5] - 0.09) > 0.005) {
      failures.add(-1, "reference: power fractions");
    }
  }

  report.invariant_violations = failures.count();
  report.failures = failures.take();
  report.passed = report.invariant_violations == 0;
  return report;
}

void emit(const ExperimentReport& report, Format format, const std::filesystem::path& out_dir) {
  if (format == Format::kJson) {
    atomic_write(out_dir / "report.json", to_json(report).dump(2) + "\n");
  } else {
    write_csv_files(out_dir, {""}, {&report});
  }
}

void emit(const SweepSeries& series, Format format, const std::filesystem::path& out_dir) {
  if (format == Format::kJson) {
    atomic_write(out_dir / "sweep.json", to_json(series).dump(2) + "\n");
  } else {
    std::vector<std::string> labels;
    std::vector<const ExperimentReport*> reports;
    for (std::size_t i = 0; i < series.reports.size(); ++i) {
      labels.push_back(format_double(series.values[i]));
      reports.push_back(&series.reports[i]);
    }
    write_csv_files(out_dir, labels, reports);
  }
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& path) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* candidate : known) {
      if (key == candidate) {
        ok = true;
        break;
      }
    }
    if (!ok) throw config_error(path + ": unknown key '" + key + "'");
  }
}

PolicySpec parse_policy(const json& j) {
  if (!j.is_object()) throw config_error("policy: must be an object");
  reject_unknown_keys(j, {"kind", "utility", "k_max", "greedy"}, "policy");
  PolicySpec policy;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "RR") {
    policy.kind = PolicyKind::kRoundRobin;
  } else if (kind == "MaxRate") {
    policy.kind = PolicyKind::kMaxRate;
  } else if (kind == "PF_TS") {
    policy.kind = PolicyKind::kPfTimeSharing;
  } else if (kind == "SC") {
    policy.kind = PolicyKind::kSuperposition;
  } else if (kind == "SC_capped") {
    policy.kind = PolicyKind::kSuperpositionCapped;
  } else {
    throw config_error("policy.kind: unknown value '" + kind + "'");
  }
  const bool vertex_only =
      policy.kind == PolicyKind::kRoundRobin || policy.kind == PolicyKind::kMaxRate;
  if (j.contains("utility")) {
    if (vertex_only) throw config_error("policy.utility: not applicable to " + kind);
    const std::string utility = j.at("utility").get<std::string>();
    if (utility == "proportional_fair") {
      policy.utility = Utility::kProportionalFair;
    } else if (utility == "sum_rate") {
      policy.utility = Utility::kSumRate;
    } else {
      throw config_error("policy.utility: unknown value '" + utility + "'");
    }
  }
  if (policy.kind == PolicyKind::kSuperpositionCapped) {
    if (!j.contains("k_max")) throw config_error("policy.k_max: required for SC_capped");
    policy.k_max = j.at("k_max").get<int>();
    if (j.contains("greedy")) policy.greedy = j.at("greedy").get<bool>();
  } else {
    if (j.contains("k_max")) throw config_error("policy.k_max: only valid for SC_capped");
    if (j.contains("greedy")) throw config_error("policy.greedy: only valid for SC_capped");
  }
  return policy;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) throw config_error("config: must be a JSON object");
  reject_unknown_keys(
      j, {"groups", "n_blocks", "window", "seed", "policy", "sweep", "scheduled_threshold"},
      "config");
  ScenarioConfig config;
  if (!j.contains("groups")) throw config_error("groups: required");
  if (!j.at("groups").is_array()) throw config_error("groups: must be an array");
  for (std::size_t g = 0; g < j.at("groups").size(); ++g) {
    const json& entry = j.at("groups")[g];
    const std::string path = "groups[" + std::to_string(g) + "]";
    if (!entry.is_object()) throw config_error(path + ": must be an object");
    reject_unknown_keys(entry, {"count", "mean_snr_db"}, path);
    GroupConfig group;
    if (!entry.contains("count")) throw config_error(path + ".count: required");
    group.count = entry.at("count").get<int>();
    if (!entry.contains("mean_snr_db")) throw config_error(path + ".mean_snr_db: required");
    group.mean_snr_db = entry.at("mean_snr_db").get<double>();
    config.groups.push_back(group);
  }
  if (j.contains("n_blocks")) config.n_blocks = j.at("n_blocks").get<long long>();
  if (j.contains("window")) config.window = j.at("window").get<int>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (!j.contains("policy")) throw config_error("policy: required");
  config.policy = parse_policy(j.at("policy"));
  if (j.contains("scheduled_threshold")) {
    config.scheduled_threshold = j.at("scheduled_threshold").get<double>();
  }
  if (j.contains("sweep")) {
    const json& sweep = j.at("sweep");
    if (!sweep.is_object()) throw config_error("sweep: must be an object");
    reject_unknown_keys(sweep, {"parameter", "values"}, "sweep");
    SweepConfig parsed;
    if (!sweep.contains("parameter")) throw config_error("sweep.parameter: required");
    parsed.parameter = sweep.at("parameter").get<std::string>();
    if (!sweep.contains("values")) throw config_error("sweep.values: required");
    parsed.values = sweep.at("values").get<std::vector<double>>();
    config.sweep = std::move(parsed);
  }
  validate(config);
  return config;
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json parsed;
  try {
    parsed = json::parse(buffer.str());
  } catch (const json::parse_error& error) {
    throw config_error("config file " + path.string() + ": " + error.what());
  }
  return parse_config(parsed);
}

}  // namespace scsim
