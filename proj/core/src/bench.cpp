#include "beliefplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "beliefplan/rng.hpp"

namespace beliefplan {

GridDims realize_dims(std::size_t target_states, unsigned orientations) {
  const std::size_t cells =
      (target_states + orientations - 1) / orientations;
  auto side = static_cast<std::size_t>(
      std::llround(std::sqrt(static_cast<double>(cells))));
  side = std::max<std::size_t>(2, side);
  const std::size_t height = std::max<std::size_t>(2, (cells + side - 1) / side);
  return GridDims{side, height, orientations};
}

namespace {

BeliefState uniform_belief(std::size_t n) {
  return normalize(std::vector<double>(n, 1.0));
}

EpisodeRecord run_policy_episode(PolicyKind policy, const WorldModel& world,
                                 const BeliefState& initial,
                                 StateId true_state, std::uint64_t world_seed,
                                 const BenchConfig& config) {
  SimActor actor(world, true_state, combine_seed(world_seed, 101));
  if (policy == PolicyKind::random) {
    RandomPolicyConfig rc;
    rc.p_goal = config.p_goal;
    rc.step_cap = config.random_step_cap;
    rc.seed = combine_seed(world_seed, 202);
    return run_random_episode(initial, world, actor, rc);
  }
  ExecutorConfig ec;
  ec.planner.p_goal = config.p_goal;
  ec.planner.max_expansions = config.max_expansions;
  ec.planner.use_heuristic = policy == PolicyKind::ours;
  ec.planner.use_expansion_cache = config.use_expansion_cache;
  return run_episode(initial, world, actor, ec);
}

}  // namespace

BenchReport run_bench(const BenchConfig& config, std::ostream* progress) {
  BenchReport report;
  report.config = config;
  const std::size_t n_sizes = config.sizes.size();
  const std::size_t n_policies = config.policies.size();
  const std::size_t n_tasks = n_sizes * config.episodes;
  report.rows.resize(n_sizes * n_policies * config.episodes);

  std::atomic<std::size_t> next_task{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t task = next_task.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t size_idx = task / config.episodes;
      const std::size_t episode = task % config.episodes;
      const std::size_t size = config.sizes[size_idx];

      // One world per (size, episode), shared by every policy so the
      // comparison is paired.
      const std::uint64_t world_seed =
          combine_seed(combine_seed(config.seed, size), episode);
      const GridDims dims = realize_dims(size, config.orientations);
      RandomWorld rw = random_world(dims.width, dims.height,
                                    dims.orientations, world_seed);
      rw.spec.p_false_positive = config.p_false_positive;
      rw.spec.p_false_negative = config.p_false_negative;
      rw.spec.p_actuation_failure = config.p_actuation_failure;
      rw.spec.actuation_cost = config.actuation_cost;
      rw.spec.perception_cost = config.perception_cost;
      const WorldModel world = compile_grid_world(rw.spec);
      const BeliefState initial = uniform_belief(world.state_count);

      for (std::size_t pi = 0; pi < n_policies; ++pi) {
        EpisodeRow& row =
            report.rows[(size_idx * n_policies + pi) * config.episodes +
                        episode];
        row.size = size;
        row.policy = config.policies[pi];
        row.seed = world_seed;
        row.record = run_policy_episode(config.policies[pi], world, initial,
                                        rw.true_initial_state, world_seed,
                                        config);
      }

      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress && (finished % 10 == 0 || finished == n_tasks)) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        *progress << "bench: " << finished << "/" << n_tasks
                  << " episode groups done\n";
        progress->flush();
      }
    }
  };

  const std::size_t jobs =
      std::max<std::size_t>(1, std::min(config.jobs, n_tasks));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t si = 0; si < n_sizes; ++si)
    for (std::size_t pi = 0; pi < n_policies; ++pi)
      report.summary.push_back(summarize_rows(config.sizes[si],
                                              config.policies[pi],
                                              report.rows));
  return report;
}

SummaryCell summarize_rows(std::size_t size, PolicyKind policy,
                           const std::vector<EpisodeRow>& rows) {
  SummaryCell cell;
  cell.size = size;
  cell.policy = policy;

  double cost_sum = 0, replans_sum = 0, first_sum = 0, total_sum = 0;
  std::vector<double> call_expansions;
  std::array<double, 3> ordinal_sum{0, 0, 0};

  for (const EpisodeRow& row : rows) {
    if (row.size != size || row.policy != policy) continue;
    ++cell.episodes;
    if (!row.record.success) continue;
    ++cell.successes;
    cost_sum += row.record.cost;
    replans_sum += static_cast<double>(row.record.replans);
    if (!row.record.plan_times.empty()) {
      first_sum += row.record.plan_times.front();
      for (double t : row.record.plan_times) total_sum += t;
    }
    for (std::size_t e : row.record.expansions)
      call_expansions.push_back(static_cast<double>(e));
    for (std::size_t k = 0; k < 3; ++k) {
      if (row.record.plan_times.size() > k + 1) {
        ordinal_sum[k] += row.record.plan_times[k + 1];
        ++cell.replan_ordinal_counts[k];
      }
    }
  }

  if (cell.episodes > 0)
    cell.success_rate =
        static_cast<double>(cell.successes) / static_cast<double>(cell.episodes);
  if (cell.successes > 0) {
    const auto ns = static_cast<double>(cell.successes);
    cell.mean_cost = cost_sum / ns;
    cell.mean_replans = replans_sum / ns;
    cell.mean_first_plan_seconds = first_sum / ns;
    cell.mean_total_plan_seconds = total_sum / ns;
  }
  for (std::size_t k = 0; k < 3; ++k)
    if (cell.replan_ordinal_counts[k] > 0)
      cell.replan_ordinal_seconds[k] =
          ordinal_sum[k] / static_cast<double>(cell.replan_ordinal_counts[k]);

  if (!call_expansions.empty()) {
    std::sort(call_expansions.begin(), call_expansions.end());
    const std::size_t m = call_expansions.size();
    cell.median_expansions =
        m % 2 ? call_expansions[m / 2]
              : 0.5 * (call_expansions[m / 2 - 1] + call_expansions[m / 2]);
  }
  return cell;
}

void write_csv(std::ostream& out, const BenchReport& report) {
  out << "size,policy,seed,success,cost,replans,plan_time_total,expansions,"
         "plan_times_json\n";
  char buf[64];
  for (const EpisodeRow& row : report.rows) {
    double total_time = 0;
    for (double t : row.record.plan_times) total_time += t;
    std::size_t total_exp = 0;
    for (std::size_t e : row.record.expansions) total_exp += e;

    out << row.size << ',' << to_string(row.policy) << ',' << row.seed << ','
        << (row.record.success ? 1 : 0) << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.record.cost);
    out << buf << ',' << row.record.replans << ',';
    std::snprintf(buf, sizeof buf, "%.9f", total_time);
    out << buf << ',' << total_exp << ",\"[";
    for (std::size_t i = 0; i < row.record.plan_times.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.9f", i ? "," : "",
                    row.record.plan_times[i]);
      out << buf;
    }
    out << "]\"\n";
  }
}

void write_summary(std::ostream& out, const BenchReport& report) {
  char line[256];
  std::size_t last_size = static_cast<std::size_t>(-1);
  for (const SummaryCell& c : report.summary) {
    if (c.size != last_size) {
      const GridDims d = realize_dims(c.size, report.config.orientations);
      std::snprintf(line, sizeof line,
                    "== size %zu (%zux%zux%u = %zu states) ==\n", c.size,
                    d.width, d.height, d.orientations,
                    d.width * d.height * d.orientations);
      out << line
          << "policy    success   mean_cost  mean_replans  first_plan_s  "
             "med_expand  replan1_s  replan2_s  replan3_s\n";
      last_size = c.size;
    }
    std::snprintf(line, sizeof line,
                  "%-8s  %3zu/%-4zu  %9.2f  %12.2f  %12.4f  %10.0f  %9.4f  "
                  "%9.4f  %9.4f\n",
                  std::string(to_string(c.policy)).c_str(), c.successes,
                  c.episodes, c.mean_cost, c.mean_replans,
                  c.mean_first_plan_seconds, c.median_expansions,
                  c.replan_ordinal_seconds[0], c.replan_ordinal_seconds[1],
                  c.replan_ordinal_seconds[2]);
    out << line;
  }
}

}  // namespace beliefplan
