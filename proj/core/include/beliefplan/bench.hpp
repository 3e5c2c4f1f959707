#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "beliefplan/baselines.hpp"

namespace beliefplan {

/// Active-localization benchmark: random grid worlds at the requested state
/// counts, planner policies vs. the random baseline, aggregate statistics
/// over episodes.
struct BenchConfig {
  std::vector<std::size_t> sizes{100, 1000};  // target |S| per tier
  std::size_t episodes = 100;
  std::uint64_t seed = 1;
  std::vector<PolicyKind> policies{PolicyKind::ours, PolicyKind::uniform,
                                   PolicyKind::random};
  unsigned orientations = 4;

  double p_goal = 0.95;
  double p_false_positive = 0.01;
  double p_false_negative = 0.01;
  double p_actuation_failure = 0.02;
  double actuation_cost = 10.0;
  double perception_cost = 1.0;

  std::size_t max_expansions = 1'000'000;
  std::size_t random_step_cap = 500;
  bool use_expansion_cache = true;
  std::size_t jobs = 1;  // worker threads; results are order-independent
};

struct EpisodeRow {
  std::size_t size = 0;  // the *requested* tier, not width*height*orients
  PolicyKind policy = PolicyKind::ours;
  std::uint64_t seed = 0;  // world seed; same across policies per episode
  EpisodeRecord record;
};

/// Per (size, policy) aggregate. Means are over successful episodes only,
/// matching how localization benchmarks usually report cost/replan numbers
/// (failed episodes have no meaningful cost).
struct SummaryCell {
  std::size_t size = 0;
  PolicyKind policy = PolicyKind::ours;
  std::size_t episodes = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_cost = 0.0;
  double mean_replans = 0.0;
  double mean_first_plan_seconds = 0.0;
  double mean_total_plan_seconds = 0.0;
  double median_expansions = 0.0;  // median over individual plan calls
  /// Mean duration of the 1st/2nd/3rd replan (not the initial plan), over
  /// successful episodes that reached that many replans.
  std::array<double, 3> replan_ordinal_seconds{0.0, 0.0, 0.0};
  std::array<std::size_t, 3> replan_ordinal_counts{0, 0, 0};
};

struct BenchReport {
  BenchConfig config;
  std::vector<EpisodeRow> rows;      // ordered by (size, policy, episode)
  std::vector<SummaryCell> summary;  // same ordering
};

struct GridDims {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned orientations = 4;
};

/// Nearest square-ish grid whose cell count * orientations covers the
/// target: 100 -> 5x5x4, 1000 -> 16x16x4 (1024 states), 10000 -> 50x50x4.
GridDims realize_dims(std::size_t target_states, unsigned orientations);

BenchReport run_bench(const BenchConfig& config,
                      std::ostream* progress = nullptr);

/// CSV schema:
/// size,policy,seed,success,cost,replans,plan_time_total,expansions,plan_times_json
/// One row per episode; expansions is the per-episode total; plan_times_json
/// is a quoted JSON array of per-call seconds. Everything except the two
/// timing columns is byte-deterministic for a fixed config.
void write_csv(std::ostream& out, const BenchReport& report);

/// Human-readable per-tier table.
void write_summary(std::ostream& out, const BenchReport& report);

/// Recompute a summary cell from episode rows (used by the acceptance
/// checks to aggregate with custom filters).
SummaryCell summarize_rows(std::size_t size, PolicyKind policy,
                           const std::vector<EpisodeRow>& rows);

}  // namespace beliefplan
