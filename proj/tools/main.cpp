// Command-line front end: benchmark runner, single-episode runner, map
// generator, and one-shot planner. See README for usage examples.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beliefplan/bench.hpp"
#include "beliefplan/map_io.hpp"

namespace bp = beliefplan;

namespace {

struct NoiseOverrides {
  std::optional<double> p_fp, p_fn, p_fail, cost_act, cost_perc;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--fp", p_fp, "Detector false-positive rate override");
    cmd->add_option("--fn", p_fn, "Detector false-negative rate override");
    cmd->add_option("--fail-prob", p_fail,
                    "Actuation failure probability override");
    cmd->add_option("--cost-act", cost_act, "Actuation action cost override");
    cmd->add_option("--cost-perc", cost_perc,
                    "Perception action cost override");
  }

  bool any() const {
    return p_fp || p_fn || p_fail || cost_act || cost_perc;
  }

  // Overrides recompile the world, so they need grid provenance.
  bp::WorldModel apply(const bp::WorldModel& model) const {
    if (!any()) return model;
    if (!model.grid)
      throw bp::SpecError(
          "noise/cost overrides need a grid map (dense maps are explicit)");
    bp::GridWorldSpec spec = *model.grid;
    if (p_fp) spec.p_false_positive = *p_fp;
    if (p_fn) spec.p_false_negative = *p_fn;
    if (p_fail) spec.p_actuation_failure = *p_fail;
    if (cost_act) spec.actuation_cost = *cost_act;
    if (cost_perc) spec.perception_cost = *cost_perc;
    return bp::compile_grid_world(spec);
  }
};

struct WorldSource {
  std::string map_path;
  std::size_t grid_size = 0;  // target state count for a generated world
  unsigned orientations = 4;
  std::uint64_t seed = 1;
  NoiseOverrides overrides;

  void add_flags(CLI::App* cmd, bool with_overrides = true) {
    auto* map = cmd->add_option("--map", map_path, "World map JSON file");
    auto* grid = cmd->add_option(
        "--grid", grid_size,
        "Generate a random world with ~N states instead of loading a map");
    cmd->add_option("--orientations", orientations,
                    "Orientations for generated worlds (1, 4, or 8)");
    cmd->add_option("--seed", seed, "Master seed");
    map->excludes(grid);
    if (with_overrides) overrides.add_flags(cmd);
  }

  // Returns the world plus a ground-truth state for simulation.
  std::pair<bp::WorldModel, bp::StateId> realize() const {
    if (!map_path.empty()) {
      bp::WorldModel model = overrides.apply(bp::load_map(map_path));
      // Hidden state drawn uniformly; --true-state overrides downstream.
      bp::Rng rng(bp::combine_seed(seed, 7));
      return {std::move(model), rng.bounded(model.state_count)};
    }
    if (grid_size == 0)
      throw CLI::ValidationError("world", "need --map FILE or --grid N");
    const bp::GridDims dims = bp::realize_dims(grid_size, orientations);
    bp::RandomWorld rw =
        bp::random_world(dims.width, dims.height, dims.orientations, seed);
    bp::GridWorldSpec spec = rw.spec;
    if (overrides.p_fp) spec.p_false_positive = *overrides.p_fp;
    if (overrides.p_fn) spec.p_false_negative = *overrides.p_fn;
    if (overrides.p_fail) spec.p_actuation_failure = *overrides.p_fail;
    if (overrides.cost_act) spec.actuation_cost = *overrides.cost_act;
    if (overrides.cost_perc) spec.perception_cost = *overrides.cost_perc;
    return {bp::compile_grid_world(spec), rw.true_initial_state};
  }
};

bp::BeliefState initial_belief(const std::string& initial, std::size_t n) {
  if (initial == "uniform")
    return bp::normalize(std::vector<double>(n, 1.0));
  std::size_t pos = 0;
  const auto k = static_cast<std::size_t>(std::stoull(initial, &pos));
  if (pos != initial.size() || k >= n)
    throw CLI::ValidationError(
        "--initial", "expected 'uniform' or a state index below " +
                         std::to_string(n));
  std::vector<double> v(n, 0.0);
  v[k] = 1.0;
  return bp::BeliefState(std::move(v));
}

std::string state_name(const bp::WorldModel& world, bp::StateId s) {
  std::string out = std::to_string(s);
  if (!world.state_labels.empty()) out += " " + world.state_labels[s];
  return out;
}

int cmd_bench(const bp::BenchConfig& config, const std::string& out_path,
              bool quiet) {
  bp::BenchReport report = bp::run_bench(config, quiet ? nullptr : &std::cerr);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    bp::write_csv(out, report);
  }
  bp::write_summary(std::cout, report);
  return 0;
}

int cmd_run(const WorldSource& source, const std::string& initial,
            const std::string& policy_name, std::optional<bp::StateId> truth,
            double p_goal, std::size_t max_expansions, bool no_cache,
            bool literal_loop, std::size_t step_cap) {
  const auto policy = bp::policy_from_string(policy_name);
  if (!policy) {
    std::cerr << "error: unknown policy '" << policy_name << "'\n";
    return 2;
  }
  auto [world, sampled_truth] = source.realize();
  const bp::StateId true_state = truth.value_or(sampled_truth);
  const bp::BeliefState belief = initial_belief(initial, world.state_count);
  bp::SimActor actor(world, true_state,
                     bp::combine_seed(source.seed, 101));

  bp::EpisodeRecord rec;
  if (*policy == bp::PolicyKind::random) {
    bp::RandomPolicyConfig rc;
    rc.p_goal = p_goal;
    rc.step_cap = step_cap;
    rc.seed = bp::combine_seed(source.seed, 202);
    rec = bp::run_random_episode(belief, world, actor, rc);
  } else {
    bp::ExecutorConfig ec;
    ec.planner.p_goal = p_goal;
    ec.planner.max_expansions = max_expansions;
    ec.planner.use_heuristic = *policy == bp::PolicyKind::ours;
    ec.planner.use_expansion_cache = !no_cache;
    ec.literal_main_loop = literal_loop;
    rec = bp::run_episode(belief, world, actor, ec);
  }

  std::cout << "# step\taction\tobservation\tmax_belief\tentropy\n";
  bp::write_trace(std::cout, rec);
  std::cout << "result: " << (rec.success ? "success" : "failure");
  if (!rec.success) std::cout << " (" << rec.failure_reason << ")";
  std::cout << "\n";
  if (rec.localized_state)
    std::cout << "localized: state " << state_name(world, *rec.localized_state)
              << "\n";
  if (rec.true_state)
    std::cout << "true:      state " << state_name(world, *rec.true_state)
              << "\n";
  char buf[160];
  double plan_total = 0;
  for (double t : rec.plan_times) plan_total += t;
  std::snprintf(buf, sizeof buf,
                "cost %.10g | actions %zu | replans %zu | plan_time %.4fs\n",
                rec.cost, rec.steps.size(), rec.replans, plan_total);
  std::cout << buf;
  return rec.success ? 0 : 1;
}

int cmd_gen_map(const WorldSource& source, std::size_t width,
                std::size_t height, const std::string& out_path) {
  bp::GridDims dims{width, height, source.orientations};
  if (width == 0 || height == 0) {
    if (source.grid_size == 0) {
      std::cerr << "error: need --size N or --width/--height\n";
      return 2;
    }
    dims = bp::realize_dims(source.grid_size, source.orientations);
  }
  bp::RandomWorld rw = bp::random_world(dims.width, dims.height,
                                        dims.orientations, source.seed);
  const bp::WorldModel model = bp::compile_grid_world(rw.spec);
  bp::save_map(model, out_path);
  std::cout << "wrote " << out_path << ": " << dims.width << "x" << dims.height
            << "x" << dims.orientations << " (" << model.state_count
            << " states), " << rw.spec.placements.size()
            << " objects; suggested --true-state " << rw.true_initial_state
            << "\n";
  return 0;
}

int cmd_plan(const WorldSource& source, const std::string& initial,
             double p_goal, bool uniform_cost, std::size_t max_expansions) {
  auto [world, truth] = source.realize();
  (void)truth;
  const bp::BeliefState belief = initial_belief(initial, world.state_count);
  bp::PlannerConfig config;
  config.p_goal = p_goal;
  config.max_expansions = max_expansions;
  config.use_heuristic = !uniform_cost;

  const bp::PlanResult res = bp::plan(belief, world, config);
  char buf[160];
  if (res.status != bp::PlanStatus::found) {
    std::cout << (res.status == bp::PlanStatus::no_plan
                      ? "no plan: reachable belief set exhausted"
                      : "no plan: expansion budget exhausted")
              << "\n";
    std::snprintf(buf, sizeof buf, "expansions %zu | %.4fs\n",
                  res.stats.expansions, res.stats.duration_seconds);
    std::cout << buf;
    return 1;
  }
  const bp::Plan& plan = *res.plan;
  std::snprintf(buf, sizeof buf,
                "plan found: %zu steps, cost %.10g, expansions %zu, %.4fs\n",
                plan.steps.size(), plan.total_cost, res.stats.expansions,
                res.stats.duration_seconds);
  std::cout << buf;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const bp::PlanStep& s = plan.steps[i];
    std::cout << "  " << i + 1 << ". " << s.action_name;
    if (s.observation) {
      const auto& obs_label =
          world.perception[s.action.index].observations[*s.observation];
      std::snprintf(buf, sizeof buf, " [expects '%s', p=%.3f]",
                    obs_label.c_str(), s.branch_probability);
      std::cout << buf;
    }
    std::snprintf(buf, sizeof buf, "  -> max_belief %.4f",
                  bp::max_belief(s.expected_belief).second);
    std::cout << buf << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief-space active localization: plan, execute, benchmark"};
  app.require_subcommand(1);

  // bench ------------------------------------------------------------
  bp::BenchConfig bench_config;
  std::string bench_out;
  std::vector<std::string> bench_policies{"ours", "uniform", "random"};
  bool bench_no_cache = false, bench_quiet = false;
  auto* bench = app.add_subcommand("bench", "Run the localization benchmark");
  bench->add_option("--sizes", bench_config.sizes,
                    "Target state counts (default 100 1000)");
  bench->add_option("--episodes", bench_config.episodes, "Episodes per size");
  bench->add_option("--seed", bench_config.seed, "Master seed");
  bench->add_option("--policy", bench_policies,
                    "Policies: ours uniform random (default all)");
  bench->add_option("--p-goal", bench_config.p_goal,
                    "Localization confidence threshold");
  bench->add_option("--fp", bench_config.p_false_positive,
                    "Detector false-positive rate");
  bench->add_option("--fn", bench_config.p_false_negative,
                    "Detector false-negative rate");
  bench->add_option("--fail-prob", bench_config.p_actuation_failure,
                    "Actuation failure probability");
  bench->add_option("--cost-act", bench_config.actuation_cost,
                    "Actuation cost");
  bench->add_option("--cost-perc", bench_config.perception_cost,
                    "Perception cost");
  bench->add_option("--out", bench_out, "Write per-episode CSV here");
  bench->add_option("--orientations", bench_config.orientations,
                    "Grid orientations (1, 4, or 8)");
  bench->add_option("--jobs", bench_config.jobs, "Worker threads");
  bench->add_option("--max-expansions", bench_config.max_expansions,
                    "Planner expansion budget");
  bench->add_option("--step-cap", bench_config.random_step_cap,
                    "Random-policy step cap");
  bench->add_flag("--no-cache", bench_no_cache,
                  "Disable the cross-replan expansion cache");
  bench->add_flag("--quiet", bench_quiet, "Suppress progress output");

  // run ---------------------------------------------------------------
  WorldSource run_source;
  std::string run_initial = "uniform", run_policy = "ours";
  std::optional<bp::StateId> run_truth;
  double run_p_goal = 0.95;
  std::size_t run_max_exp = 1'000'000, run_step_cap = 500;
  bool run_no_cache = false, run_literal = false;
  auto* run = app.add_subcommand("run", "Simulate one episode and print the trace");
  run_source.add_flags(run);
  run->add_option("--initial", run_initial,
                  "Initial belief: 'uniform' or a state index");
  run->add_option("--policy", run_policy, "ours | uniform | random");
  run->add_option("--true-state", run_truth,
                  "Ground-truth state (default: seeded draw)");
  run->add_option("--p-goal", run_p_goal, "Localization threshold");
  run->add_option("--max-expansions", run_max_exp, "Planner budget");
  run->add_option("--step-cap", run_step_cap, "Random-policy step cap");
  run->add_flag("--no-cache", run_no_cache, "Disable the expansion cache");
  run->add_flag("--literal-loop", run_literal,
                "Skip filtering on actuation (bare main-loop variant)");

  // gen-map -------------------------------------------------------------
  WorldSource gen_source;
  std::size_t gen_width = 0, gen_height = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-map", "Generate a random world map");
  gen->add_option("--size", gen_source.grid_size, "Target state count");
  gen->add_option("--width", gen_width, "Grid width (with --height)");
  gen->add_option("--height", gen_height, "Grid height (with --width)");
  gen->add_option("--orientations", gen_source.orientations,
                  "Orientations (1, 4, or 8)");
  gen->add_option("--seed", gen_source.seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output map path")->required();

  // plan ----------------------------------------------------------------
  WorldSource plan_source;
  std::string plan_initial = "uniform";
  double plan_p_goal = 0.95;
  std::size_t plan_max_exp = 1'000'000;
  bool plan_uniform = false;
  auto* planc = app.add_subcommand("plan", "Plan once and print the actions");
  plan_source.add_flags(planc);
  planc->add_option("--initial", plan_initial,
                    "Initial belief: 'uniform' or a state index");
  planc->add_option("--p-goal", plan_p_goal, "Localization threshold");
  planc->add_option("--max-expansions", plan_max_exp, "Planner budget");
  planc->add_flag("--uniform-cost", plan_uniform,
                  "Disable the heuristic (baseline search)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      bench_config.policies.clear();
      for (const std::string& p : bench_policies) {
        const auto kind = bp::policy_from_string(p);
        if (!kind) {
          std::cerr << "error: unknown policy '" << p << "'\n";
          return 2;
        }
        bench_config.policies.push_back(*kind);
      }
      bench_config.use_expansion_cache = !bench_no_cache;
      return cmd_bench(bench_config, bench_out, bench_quiet);
    }
    if (run->parsed())
      return cmd_run(run_source, run_initial, run_policy, run_truth,
                     run_p_goal, run_max_exp, run_no_cache, run_literal,
                     run_step_cap);
    if (gen->parsed())
      return cmd_gen_map(gen_source, gen_width, gen_height, gen_out);
    if (planc->parsed())
      return cmd_plan(plan_source, plan_initial, plan_p_goal, plan_uniform,
                      plan_max_exp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
