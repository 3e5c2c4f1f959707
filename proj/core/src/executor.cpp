#include "beliefplan/executor.hpp"

#include <cmath>
#include <ostream>

namespace beliefplan {

SimActor::SimActor(const WorldModel& world, StateId true_state,
                   std::uint64_t seed)
    : world_(&world), state_(true_state), rng_(seed) {
  if (true_state >= world.state_count)
    throw ActorError("true state out of range");
}

std::optional<ObservationId> SimActor::take_action(ActionRef action) {
  if (!action.is_perception) {
    if (action.index >= world_->actuation.size())
      throw ActorError("unknown actuation action");
    const TransitionMatrix& t = world_->actuation[action.index].transition;
    const double u = rng_.next_double();
    double acc = 0.0;
    StateId next = state_;
    for (std::uint32_t k = t.row_begin[state_]; k < t.row_begin[state_ + 1];
         ++k) {
      acc += t.value[k];
      next = t.col[k];
      if (u < acc) break;
    }
    state_ = next;
    return std::nullopt;
  }
  if (action.index >= world_->perception.size())
    throw ActorError("unknown perception action");
  const PerceptionAction& p = world_->perception[action.index];
  const double u = rng_.next_double();
  double acc = 0.0;
  ObservationId obs = p.observations.size() - 1;
  for (ObservationId o = 0; o < p.observations.size(); ++o) {
    acc += p.likelihood[o][state_];
    if (u < acc) {
      obs = o;
      break;
    }
  }
  return obs;
}

std::optional<ObservationId> ScriptedActor::take_action(ActionRef action) {
  if (!action.is_perception) return std::nullopt;
  if (next_ >= script_.size())
    throw ActorError("scripted actor: observation script exhausted");
  return script_[next_++];
}

BeliefState apply_action(const BeliefState& b, const WorldModel& world,
                         ActionRef action, std::optional<ObservationId> obs) {
  if (!action.is_perception) {
    if (action.index >= world.actuation.size())
      throw ActorError("apply_action: unknown actuation action");
    return predict(b, world.actuation[action.index]);
  }
  if (action.index >= world.perception.size())
    throw ActorError("apply_action: unknown perception action");
  if (!obs) throw ActorError("apply_action: perception without an observation");
  const PerceptionAction& p = world.perception[action.index];
  if (*obs >= p.observations.size())
    throw ActorError("apply_action: observation index out of range");
  return update(b, p, *obs);
}

namespace {

void record_step(EpisodeRecord& rec, const WorldModel& world, ActionRef action,
                 std::optional<ObservationId> obs, const BeliefState& belief) {
  StepRecord step;
  step.index = rec.steps.size();
  step.action = world.action_name(action);
  if (obs && action.is_perception)
    step.observation = world.perception[action.index].observations[*obs];
  step.max_belief = max_belief(belief).second;
  step.entropy = entropy(belief);
  rec.steps.push_back(std::move(step));
}

}  // namespace

EpisodeRecord run_episode(const BeliefState& initial, const WorldModel& world,
                          Actor& actor, const ExecutorConfig& config) {
  EpisodeRecord rec;
  BeliefState belief = initial;
  SearchCache cache;  // persists across replans within the episode
  SearchCache* cache_ptr =
      config.planner.use_expansion_cache ? &cache : nullptr;
  const double p_goal = config.planner.p_goal;

  auto call_plan = [&](const BeliefState& from) {
    PlanResult r = plan(from, world, config.planner, cache_ptr);
    rec.plan_times.push_back(r.stats.duration_seconds);
    rec.expansions.push_back(r.stats.expansions);
    return r;
  };

  PlanResult current = call_plan(belief);
  bool failed = false;
  while (true) {
    if (current.status != PlanStatus::found) {
      failed = true;
      rec.failure_reason = current.status == PlanStatus::budget_exhausted
                               ? "plan budget exhausted"
                               : "no plan";
      break;
    }
    if (max_belief(belief).second >= p_goal) break;  // goal root, empty plan

    const Plan& plan_steps = *current.plan;
    bool goal_reached = false;
    bool diverged = false;
    for (std::size_t i = 0; i < plan_steps.steps.size(); ++i) {
      const PlanStep& step = plan_steps.steps[i];
      std::optional<ObservationId> obs = actor.take_action(step.action);
      rec.cost += step.cost;

      if (!step.action.is_perception) {
        if (obs) throw ActorError("actuation action returned an observation");
        if (!config.literal_main_loop)
          belief = apply_action(belief, world, step.action, std::nullopt);
      } else {
        if (!obs) throw ActorError("perception returned no observation");
        if (*obs >= world.perception[step.action.index].observations.size())
          throw ActorError("observation index out of range");
        try {
          belief = apply_action(belief, world, step.action, obs);
        } catch (const ZeroMassError&) {
          record_step(rec, world, step.action, obs, belief);
          rec.failure_reason = "observation annihilated the belief";
          failed = true;
          break;
        }
      }
      record_step(rec, world, step.action, obs, belief);

      // The bare pseudocode variant only reconsiders after perception; the
      // default checks after every executed action.
      const bool check = !config.literal_main_loop || step.action.is_perception;
      if (!check) continue;
      if (max_belief(belief).second >= p_goal) {
        goal_reached = true;
        break;
      }
      if (belief_key(belief, config.planner.belief_quantum) !=
          belief_key(step.expected_belief, config.planner.belief_quantum)) {
        diverged = true;
        break;
      }
    }
    if (failed || goal_reached) break;
    if (diverged) {
      ++rec.replans;  // restart from step 0 of a fresh plan
      current = call_plan(belief);
      continue;
    }
    break;  // plan exhausted on the expected branch
  }

  rec.final_belief = belief;
  const auto [arg, maxp] = max_belief(belief);
  rec.localized_state = arg;
  rec.true_state = actor.ground_truth();
  rec.success = !failed && maxp >= p_goal;
  if (!rec.success && rec.failure_reason.empty())
    rec.failure_reason = "plan completed below the goal threshold";
  return rec;
}

void write_trace(std::ostream& out, const EpisodeRecord& record) {
  char buf[64];
  for (const StepRecord& s : record.steps) {
    out << s.index << '\t' << s.action << '\t'
        << (s.observation ? *s.observation : "-");
    std::snprintf(buf, sizeof buf, "\t%.9g\t%.9g\n", s.max_belief, s.entropy);
    out << buf;
  }
}

}  // namespace beliefplan
