#include "beliefplan/baselines.hpp"

namespace beliefplan {

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::ours: return "ours";
    case PolicyKind::uniform: return "uniform";
    case PolicyKind::random: return "random";
  }
  return "?";
}

std::optional<PolicyKind> policy_from_string(std::string_view s) {
  if (s == "ours") return PolicyKind::ours;
  if (s == "uniform") return PolicyKind::uniform;
  if (s == "random") return PolicyKind::random;
  return std::nullopt;
}

ActionRef random_policy_step(Rng& rng, std::size_t step,
                             const WorldModel& world) {
  const bool want_actuation = (step % 2) == 0;
  // Fall back to the other set when a world lacks one kind entirely.
  if (want_actuation ? !world.actuation.empty() : world.perception.empty()) {
    return ActionRef{false, rng.bounded(world.actuation.size())};
  }
  return ActionRef{true, rng.bounded(world.perception.size())};
}

EpisodeRecord run_random_episode(const BeliefState& initial,
                                 const WorldModel& world, Actor& actor,
                                 const RandomPolicyConfig& config) {
  EpisodeRecord rec;
  BeliefState belief = initial;
  Rng policy_rng(config.seed);  // separate stream from the actor's noise
  bool failed = false;

  for (std::size_t step = 0;; ++step) {
    if (max_belief(belief).second >= config.p_goal) break;
    if (step >= config.step_cap) {
      failed = true;
      rec.failure_reason = "step cap reached";
      break;
    }
    const ActionRef ref = random_policy_step(policy_rng, step, world);
    const std::optional<ObservationId> obs = actor.take_action(ref);
    rec.cost += world.action_cost(ref);
    try {
      belief = apply_action(belief, world, ref, obs);
    } catch (const ZeroMassError&) {
      failed = true;
      rec.failure_reason = "observation annihilated the belief";
      break;
    }
    StepRecord sr;
    sr.index = rec.steps.size();
    sr.action = world.action_name(ref);
    if (obs && ref.is_perception)
      sr.observation = world.perception[ref.index].observations[*obs];
    sr.max_belief = max_belief(belief).second;
    sr.entropy = entropy(belief);
    rec.steps.push_back(std::move(sr));
  }

  rec.final_belief = belief;
  const auto [arg, maxp] = max_belief(belief);
  rec.localized_state = arg;
  rec.true_state = actor.ground_truth();
  rec.success = !failed && maxp >= config.p_goal;
  return rec;
}

}  // namespace beliefplan
