#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "beliefplan/executor.hpp"

namespace beliefplan {

enum class PolicyKind { ours, uniform, random };

std::string_view to_string(PolicyKind p);
std::optional<PolicyKind> policy_from_string(std::string_view s);

/// Pseudo-random baseline schedule: actuation on even steps, perception on
/// odd steps, uniform over the respective action set. Starting with
/// actuation keeps it from looking artificially smart on worlds where the
/// first perception already disambiguates.
ActionRef random_policy_step(Rng& rng, std::size_t step,
                             const WorldModel& world);

struct RandomPolicyConfig {
  double p_goal = 0.95;
  std::size_t step_cap = 500;  // fail the episode beyond this many actions
  std::uint64_t seed = 0;      // policy RNG; independent of the actor's
};

/// Run one episode under the random policy. Shares apply_action with the
/// executor so the belief filter is bit-identical; terminates on goal or
/// step cap. No planning: plan_times/expansions stay empty, replans is 0.
EpisodeRecord run_random_episode(const BeliefState& initial,
                                 const WorldModel& world, Actor& actor,
                                 const RandomPolicyConfig& config);

}  // namespace beliefplan
