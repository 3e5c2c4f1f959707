#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "beliefplan/planner.hpp"
#include "beliefplan/rng.hpp"
#include "beliefplan/world.hpp"

namespace beliefplan {

/// An actor violated the execution contract (perception without an
/// observation, observation out of range, unknown action, ...).
class ActorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where actions are sent during execution. Implementations return the
/// sampled observation for perception actions and nothing for actuation.
class Actor {
 public:
  virtual ~Actor() = default;
  virtual std::optional<ObservationId> take_action(ActionRef action) = 0;
  /// Ground-truth state when the actor knows one (simulators do).
  virtual std::optional<StateId> ground_truth() const { return std::nullopt; }
};

/// Stochastic simulator: tracks a hidden true state, samples successor
/// states from the action's transition row and observations from the
/// likelihood column of the true state.
class SimActor : public Actor {
 public:
  SimActor(const WorldModel& world, StateId true_state, std::uint64_t seed);

  std::optional<ObservationId> take_action(ActionRef action) override;
  std::optional<StateId> ground_truth() const override { return state_; }

 private:
  const WorldModel* world_;
  StateId state_;
  Rng rng_;
};

/// Replays a fixed observation script; used to force specific divergence
/// patterns in tests. Knows no ground truth.
class ScriptedActor : public Actor {
 public:
  explicit ScriptedActor(std::vector<ObservationId> observations)
      : script_(std::move(observations)) {}

  std::optional<ObservationId> take_action(ActionRef action) override;

 private:
  std::vector<ObservationId> script_;
  std::size_t next_ = 0;
};

struct StepRecord {
  std::size_t index = 0;
  std::string action;
  std::optional<std::string> observation;
  double max_belief = 0.0;
  double entropy = 0.0;
};

struct EpisodeRecord {
  bool success = false;
  double cost = 0.0;                    // sum over executed actions
  std::size_t replans = 0;              // replan *events* (initial plan excluded)
  std::vector<double> plan_times;       // seconds per plan call; replans + 1 entries
  std::vector<std::size_t> expansions;  // per plan call
  std::vector<StepRecord> steps;
  std::optional<StateId> localized_state;  // argmax of the final belief
  std::optional<StateId> true_state;       // from the actor, when known
  BeliefState final_belief{BeliefState::trusted_t{}, {}};
  std::string failure_reason;  // empty on success
};

struct ExecutorConfig {
  PlannerConfig planner;
  /// Replicate the bare main loop: skip the prediction update on actuation
  /// and test goal/divergence only after perception. Default off — the
  /// filter tracks actuation too, which the divergence test relies on.
  bool literal_main_loop = false;
};

/// Act, perceive, replan. Plans from the initial belief, executes step by
/// step, folds observations into the live belief, and replans from scratch
/// indices (i = 0) whenever the live belief leaves the planned branch
/// (quantized-key inequality). The search cache persists across replans.
/// Episodes fail when a plan call returns no plan / exhausts its budget, or
/// when an observation annihilates the belief.
EpisodeRecord run_episode(const BeliefState& initial, const WorldModel& world,
                          Actor& actor, const ExecutorConfig& config);

/// Shared filter path: predict for actuation, update for perception.
/// Both the executor and the random-walk baseline go through here.
BeliefState apply_action(const BeliefState& b, const WorldModel& world,
                         ActionRef action, std::optional<ObservationId> obs);

/// Tab-separated trace: step, action, observation (- when none),
/// max belief, entropy. One line per executed action.
void write_trace(std::ostream& out, const EpisodeRecord& record);

}  // namespace beliefplan
