#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "beliefplan/world.hpp"

namespace beliefplan {

struct PlannerConfig {
  double p_goal = 0.95;                 // stop once max belief reaches this
  std::size_t max_expansions = 1'000'000;
  double zero_mass_epsilon = kZeroMassEpsilon;
  double belief_quantum = kBeliefQuantum;
  /// Entropy-over-branch-probability heuristic. Off = uniform-cost search.
  bool use_heuristic = true;
  /// Reuse memoized successor expansions across plan calls (warm replanning).
  bool use_expansion_cache = true;
};

/// One candidate successor belief: the result of applying one action to a
/// belief and, for perception, committing to one observation branch.
struct SuccessorBelief {
  std::shared_ptr<const BeliefState> belief;
  ActionRef action;
  /// Observation index for perception edges, ignored for actuation.
  ObservationId observation = 0;
  /// Branch probability: 1 for actuation, P(o | a, b) for perception.
  double probability = 1.0;
  /// Entropy of the successor belief; NaN until some heuristic search
  /// needs it (uniform-cost runs never pay for it).
  double entropy_value = 0.0;
};

/// Enumerate every non-pruned successor of b: one per actuation action, one
/// per (perception action, observation) pair with branch probability above
/// zero_mass_epsilon. Order is deterministic: actuations in model order,
/// then perceptions in model order with observations in index order.
std::vector<SuccessorBelief> next_nodes(const BeliefState& b,
                                        const WorldModel& world,
                                        double zero_mass_epsilon,
                                        bool with_entropy);

/// Search node; parents chain back to the root for path extraction.
struct PlanNode {
  std::shared_ptr<const BeliefState> belief;
  std::shared_ptr<const PlanNode> parent;
  ActionRef action;             // edge from parent (unset at the root)
  ObservationId observation = 0;
  double g = 0.0;               // accumulated action cost
  double h = 0.0;
  double f = 0.0;
  double reach_probability = 1.0;  // probability of the edge from parent
  BeliefKey key;
};

struct PlanStep {
  ActionRef action;
  std::string action_name;
  /// Belief expected after this step (the branch the plan commits to).
  BeliefState expected_belief{BeliefState::trusted_t{}, {}};
  /// Observation the plan expects, for perception steps.
  std::optional<ObservationId> observation;
  double branch_probability = 1.0;
  double cost = 0.0;
};

struct Plan {
  std::vector<PlanStep> steps;
  double total_cost = 0.0;
};

/// Root-to-goal action sequence recovered by walking parent links.
Plan get_path(const PlanNode& goal, const WorldModel& world);

enum class PlanStatus {
  found,
  no_plan,            // reachable quantized belief set exhausted
  budget_exhausted,   // max_expansions hit first
};

struct PlanStats {
  std::size_t expansions = 0;
  std::size_t generated = 0;   // successors pushed onto the open list
  std::size_t cache_hits = 0;
  std::size_t open_size = 0;   // frontier size at termination
  std::size_t closed_size = 0;
  double duration_seconds = 0.0;
};

struct PlanResult {
  PlanStatus status = PlanStatus::no_plan;
  std::optional<Plan> plan;  // engaged iff status == found
  PlanStats stats;
};

/// Expansion results memoized by quantized belief key. A cache outlives plan
/// calls within an episode, so replanning after an unexpected observation
/// re-derives only beliefs it has never seen — this is where warm-replan
/// speedups come from. Entries depend on the world and zero_mass_epsilon;
/// do not share a cache across worlds.
class SearchCache {
 public:
  using Expansion = std::vector<SuccessorBelief>;

  std::shared_ptr<const Expansion> find(const BeliefKey& key) const {
    auto it = memo_.find(key);
    return it == memo_.end() ? nullptr : it->second;
  }
  void insert(const BeliefKey& key, std::shared_ptr<const Expansion> e) {
    memo_.emplace(key, std::move(e));
  }
  std::size_t size() const { return memo_.size(); }
  void clear() { memo_.clear(); }

 private:
  std::unordered_map<BeliefKey, std::shared_ptr<const Expansion>,
                     BeliefKeyHash>
      memo_;
};

/// Best-first search in belief space. Each node is scored f = g + h with
/// g the accumulated action cost and h = entropy(b) / P(edge) (h = 0 when
/// the heuristic is disabled). Ties pop FIFO. A node whose max belief
/// reaches p_goal is a goal; the test runs when the node is popped, before
/// duplicate suppression, so a goal root returns an empty plan.
PlanResult plan(const BeliefState& initial, const WorldModel& world,
                const PlannerConfig& config, SearchCache* cache = nullptr);

/// Same search with the heuristic off: optimal (Dijkstra) but slow. The
/// benchmark baseline.
PlanResult uniform_plan(const BeliefState& initial, const WorldModel& world,
                        PlannerConfig config, SearchCache* cache = nullptr);

}  // namespace beliefplan
