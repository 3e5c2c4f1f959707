#include "beliefplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_set>

namespace beliefplan {

namespace {

struct HeapEntry {
  double f = 0.0;
  std::uint64_t seq = 0;  // insertion order; equal-f entries pop FIFO
  std::shared_ptr<const PlanNode> node;
};

struct HeapCompare {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    return a.seq > b.seq;
  }
};

}  // namespace

std::vector<SuccessorBelief> next_nodes(const BeliefState& b,
                                        const WorldModel& world,
                                        double zero_mass_epsilon,
                                        bool with_entropy) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SuccessorBelief> out;
  out.reserve(world.actuation.size() + 4 * world.perception.size());

  for (std::size_t i = 0; i < world.actuation.size(); ++i) {
    auto nb = std::make_shared<const BeliefState>(
        predict(b, world.actuation[i]));
    out.push_back({nb,
                   ActionRef{false, i},
                   0,
                   1.0,
                   with_entropy ? entropy(*nb) : nan});
  }

  const auto& probs = b.probs();
  const std::size_t n = probs.size();
  for (std::size_t j = 0; j < world.perception.size(); ++j) {
    const PerceptionAction& per = world.perception[j];
    for (ObservationId o = 0; o < per.observations.size(); ++o) {
      // Fused posterior + branch probability; arithmetic matches update()
      // exactly so planner beliefs and filter beliefs share keys.
      const std::vector<double>& like = per.likelihood[o];
      std::vector<double> w(n);
      double sum = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        w[s] = probs[s] * like[s];
        sum += w[s];
      }
      if (sum <= zero_mass_epsilon) continue;  // pruned, never normalized
      const double inv = 1.0 / sum;
      for (double& x : w) x *= inv;
      auto nb = std::make_shared<const BeliefState>(
          BeliefState::trusted_t{}, std::move(w));
      out.push_back({nb,
                     ActionRef{true, j},
                     o,
                     sum > 1.0 ? 1.0 : sum,
                     with_entropy ? entropy(*nb) : nan});
    }
  }
  return out;
}

Plan get_path(const PlanNode& goal, const WorldModel& world) {
  std::vector<const PlanNode*> chain;
  for (const PlanNode* n = &goal; n->parent; n = n->parent.get())
    chain.push_back(n);
  std::reverse(chain.begin(), chain.end());

  Plan plan;
  plan.steps.reserve(chain.size());
  for (const PlanNode* n : chain) {
    PlanStep step;
    step.action = n->action;
    step.action_name = world.action_name(n->action);
    step.expected_belief = *n->belief;
    if (n->action.is_perception) step.observation = n->observation;
    step.branch_probability = n->reach_probability;
    step.cost = world.action_cost(n->action);
    plan.total_cost += step.cost;
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

PlanResult plan(const BeliefState& initial, const WorldModel& world,
                const PlannerConfig& config, SearchCache* cache) {
  const auto t0 = std::chrono::steady_clock::now();
  PlanResult res;

  SearchCache local_cache;
  SearchCache& memo = cache ? *cache : local_cache;

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCompare> open;
  std::unordered_set<BeliefKey, BeliefKeyHash> closed;
  std::uint64_t seq = 0;

  {
    auto root = std::make_shared<PlanNode>();
    root->belief = std::make_shared<const BeliefState>(initial);
    root->key = belief_key(initial, config.belief_quantum);
    root->h = config.use_heuristic ? entropy(initial) : 0.0;
    root->f = root->h;
    open.push({root->f, seq++, std::move(root)});
  }

  while (!open.empty()) {
    HeapEntry entry = open.top();
    open.pop();
    const std::shared_ptr<const PlanNode>& node = entry.node;

    // Goal test at pop time, before duplicate suppression: a goal root
    // yields an empty plan, and goal beliefs never enter the closed set.
    if (max_belief(*node->belief).second >= config.p_goal) {
      res.status = PlanStatus::found;
      res.plan = get_path(*node, world);
      break;
    }
    if (!closed.insert(node->key).second) continue;
    if (res.stats.expansions >= config.max_expansions) {
      res.status = PlanStatus::budget_exhausted;
      break;
    }
    ++res.stats.expansions;

    std::shared_ptr<const SearchCache::Expansion> expansion;
    if (config.use_expansion_cache) {
      expansion = memo.find(node->key);
      if (expansion) ++res.stats.cache_hits;
    }
    if (!expansion) {
      expansion = std::make_shared<const SearchCache::Expansion>(next_nodes(
          *node->belief, world, config.zero_mass_epsilon,
          config.use_heuristic));
      if (config.use_expansion_cache) memo.insert(node->key, expansion);
    }

    for (const SuccessorBelief& s : *expansion) {
      const BeliefKey key = belief_key(*s.belief, config.belief_quantum);
      if (closed.contains(key)) continue;  // expanded already, not a goal
      auto child = std::make_shared<PlanNode>();
      child->belief = s.belief;
      child->parent = node;
      child->action = s.action;
      child->observation = s.observation;
      child->g = node->g + world.action_cost(s.action);
      if (config.use_heuristic) {
        double ent = s.entropy_value;
        // A cache row written by a uniform-cost run carries no entropies.
        if (std::isnan(ent)) ent = entropy(*s.belief);
        child->h = ent / s.probability;
      }
      child->f = child->g + child->h;
      child->reach_probability = s.probability;
      child->key = key;
      open.push({child->f, seq++, std::move(child)});
      ++res.stats.generated;
    }
  }

  res.stats.open_size = open.size();
  res.stats.closed_size = closed.size();
  res.stats.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

PlanResult uniform_plan(const BeliefState& initial, const WorldModel& world,
                        PlannerConfig config, SearchCache* cache) {
  config.use_heuristic = false;
  return plan(initial, world, config, cache);
}

}  // namespace beliefplan
