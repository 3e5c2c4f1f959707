#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beliefplan/belief.hpp"

namespace beliefplan {

/// A grid/world description that cannot be compiled (bad dimensions,
/// out-of-range probabilities, unknown object class, ...).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structurally well-formed model whose numbers violate an invariant
/// (row sums, likelihood totality, non-positive cost, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-compressed row-stochastic transition matrix.
/// Row i holds P(next = col[k] | current = i) for k in [row_begin[i],
/// row_begin[i+1]). Grid moves have at most two entries per row, so CSR keeps
/// 10^4-state worlds cheap to store and multiply.
struct TransitionMatrix {
  std::size_t size = 0;
  std::vector<std::uint32_t> row_begin;  // size + 1 offsets
  std::vector<std::uint32_t> col;
  std::vector<double> value;

  static TransitionMatrix identity(std::size_t n);
  static TransitionMatrix from_dense(
      const std::vector<std::vector<double>>& rows);
  std::vector<std::vector<double>> to_dense() const;

  /// Row sums must be 1 within kBeliefSumTolerance, entries non-negative.
  void validate() const;

  friend bool operator==(const TransitionMatrix&,
                         const TransitionMatrix&) = default;
};

struct ActuationAction {
  std::string name;
  double cost = 1.0;
  TransitionMatrix transition;

  friend bool operator==(const ActuationAction&,
                         const ActuationAction&) = default;
};

struct PerceptionAction {
  std::string name;
  double cost = 1.0;
  std::vector<std::string> observations;        // index == ObservationId
  std::vector<std::vector<double>> likelihood;  // [obs][state] = P(o | s, a)

  /// Checks per-state totality: for every state the likelihoods over the
  /// observation set sum to 1 within kBeliefSumTolerance.
  void validate(std::size_t state_count) const;

  friend bool operator==(const PerceptionAction&,
                         const PerceptionAction&) = default;
};

enum class MoveKind {
  forward,
  backward,
  rotate_cw,
  rotate_ccw,
  right,
  left,
  up,
  down,
};

std::string_view to_string(MoveKind k);
std::optional<MoveKind> move_kind_from_string(std::string_view s);

struct ObjectPlacement {
  std::string object_class;
  std::size_t cell = 0;

  friend bool operator==(const ObjectPlacement&,
                         const ObjectPlacement&) = default;
};

/// Declarative description of a grid world with annotated object classes.
/// States enumerate (cell, orientation) pairs; cells are indexed
/// column-major (cell = x * height + y) and orientations counterclockwise
/// starting at +x.
struct GridWorldSpec {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned orientations = 4;  // 1 (unoriented), 4, or 8
  double cell_size = 1.0;     // meters; wall-scan ranges depend on it

  std::vector<std::string> object_classes;
  std::vector<ObjectPlacement> placements;

  double p_false_positive = 0.0;
  double p_false_negative = 0.0;
  double p_actuation_failure = 0.0;  // chance a move leaves the state as-is

  double actuation_cost = 10.0;
  double perception_cost = 1.0;

  /// Move set; empty selects defaults: rotate/forward/backward when oriented,
  /// the four compass moves when orientations == 1.
  std::vector<MoveKind> moves;

  bool wall_scan = false;  // adds a front-distance scan action
  /// Viewing-angle bin edges in degrees (ascending). Empty keeps the plain
  /// seen/unseen detector; non-empty refines each class into angle bins and
  /// requires an oriented world.
  std::vector<double> view_angle_bins;

  std::size_t cell_count() const { return width * height; }
  std::size_t state_count() const { return cell_count() * orientations; }
  std::size_t cell_index(std::size_t x, std::size_t y) const {
    return x * height + y;
  }
  std::size_t cell_x(std::size_t cell) const { return cell / height; }
  std::size_t cell_y(std::size_t cell) const { return cell % height; }
  StateId state_id(std::size_t cell, unsigned orient) const {
    return cell * orientations + orient;
  }
  std::size_t state_cell(StateId s) const { return s / orientations; }
  unsigned state_orientation(StateId s) const {
    return static_cast<unsigned>(s % orientations);
  }

  /// Throws SpecError on any inconsistency.
  void validate() const;

  friend bool operator==(const GridWorldSpec&, const GridWorldSpec&) = default;
};

/// Identifies one action of a WorldModel without owning it.
struct ActionRef {
  bool is_perception = false;
  std::size_t index = 0;

  friend bool operator==(const ActionRef&, const ActionRef&) = default;
};

struct WorldModel {
  std::size_t state_count = 0;
  std::vector<ActuationAction> actuation;
  std::vector<PerceptionAction> perception;
  std::vector<std::string> state_labels;  // optional; empty or state_count long
  /// Present when the model was compiled from a grid spec; lets map files
  /// round-trip through the compact grid form.
  std::optional<GridWorldSpec> grid;

  /// Throws ValidationError when any matrix/likelihood/cost is inconsistent.
  void validate() const;

  const std::string& action_name(ActionRef ref) const {
    return ref.is_perception ? perception[ref.index].name
                             : actuation[ref.index].name;
  }
  double action_cost(ActionRef ref) const {
    return ref.is_perception ? perception[ref.index].cost
                             : actuation[ref.index].cost;
  }
  std::optional<ActionRef> find_action(std::string_view name) const;

  friend bool operator==(const WorldModel&, const WorldModel&) = default;
};

/// Expand a grid spec into explicit transition matrices and likelihoods.
/// Moves become row-stochastic matrices (success mass on the target state,
/// failure mass staying put; blocked moves stay put with probability 1).
/// The detector becomes one perception action whose observations enumerate
/// class subsets (or class/angle-bin tuples), plus an optional wall scan.
WorldModel compile_grid_world(const GridWorldSpec& spec);

/// Object classes detectable from state s, sorted, duplicates removed.
/// Unoriented worlds see the robot's own cell; oriented worlds see the cell
/// one forward step away (nothing when facing the boundary). With
/// view_angle_bins set, a class is visible when some object of that class
/// lies within the widest bin edge of the facing direction, any distance.
std::vector<std::string> visible_classes(const GridWorldSpec& spec, StateId s);

/// Distance in meters from the state's cell center along its facing
/// direction to the world boundary. Unoriented states face +x.
double wall_distance(const GridWorldSpec& spec, StateId s);

/// Random localization scenario: 4..8 objects of the four standard classes
/// dropped on distinct cells, detector/motion noise at the benchmark
/// defaults, plus a uniformly drawn true initial state.
struct RandomWorld {
  GridWorldSpec spec;
  StateId true_initial_state = 0;
};
RandomWorld random_world(std::size_t width, std::size_t height,
                         unsigned orientations, std::uint64_t seed);

}  // namespace beliefplan
