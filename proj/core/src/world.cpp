#include "beliefplan/world.hpp"

#include <cmath>
#include <unordered_set>

namespace beliefplan {

TransitionMatrix TransitionMatrix::identity(std::size_t n) {
  TransitionMatrix t;
  t.size = n;
  t.row_begin.resize(n + 1);
  t.col.resize(n);
  t.value.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i)
    t.row_begin[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < n; ++i) t.col[i] = static_cast<std::uint32_t>(i);
  return t;
}

TransitionMatrix TransitionMatrix::from_dense(
    const std::vector<std::vector<double>>& rows) {
  TransitionMatrix t;
  t.size = rows.size();
  t.row_begin.reserve(t.size + 1);
  t.row_begin.push_back(0);
  for (const auto& row : rows) {
    if (row.size() != t.size)
      throw ValidationError("transition matrix is not square");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0.0) {
        t.col.push_back(static_cast<std::uint32_t>(j));
        t.value.push_back(row[j]);
      }
    }
    t.row_begin.push_back(static_cast<std::uint32_t>(t.col.size()));
  }
  t.validate();
  return t;
}

std::vector<std::vector<double>> TransitionMatrix::to_dense() const {
  std::vector<std::vector<double>> rows(size,
                                        std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i)
    for (std::uint32_t k = row_begin[i]; k < row_begin[i + 1]; ++k)
      rows[i][col[k]] = value[k];
  return rows;
}

void TransitionMatrix::validate() const {
  if (row_begin.size() != size + 1)
    throw ValidationError("transition matrix: bad row index");
  for (std::size_t i = 0; i < size; ++i) {
    double sum = 0.0;
    for (std::uint32_t k = row_begin[i]; k < row_begin[i + 1]; ++k) {
      if (col[k] >= size)
        throw ValidationError("transition matrix: column out of range");
      if (value[k] < 0.0 || !std::isfinite(value[k]))
        throw ValidationError("transition matrix: negative or non-finite entry");
      sum += value[k];
    }
    if (std::abs(sum - 1.0) > kBeliefSumTolerance)
      throw ValidationError("transition matrix: row " + std::to_string(i) +
                            " sums to " + std::to_string(sum));
  }
}

void PerceptionAction::validate(std::size_t state_count) const {
  if (observations.empty())
    throw ValidationError("perception '" + name + "': no observations");
  if (likelihood.size() != observations.size())
    throw ValidationError("perception '" + name +
                          "': likelihood rows != observation count");
  for (const auto& row : likelihood) {
    if (row.size() != state_count)
      throw ValidationError("perception '" + name +
                            "': likelihood row length != state count");
    for (double v : row)
      if (v < 0.0 || v > 1.0 || !std::isfinite(v))
        throw ValidationError("perception '" + name +
                              "': likelihood entry outside [0, 1]");
  }
  for (std::size_t s = 0; s < state_count; ++s) {
    double sum = 0.0;
    for (const auto& row : likelihood) sum += row[s];
    if (std::abs(sum - 1.0) > kBeliefSumTolerance)
      throw ValidationError("perception '" + name + "': observations for state " +
                            std::to_string(s) + " sum to " +
                            std::to_string(sum));
  }
}

std::string_view to_string(MoveKind k) {
  switch (k) {
    case MoveKind::forward: return "forward";
    case MoveKind::backward: return "backward";
    case MoveKind::rotate_cw: return "rotate_cw";
    case MoveKind::rotate_ccw: return "rotate_ccw";
    case MoveKind::right: return "right";
    case MoveKind::left: return "left";
    case MoveKind::up: return "up";
    case MoveKind::down: return "down";
  }
  return "?";
}

std::optional<MoveKind> move_kind_from_string(std::string_view s) {
  for (MoveKind k :
       {MoveKind::forward, MoveKind::backward, MoveKind::rotate_cw,
        MoveKind::rotate_ccw, MoveKind::right, MoveKind::left, MoveKind::up,
        MoveKind::down})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

void GridWorldSpec::validate() const {
  if (width < 1 || height < 1)
    throw SpecError("grid dimensions must be at least 1x1");
  if (cell_count() < 2) throw SpecError("grid needs at least two cells");
  if (orientations != 1 && orientations != 4 && orientations != 8)
    throw SpecError("orientations must be 1, 4, or 8");
  if (!(cell_size > 0.0)) throw SpecError("cell_size must be positive");
  for (double p : {p_false_positive, p_false_negative, p_actuation_failure})
    if (p < 0.0 || p >= 1.0 || !std::isfinite(p))
      throw SpecError("noise probabilities must lie in [0, 1)");
  if (!(actuation_cost > 0.0) || !(perception_cost > 0.0))
    throw SpecError("action costs must be positive");
  std::unordered_set<std::string> classes(object_classes.begin(),
                                          object_classes.end());
  if (classes.size() != object_classes.size())
    throw SpecError("duplicate object class label");
  for (const auto& p : placements) {
    if (!classes.count(p.object_class))
      throw SpecError("placement references unknown class '" + p.object_class +
                      "'");
    if (p.cell >= cell_count())
      throw SpecError("placement cell " + std::to_string(p.cell) +
                      " out of range");
  }
  for (MoveKind m : moves) {
    const bool directional = m == MoveKind::right || m == MoveKind::left ||
                             m == MoveKind::up || m == MoveKind::down;
    if (orientations == 1 && !directional)
      throw SpecError("unoriented grids use compass moves only");
    if (orientations > 1 && directional)
      throw SpecError("oriented grids use forward/backward/rotate moves");
  }
  if (!view_angle_bins.empty()) {
    if (orientations == 1)
      throw SpecError("viewing-angle bins require an oriented grid");
    double prev = 0.0;
    for (double e : view_angle_bins) {
      if (!(e > prev) || e > 180.0)
        throw SpecError("view_angle_bins must be ascending in (0, 180]");
      prev = e;
    }
  }
  if (wall_scan && orientations == 1)
    throw SpecError("wall scan requires an oriented grid");
}

void WorldModel::validate() const {
  if (state_count == 0) throw ValidationError("world has no states");
  if (actuation.empty() && perception.empty())
    throw ValidationError("world has no actions");
  std::unordered_set<std::string> names;
  for (const auto& a : actuation) {
    if (a.name.empty()) throw ValidationError("actuation action without name");
    if (!names.insert(a.name).second)
      throw ValidationError("duplicate action name '" + a.name + "'");
    if (!(a.cost > 0.0))
      throw ValidationError("action '" + a.name + "': cost must be positive");
    if (a.transition.size != state_count)
      throw ValidationError("action '" + a.name + "': matrix size mismatch");
    a.transition.validate();
  }
  for (const auto& p : perception) {
    if (p.name.empty()) throw ValidationError("perception action without name");
    if (!names.insert(p.name).second)
      throw ValidationError("duplicate action name '" + p.name + "'");
    if (!(p.cost > 0.0))
      throw ValidationError("action '" + p.name + "': cost must be positive");
    p.validate(state_count);
  }
  if (!state_labels.empty() && state_labels.size() != state_count)
    throw ValidationError("state_labels length != state count");
}

std::optional<ActionRef> WorldModel::find_action(std::string_view name) const {
  for (std::size_t i = 0; i < actuation.size(); ++i)
    if (actuation[i].name == name) return ActionRef{false, i};
  for (std::size_t i = 0; i < perception.size(); ++i)
    if (perception[i].name == name) return ActionRef{true, i};
  return std::nullopt;
}

}  // namespace beliefplan
