#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <unordered_set>

#include "beliefplan/rng.hpp"
#include "beliefplan/world.hpp"

namespace beliefplan {

namespace {

constexpr double kScanEdges[] = {0.2, 0.8, 1.1, 1.5};

struct MoveDelta {
  int dx = 0;
  int dy = 0;
  int dorient = 0;
};

// Integer facing vector for orientation d: counterclockwise from +x, so
// orientations 0..3 are E/N/W/S (O=4) and odd indices are diagonals (O=8).
void facing_delta(unsigned d, unsigned orientations, int& dx, int& dy) {
  if (orientations == 1) {
    dx = 1;
    dy = 0;
    return;
  }
  const unsigned step = 8 / orientations;  // 2 for O=4, 1 for O=8
  static constexpr int kdx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static constexpr int kdy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  dx = kdx[(d * step) % 8];
  dy = kdy[(d * step) % 8];
}

MoveDelta move_delta(MoveKind kind, unsigned orient, unsigned orientations) {
  MoveDelta m;
  int fx = 0, fy = 0;
  switch (kind) {
    case MoveKind::forward:
      facing_delta(orient, orientations, m.dx, m.dy);
      break;
    case MoveKind::backward:
      facing_delta(orient, orientations, fx, fy);
      m.dx = -fx;
      m.dy = -fy;
      break;
    case MoveKind::rotate_cw:
      m.dorient = -1;
      break;
    case MoveKind::rotate_ccw:
      m.dorient = 1;
      break;
    case MoveKind::right: m.dx = 1; break;
    case MoveKind::left: m.dx = -1; break;
    case MoveKind::up: m.dy = 1; break;
    case MoveKind::down: m.dy = -1; break;
  }
  return m;
}

std::string move_name(MoveKind kind) {
  switch (kind) {
    case MoveKind::forward: return "MoveForward";
    case MoveKind::backward: return "MoveBackward";
    case MoveKind::rotate_cw: return "RotateCW";
    case MoveKind::rotate_ccw: return "RotateCCW";
    case MoveKind::right: return "Right";
    case MoveKind::left: return "Left";
    case MoveKind::up: return "Up";
    case MoveKind::down: return "Down";
  }
  return "?";
}

// Target state of a move, or the state itself when blocked by the boundary.
StateId move_target(const GridWorldSpec& spec, StateId s, MoveKind kind) {
  const std::size_t cell = spec.state_cell(s);
  const unsigned orient = spec.state_orientation(s);
  const MoveDelta m = move_delta(kind, orient, spec.orientations);
  if (m.dorient != 0) {
    const unsigned o = static_cast<unsigned>(
        (static_cast<int>(orient) + m.dorient + static_cast<int>(spec.orientations)) %
        static_cast<int>(spec.orientations));
    return spec.state_id(cell, o);
  }
  const auto x = static_cast<long>(spec.cell_x(cell)) + m.dx;
  const auto y = static_cast<long>(spec.cell_y(cell)) + m.dy;
  if (x < 0 || y < 0 || x >= static_cast<long>(spec.width) ||
      y >= static_cast<long>(spec.height))
    return s;
  return spec.state_id(spec.cell_index(static_cast<std::size_t>(x),
                                       static_cast<std::size_t>(y)),
                       orient);
}

TransitionMatrix move_matrix(const GridWorldSpec& spec, MoveKind kind) {
  const std::size_t n = spec.state_count();
  TransitionMatrix t;
  t.size = n;
  t.row_begin.reserve(n + 1);
  t.row_begin.push_back(0);
  const double p_fail = spec.p_actuation_failure;
  for (StateId s = 0; s < n; ++s) {
    const StateId to = move_target(spec, s, kind);
    if (to == s || p_fail == 0.0) {
      const StateId dst = (to == s) ? s : to;
      t.col.push_back(static_cast<std::uint32_t>(dst));
      t.value.push_back(1.0);
    } else {
      // CSR columns ascending within the row.
      const StateId first = std::min(s, to);
      const StateId second = std::max(s, to);
      t.col.push_back(static_cast<std::uint32_t>(first));
      t.value.push_back(first == s ? p_fail : 1.0 - p_fail);
      t.col.push_back(static_cast<std::uint32_t>(second));
      t.value.push_back(second == s ? p_fail : 1.0 - p_fail);
    }
    t.row_begin.push_back(static_cast<std::uint32_t>(t.col.size()));
  }
  return t;
}

double wrap_angle_deg(double a) {
  while (a > 180.0) a -= 360.0;
  while (a < -180.0) a += 360.0;
  return std::abs(a);
}

// Angle-bin index (0-based) for class `cls` from state s, or -1 when no
// object of the class falls inside the widest bin. Nearest-in-angle object
// wins; distance breaks ties.
int view_angle_bin(const GridWorldSpec& spec, StateId s,
                   const std::string& cls) {
  const std::size_t cell = spec.state_cell(s);
  const double cx = spec.cell_x(cell) + 0.5;
  const double cy = spec.cell_y(cell) + 0.5;
  const double heading = 360.0 * spec.state_orientation(s) /
                         static_cast<double>(spec.orientations);
  double best_angle = 1e9, best_dist = 1e9;
  bool found = false;
  for (const auto& p : spec.placements) {
    if (p.object_class != cls || p.cell == cell) continue;
    const double ox = spec.cell_x(p.cell) + 0.5;
    const double oy = spec.cell_y(p.cell) + 0.5;
    const double bearing =
        std::atan2(oy - cy, ox - cx) * 180.0 / std::numbers::pi;
    const double off = wrap_angle_deg(bearing - heading);
    if (off >= spec.view_angle_bins.back()) continue;
    const double dist = std::hypot(ox - cx, oy - cy);
    if (!found || off < best_angle ||
        (off == best_angle && dist < best_dist)) {
      found = true;
      best_angle = off;
      best_dist = dist;
    }
  }
  if (!found) return -1;
  for (std::size_t k = 0; k < spec.view_angle_bins.size(); ++k)
    if (best_angle < spec.view_angle_bins[k]) return static_cast<int>(k);
  return -1;
}

std::string format_degrees(double d) {
  if (d == std::floor(d)) return std::to_string(static_cast<long>(d));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", d);
  return buf;
}

// Detector with per-class angle bins: observation = one outcome per class
// (unseen or one bin), encoded mixed-radix with class 0 least significant.
PerceptionAction make_binned_look(const GridWorldSpec& spec) {
  const std::size_t n = spec.state_count();
  const std::size_t nclasses = spec.object_classes.size();
  const std::size_t bins = spec.view_angle_bins.size();
  const std::size_t outcomes = bins + 1;
  std::size_t total = 1;
  for (std::size_t c = 0; c < nclasses; ++c) {
    total *= outcomes;
    if (total > 4096)
      throw SpecError("viewing-angle detector would need > 4096 observations");
  }

  PerceptionAction look;
  look.name = "Look";
  look.cost = spec.perception_cost;

  std::vector<std::string> bin_label(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double lo = k == 0 ? 0.0 : spec.view_angle_bins[k - 1];
    bin_label[k] = format_degrees(lo) + "-" +
                   format_degrees(spec.view_angle_bins[k]);
  }
  for (std::size_t code = 0; code < total; ++code) {
    std::string label;
    std::size_t rest = code;
    for (std::size_t c = 0; c < nclasses; ++c) {
      const std::size_t outcome = rest % outcomes;
      rest /= outcomes;
      if (outcome == 0) continue;
      if (!label.empty()) label += '+';
      label += spec.object_classes[c] + "@" + bin_label[outcome - 1];
    }
    look.observations.push_back(label.empty() ? "none" : label);
  }

  // True outcome per (class, state), then likelihood as a product of
  // per-class factors.
  std::vector<std::vector<int>> true_outcome(nclasses, std::vector<int>(n));
  for (std::size_t c = 0; c < nclasses; ++c)
    for (StateId s = 0; s < n; ++s)
      true_outcome[c][s] = view_angle_bin(spec, s, spec.object_classes[c]) + 1;

  const double p_fp = spec.p_false_positive;
  const double p_fn = spec.p_false_negative;
  look.likelihood.assign(total, std::vector<double>(n, 1.0));
  for (std::size_t code = 0; code < total; ++code) {
    for (StateId s = 0; s < n; ++s) {
      double prob = 1.0;
      std::size_t rest = code;
      for (std::size_t c = 0; c < nclasses; ++c) {
        const auto outcome = static_cast<int>(rest % outcomes);
        rest /= outcomes;
        const int truth = true_outcome[c][s];
        double f;
        if (truth == 0)
          f = outcome == 0 ? 1.0 - p_fp : p_fp / static_cast<double>(bins);
        else if (outcome == truth)
          f = 1.0 - p_fn;
        else
          f = outcome == 0 ? p_fn : 0.0;
        prob *= f;
      }
      look.likelihood[code][s] = prob;
    }
  }
  return look;
}

PerceptionAction make_subset_look(const GridWorldSpec& spec) {
  const std::size_t n = spec.state_count();
  const std::size_t nclasses = spec.object_classes.size();
  if (nclasses > 10)
    throw SpecError("subset detector supports at most 10 object classes");
  const std::size_t total = std::size_t{1} << nclasses;

  PerceptionAction look;
  look.name = "Look";
  look.cost = spec.perception_cost;
  for (std::size_t mask = 0; mask < total; ++mask) {
    std::string label;
    for (std::size_t c = 0; c < nclasses; ++c) {
      if (!(mask & (std::size_t{1} << c))) continue;
      if (!label.empty()) label += '+';
      label += spec.object_classes[c];
    }
    look.observations.push_back(label.empty() ? "none" : label);
  }

  std::vector<std::vector<char>> visible(nclasses, std::vector<char>(n, 0));
  for (StateId s = 0; s < n; ++s)
    for (const std::string& cls : visible_classes(spec, s))
      for (std::size_t c = 0; c < nclasses; ++c)
        if (spec.object_classes[c] == cls) visible[c][s] = 1;

  const double p_fp = spec.p_false_positive;
  const double p_fn = spec.p_false_negative;
  look.likelihood.assign(total, std::vector<double>(n, 1.0));
  for (std::size_t mask = 0; mask < total; ++mask)
    for (StateId s = 0; s < n; ++s) {
      double prob = 1.0;
      for (std::size_t c = 0; c < nclasses; ++c) {
        const bool reported = mask & (std::size_t{1} << c);
        const bool vis = visible[c][s];
        prob *= reported ? (vis ? 1.0 - p_fn : p_fp)
                         : (vis ? p_fn : 1.0 - p_fp);
      }
      look.likelihood[mask][s] = prob;
    }
  return look;
}

PerceptionAction make_scan(const GridWorldSpec& spec) {
  const std::size_t n = spec.state_count();
  PerceptionAction scan;
  scan.name = "Scan";
  scan.cost = spec.perception_cost;
  scan.observations = {"no_wall", "wall<0.2m", "wall_0.2-0.8m",
                       "wall_0.8-1.1m", "wall_1.1-1.5m"};

  std::vector<int> truth(n);
  for (StateId s = 0; s < n; ++s) {
    const double d = wall_distance(spec, s);
    int bin = 0;
    for (int k = 0; k < 4; ++k)
      if (d < kScanEdges[k]) {
        bin = k + 1;
        break;
      }
    truth[s] = bin;
  }

  const double p_fp = spec.p_false_positive;
  const double p_fn = spec.p_false_negative;
  scan.likelihood.assign(5, std::vector<double>(n, 0.0));
  for (StateId s = 0; s < n; ++s) {
    if (truth[s] == 0) {
      scan.likelihood[0][s] = 1.0 - p_fp;
      for (int k = 1; k <= 4; ++k) scan.likelihood[k][s] = p_fp / 4.0;
    } else {
      scan.likelihood[truth[s]][s] = 1.0 - p_fn;
      scan.likelihood[0][s] = p_fn;
    }
  }
  return scan;
}

}  // namespace

std::vector<std::string> visible_classes(const GridWorldSpec& spec,
                                         StateId s) {
  std::set<std::string> out;
  if (!spec.view_angle_bins.empty()) {
    for (const std::string& cls : spec.object_classes)
      if (view_angle_bin(spec, s, cls) >= 0) out.insert(cls);
    return {out.begin(), out.end()};
  }
  std::size_t look_cell;
  if (spec.orientations == 1) {
    look_cell = spec.state_cell(s);
  } else {
    const StateId fwd = move_target(spec, s, MoveKind::forward);
    if (fwd == s) return {};  // facing the boundary
    look_cell = spec.state_cell(fwd);
  }
  for (const auto& p : spec.placements)
    if (p.cell == look_cell) out.insert(p.object_class);
  return {out.begin(), out.end()};
}

double wall_distance(const GridWorldSpec& spec, StateId s) {
  const std::size_t cell = spec.state_cell(s);
  const double cx = (spec.cell_x(cell) + 0.5) * spec.cell_size;
  const double cy = (spec.cell_y(cell) + 0.5) * spec.cell_size;
  const double theta = 2.0 * std::numbers::pi * spec.state_orientation(s) /
                       static_cast<double>(spec.orientations);
  const double ux = std::cos(theta);
  const double uy = std::sin(theta);
  double t = std::numeric_limits<double>::infinity();
  const double eps = 1e-12;
  if (ux > eps) t = std::min(t, (spec.width * spec.cell_size - cx) / ux);
  if (ux < -eps) t = std::min(t, -cx / ux);
  if (uy > eps) t = std::min(t, (spec.height * spec.cell_size - cy) / uy);
  if (uy < -eps) t = std::min(t, -cy / uy);
  return t;
}

WorldModel compile_grid_world(const GridWorldSpec& spec) {
  spec.validate();
  WorldModel w;
  w.state_count = spec.state_count();
  w.grid = spec;

  std::vector<MoveKind> moves = spec.moves;
  if (moves.empty()) {
    if (spec.orientations == 1)
      moves = {MoveKind::right, MoveKind::left, MoveKind::up, MoveKind::down};
    else
      moves = {MoveKind::forward, MoveKind::backward, MoveKind::rotate_cw,
               MoveKind::rotate_ccw};
  }
  for (MoveKind kind : moves) {
    ActuationAction a;
    a.name = move_name(kind);
    a.cost = spec.actuation_cost;
    a.transition = move_matrix(spec, kind);
    w.actuation.push_back(std::move(a));
  }

  if (!spec.object_classes.empty())
    w.perception.push_back(spec.view_angle_bins.empty()
                               ? make_subset_look(spec)
                               : make_binned_look(spec));
  if (spec.wall_scan) w.perception.push_back(make_scan(spec));

  w.state_labels.reserve(w.state_count);
  for (StateId s = 0; s < w.state_count; ++s) {
    const std::size_t cell = spec.state_cell(s);
    std::string label = "(" + std::to_string(spec.cell_x(cell)) + "," +
                        std::to_string(spec.cell_y(cell)) + ")";
    if (spec.orientations > 1)
      label += "@" + std::to_string(spec.state_orientation(s));
    w.state_labels.push_back(std::move(label));
  }

  w.validate();
  return w;
}

RandomWorld random_world(std::size_t width, std::size_t height,
                         unsigned orientations, std::uint64_t seed) {
  static const std::vector<std::string> kClasses = {"plant", "extinguisher",
                                                    "chair", "screen"};
  Rng rng(seed);
  RandomWorld rw;
  GridWorldSpec& spec = rw.spec;
  spec.width = width;
  spec.height = height;
  spec.orientations = orientations;
  spec.object_classes = kClasses;
  spec.p_false_positive = 0.01;
  spec.p_false_negative = 0.01;
  spec.p_actuation_failure = 0.02;
  spec.actuation_cost = 10.0;
  spec.perception_cost = 1.0;

  std::size_t count = 4 + rng.bounded(5);  // uniform over {4..8}
  count = std::min(count, spec.cell_count());
  std::unordered_set<std::size_t> taken;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string& cls = kClasses[rng.bounded(kClasses.size())];
    std::size_t cell;
    do {
      cell = rng.bounded(spec.cell_count());
    } while (taken.count(cell));
    taken.insert(cell);
    spec.placements.push_back({cls, cell});
  }
  rw.true_initial_state = rng.bounded(spec.state_count());
  spec.validate();
  return rw;
}

}  // namespace beliefplan
