#include "beliefplan/map_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace beliefplan {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(std::string_view origin, const std::string& what) {
  throw ParseError(std::string(origin) + ": " + what);
}

const json& req(const json& j, const char* key, std::string_view origin,
                const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    fail(origin, std::string(where) + ": missing field '" + key + "'");
  return *it;
}

double num_field(const json& j, const char* key, std::string_view origin,
                 const char* where) {
  const json& v = req(j, key, origin, where);
  if (!v.is_number())
    fail(origin, std::string(where) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback,
              std::string_view origin, const char* where) {
  if (!j.contains(key)) return fallback;
  return num_field(j, key, origin, where);
}

std::size_t uint_field(const json& j, const char* key, std::string_view origin,
                       const char* where) {
  const json& v = req(j, key, origin, where);
  if (!v.is_number_unsigned())
    fail(origin,
         std::string(where) + ": field '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string str_field(const json& j, const char* key, std::string_view origin,
                      const char* where) {
  const json& v = req(j, key, origin, where);
  if (!v.is_string())
    fail(origin, std::string(where) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const json& v, std::string_view origin,
                                 const char* where) {
  if (!v.is_array()) fail(origin, std::string(where) + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number())
      fail(origin, std::string(where) + ": expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

WorldModel load_grid_form(const json& root, std::string_view origin) {
  const json& g = root.at("grid");
  if (!g.is_object()) fail(origin, "'grid' must be an object");

  GridWorldSpec spec;
  spec.width = uint_field(g, "width", origin, "grid");
  spec.height = uint_field(g, "height", origin, "grid");
  spec.orientations =
      static_cast<unsigned>(uint_field(g, "orientations", origin, "grid"));
  spec.cell_size = num_or(g, "cell_size", 1.0, origin, "grid");
  if (g.contains("classes")) {
    for (const auto& c : g.at("classes")) {
      if (!c.is_string()) fail(origin, "grid.classes: expected strings");
      spec.object_classes.push_back(c.get<std::string>());
    }
  }
  spec.p_false_positive = num_or(g, "p_false_positive", 0.0, origin, "grid");
  spec.p_false_negative = num_or(g, "p_false_negative", 0.0, origin, "grid");
  spec.p_actuation_failure =
      num_or(g, "p_actuation_failure", 0.0, origin, "grid");
  spec.actuation_cost = num_or(g, "actuation_cost", 10.0, origin, "grid");
  spec.perception_cost = num_or(g, "perception_cost", 1.0, origin, "grid");
  if (g.contains("view_angle_bins"))
    spec.view_angle_bins =
        number_array(g.at("view_angle_bins"), origin, "grid.view_angle_bins");

  if (root.contains("annotations")) {
    const json& anns = root.at("annotations");
    if (!anns.is_array()) fail(origin, "'annotations' must be an array");
    for (const auto& a : anns)
      spec.placements.push_back(
          {str_field(a, "class", origin, "annotations[]"),
           uint_field(a, "cell", origin, "annotations[]")});
  }

  if (root.contains("actuation")) {
    const json& acts = root.at("actuation");
    if (!acts.is_array()) fail(origin, "'actuation' must be an array");
    for (const auto& a : acts) {
      const std::string kind = str_field(a, "kind", origin, "actuation[]");
      const auto mk = move_kind_from_string(kind);
      if (!mk) fail(origin, "actuation[]: unknown move kind '" + kind + "'");
      spec.moves.push_back(*mk);
    }
  }

  if (root.contains("perception")) {
    const json& percs = root.at("perception");
    if (!percs.is_array()) fail(origin, "'perception' must be an array");
    for (const auto& p : percs) {
      const std::string kind = str_field(p, "auto", origin, "perception[]");
      if (kind == "scan")
        spec.wall_scan = true;
      else if (kind != "look")
        fail(origin, "perception[]: unknown detector '" + kind + "'");
    }
  }

  return compile_grid_world(spec);
}

WorldModel load_dense_form(const json& root, std::string_view origin) {
  WorldModel w;
  w.state_count = uint_field(root, "states", origin, "<top>");
  if (root.contains("state_labels")) {
    for (const auto& s : root.at("state_labels")) {
      if (!s.is_string()) fail(origin, "state_labels: expected strings");
      w.state_labels.push_back(s.get<std::string>());
    }
  }
  if (root.contains("actuation")) {
    const json& acts = root.at("actuation");
    if (!acts.is_array()) fail(origin, "'actuation' must be an array");
    for (const auto& a : acts) {
      ActuationAction act;
      act.name = str_field(a, "name", origin, "actuation[]");
      act.cost = num_or(a, "cost", 1.0, origin, "actuation[]");
      const json& m = req(a, "matrix", origin, "actuation[]");
      if (!m.is_array()) fail(origin, "actuation[].matrix must be an array");
      std::vector<std::vector<double>> rows;
      for (const auto& row : m)
        rows.push_back(number_array(row, origin, "actuation[].matrix"));
      act.transition = TransitionMatrix::from_dense(rows);
      w.actuation.push_back(std::move(act));
    }
  }
  if (root.contains("perception")) {
    const json& percs = root.at("perception");
    if (!percs.is_array()) fail(origin, "'perception' must be an array");
    for (const auto& p : percs) {
      PerceptionAction act;
      act.name = str_field(p, "name", origin, "perception[]");
      act.cost = num_or(p, "cost", 1.0, origin, "perception[]");
      for (const auto& o : req(p, "observations", origin, "perception[]")) {
        if (!o.is_string())
          fail(origin, "perception[].observations: expected strings");
        act.observations.push_back(o.get<std::string>());
      }
      const json& rows = req(p, "likelihood", origin, "perception[]");
      if (!rows.is_array())
        fail(origin, "perception[].likelihood must be an array");
      for (const auto& row : rows)
        act.likelihood.push_back(
            number_array(row, origin, "perception[].likelihood"));
      w.perception.push_back(std::move(act));
    }
  }
  w.validate();
  return w;
}

}  // namespace

WorldModel load_map_json(const std::string& text, std::string_view origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // json counts bytes; report the line too, people edit maps by hand.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    fail(origin, "invalid JSON near line " + std::to_string(line) + ": " +
                     e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  if (root.contains("grid")) return load_grid_form(root, origin);
  if (root.contains("states")) return load_dense_form(root, origin);
  fail(origin, "expected either a 'grid' section or a 'states' count");
}

WorldModel load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_map_json(buf.str(), path.string());
}

std::string save_map_json(const WorldModel& model) {
  ordered_json root;
  if (model.grid) {
    const GridWorldSpec& spec = *model.grid;
    ordered_json g;
    g["width"] = spec.width;
    g["height"] = spec.height;
    g["orientations"] = spec.orientations;
    g["cell_size"] = spec.cell_size;
    g["classes"] = spec.object_classes;
    g["p_false_positive"] = spec.p_false_positive;
    g["p_false_negative"] = spec.p_false_negative;
    g["p_actuation_failure"] = spec.p_actuation_failure;
    g["actuation_cost"] = spec.actuation_cost;
    g["perception_cost"] = spec.perception_cost;
    if (!spec.view_angle_bins.empty())
      g["view_angle_bins"] = spec.view_angle_bins;
    root["grid"] = std::move(g);

    root["annotations"] = ordered_json::array();
    for (const auto& p : spec.placements)
      root["annotations"].push_back(
          ordered_json{{"class", p.object_class}, {"cell", p.cell}});

    root["actuation"] = ordered_json::array();
    for (std::size_t i = 0; i < model.actuation.size(); ++i) {
      // moves may have been defaulted at compile time; recover the kinds
      // from the compiled action order.
      ordered_json a;
      a["name"] = model.actuation[i].name;
      a["kind"] = spec.moves.empty()
                      ? std::string()  // filled below
                      : std::string(to_string(spec.moves[i]));
      a["cost"] = model.actuation[i].cost;
      root["actuation"].push_back(std::move(a));
    }
    if (spec.moves.empty()) {
      static const char* kDefaultOriented[] = {"forward", "backward",
                                               "rotate_cw", "rotate_ccw"};
      static const char* kDefaultFlat[] = {"right", "left", "up", "down"};
      for (std::size_t i = 0; i < root["actuation"].size(); ++i)
        root["actuation"][i]["kind"] = spec.orientations == 1
                                           ? kDefaultFlat[i]
                                           : kDefaultOriented[i];
    }

    root["perception"] = ordered_json::array();
    for (const auto& p : model.perception) {
      ordered_json e;
      e["name"] = p.name;
      e["auto"] = p.name == "Scan" ? "scan" : "look";
      e["cost"] = p.cost;
      root["perception"].push_back(std::move(e));
    }
  } else {
    root["states"] = model.state_count;
    if (!model.state_labels.empty()) root["state_labels"] = model.state_labels;
    root["actuation"] = ordered_json::array();
    for (const auto& a : model.actuation)
      root["actuation"].push_back(ordered_json{{"name", a.name},
                                               {"cost", a.cost},
                                               {"matrix", a.transition.to_dense()}});
    root["perception"] = ordered_json::array();
    for (const auto& p : model.perception)
      root["perception"].push_back(ordered_json{{"name", p.name},
                                                {"cost", p.cost},
                                                {"observations", p.observations},
                                                {"likelihood", p.likelihood}});
  }
  return root.dump(2) + "\n";
}

void save_map(const WorldModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  out << save_map_json(model);
  if (!out) throw ParseError(path.string() + ": write failed");
}

}  // namespace beliefplan
