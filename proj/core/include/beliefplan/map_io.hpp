#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "beliefplan/world.hpp"

namespace beliefplan {

/// Malformed JSON or missing/mistyped fields; message carries file and
/// line/field context. Semantic violations surface as ValidationError or
/// SpecError instead.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Map files are JSON with either a "grid" section (compact grid form,
/// compiled on load) or a dense "states" form with explicit matrices.
/// See README for the schema.
WorldModel load_map(const std::filesystem::path& path);
WorldModel load_map_json(const std::string& text,
                         std::string_view origin = "<string>");

/// Writes the grid form when the model carries grid provenance, the dense
/// form otherwise. Field order is fixed so identical models produce
/// byte-identical files.
void save_map(const WorldModel& model, const std::filesystem::path& path);
std::string save_map_json(const WorldModel& model);

}  // namespace beliefplan
