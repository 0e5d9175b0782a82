#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "ctrack/pipeline.hpp"
#include "ctrack/synthetic.hpp"
#include "ctrack/tracker.hpp"

namespace ctrack {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed file contents (unparseable JSON, wrong schema version).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; key order is sorted so output is
/// byte-stable.
void write_json_file(const Json& j, const std::filesystem::path& path);
std::string dump_json(const Json& j);

/// Unknown keys and type mismatches raise InvalidArgument naming the key.
PipelineConfig pipeline_from_json(const Json& j);
Json to_json(const PipelineConfig& config);

Json track_to_json(const Track& track);
Track track_from_json(const Json& j);

struct SceneFile {
  SceneConfig config;
  std::uint64_t seed = 0;
};

Json scene_to_json(const SceneConfig& config, std::uint64_t seed);
SceneFile scene_from_json(const Json& j);

}  // namespace ctrack
