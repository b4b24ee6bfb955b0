#pragma once

#include <map>
#include <string>
#include <vector>

#include "vpfp/scenarios.hpp"

namespace vpfp {

/**
 * INI configuration. Sections: [scenario], [discretization], [time], [adaptive],
 * [output]. A file may start from a preset with `preset = <name>` in [scenario];
 * every other key overrides that base. Unknown keys are errors.
 */
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<string>");
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

/** Applies "section.key=value" style overrides. */
void apply_override(ScenarioConfig& cfg, const std::string& section, const std::string& key, const std::string& value);

std::string version_string();

struct RunManifest {
  ScenarioConfig config;
  std::string version;
  std::string start_time;
  std::string end_time;
  std::vector<std::string> files;
  std::string status;  // "completed" or "error: <kind>"
  std::map<std::string, std::string> summary;
};

/** Writes the manifest through a temporary file and a rename. */
void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

/** Writes text to path through a temporary file and a rename. */
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace vpfp
