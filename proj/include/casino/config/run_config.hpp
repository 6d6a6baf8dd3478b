#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "casino/predictor/pipeline.hpp"
#include "casino/synth/generator.hpp"

namespace casino::config {

inline constexpr const char* kConfigEnvVar = "CASINO_CONFIG";

/// Everything a CLI run can be told, with defaults filled in.
struct RunConfig {
  predictor::PipelineConfig pipeline;
  std::filesystem::path lexicon;
  std::filesystem::path pos_dictionary;
  synth::SynthConfig synth;

  RunConfig();

  /// Sets "section.key" from its textual value. Unknown keys and unparsable
  /// values raise ConfigError.
  void set(const std::string& dotted_key, const std::string& value);

  /// Cross-field checks (radii ordering, split fractions, ...).
  void validate() const;

  nlohmann::json to_json() const;
};

/// Keys accepted by RunConfig::set, in echo order.
std::vector<std::string> known_keys();

/// INI text that load_run_config reads back to the same settings.
std::string to_ini(const RunConfig& cfg);

/// Defaults, then the INI file (explicit path, else $CASINO_CONFIG when set),
/// then each "section.key=value" override in order.
RunConfig load_run_config(const std::optional<std::filesystem::path>& file,
                          const std::vector<std::string>& overrides);

}  // namespace casino::config
