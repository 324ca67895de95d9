#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "scse/trainer.hpp"

namespace scse {

std::string version_string();

/// Parses a config document. Every field is optional and defaulted;
/// unknown keys are rejected.
TrainConfig train_config_from_json(const nlohmann::json& doc);

/// Loads and parses a JSON config file; parse errors carry line numbers.
TrainConfig load_train_config(const std::string& path);

/// Fully resolved config, suitable for the run manifest.
nlohmann::json train_config_to_json(const TrainConfig& cfg);

/// FNV-1a 64-bit digest of a file's bytes, as a hex string.
std::string fnv1a64_file(const std::string& path);

}  // namespace scse
