#pragma once

#include <filesystem>

#include "casino/data/dataset.hpp"

namespace casino {

/// The four JSON Lines files making up one city dataset.
struct DatasetPaths {
  std::filesystem::path users;
  std::filesystem::path groups;
  std::filesystem::path events;
  std::filesystem::path rsvps;

  /// users.jsonl, groups.jsonl, events.jsonl and rsvps.jsonl inside `dir`.
  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

/// Reads and validates a dataset. Missing files raise ConfigError; malformed
/// lines raise ValidationError naming file and line; invariant violations
/// raise ValidationError listing every offender.
Dataset load_dataset(const DatasetPaths& paths);

/// Writes the dataset back in the same JSONL schema, one entity per line.
void write_dataset(const Dataset& d, const DatasetPaths& paths);

}  // namespace casino
