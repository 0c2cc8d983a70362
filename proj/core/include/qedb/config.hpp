#pragma once

#include "qedb/ingest.hpp"

#include <string>

namespace qedb {

// Pipeline-wide knobs; serializes to a human-editable JSON file. CLI flags
// override file values, which override these defaults.
struct Config {
  double min_link_confidence = 0.25;
  double min_align_conf = 2.0 / 3.0;
  std::size_t max_bridge_popularity = 100000;
  double distinctness_threshold = 0.8;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  bool strict = false;

  bool operator==(const Config&) const = default;
};

// Throws DataError on unreadable file, bad JSON, or out-of-range values.
Config load_config(const std::string& path);
void save_config(const Config& config, const std::string& path);

// Range validation shared by file load and flag parsing.
void validate_config(const Config& config);

}  // namespace qedb
