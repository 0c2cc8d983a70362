#include "qedb/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace qedb {

namespace {
using nlohmann::json;

void check_unit(double v, const char* name) {
  if (v < 0.0 || v > 1.0) {
    throw DataError(std::string(name) + " must be in [0, 1]");
  }
}
}  // namespace

void validate_config(const Config& c) {
  check_unit(c.min_link_confidence, "min_link_confidence");
  check_unit(c.min_align_conf, "min_align_conf");
  check_unit(c.distinctness_threshold, "distinctness_threshold");
  check_unit(c.bm25_b, "bm25_b");
  if (c.bm25_k1 <= 0.0) throw DataError("bm25_k1 must be positive");
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("config file " + path + ": " + e.what());
  }
  Config c;
  c.min_link_confidence = j.value("min_link_confidence", c.min_link_confidence);
  c.min_align_conf = j.value("min_align_conf", c.min_align_conf);
  c.max_bridge_popularity =
      j.value("max_bridge_popularity", c.max_bridge_popularity);
  c.distinctness_threshold =
      j.value("distinctness_threshold", c.distinctness_threshold);
  c.bm25_k1 = j.value("bm25_k1", c.bm25_k1);
  c.bm25_b = j.value("bm25_b", c.bm25_b);
  c.strict = j.value("strict", c.strict);
  validate_config(c);
  return c;
}

void save_config(const Config& c, const std::string& path) {
  json j;
  j["min_link_confidence"] = c.min_link_confidence;
  j["min_align_conf"] = c.min_align_conf;
  j["max_bridge_popularity"] = c.max_bridge_popularity;
  j["distinctness_threshold"] = c.distinctness_threshold;
  j["bm25_k1"] = c.bm25_k1;
  j["bm25_b"] = c.bm25_b;
  j["strict"] = c.strict;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write config file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qedb
