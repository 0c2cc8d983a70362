#pragma once

#include "qedb/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

namespace qedb {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kStoreFormatVersion = 1;

// Writes the graph as a directory: manifest.json (version + per-file
// checksums), nodes.jsonl, edges.jsonl, mentions.jsonl. Byte-identical for
// equal graphs.
void save_store(const QedbGraph& graph, const std::filesystem::path& dir);

// Rebuilds indexes on load. Throws StoreError on version mismatch or
// checksum failure, naming the offending file.
QedbGraph load_store(const std::filesystem::path& dir);

// Lossless line-delimited dump: node, edge, and mention lines, in canonical
// order. import_export() inverts it exactly.
void export_graph(const QedbGraph& graph, std::ostream& out);
QedbGraph import_export(std::istream& in);

}  // namespace qedb
