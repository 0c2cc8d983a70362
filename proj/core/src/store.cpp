#include "qedb/store.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qedb {

namespace {

using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << h;
  return out.str();
}

json node_to_json(const Node& n) {
  json j;
  if (n.id.kind == NodeId::Kind::Entity) {
    j["kind"] = "entity";
    j["entity_id"] = n.id.entity_id;
  } else {
    j["kind"] = "span";
    j["doc_id"] = n.id.doc_id;
    j["start"] = n.id.start;
    j["end"] = n.id.end;
    j["is_answer"] = n.is_answer;
    j["is_reference"] = n.is_reference;
  }
  j["text"] = n.text;
  return j;
}

Node node_from_json(const json& j) {
  Node n;
  if (j.at("kind") == "entity") {
    n.id = NodeId::entity(j.at("entity_id").get<std::string>());
  } else {
    n.id = NodeId::span(j.at("doc_id").get<std::string>(),
                        j.at("start").get<std::size_t>(),
                        j.at("end").get<std::size_t>());
    n.is_answer = j.at("is_answer").get<bool>();
    n.is_reference = j.at("is_reference").get<bool>();
  }
  n.text = j.at("text").get<std::string>();
  return n;
}

json node_id_to_json(const NodeId& id) {
  json j;
  if (id.kind == NodeId::Kind::Entity) {
    j["entity_id"] = id.entity_id;
  } else {
    j["doc_id"] = id.doc_id;
    j["start"] = id.start;
    j["end"] = id.end;
  }
  return j;
}

NodeId node_id_from_json(const json& j) {
  if (j.contains("entity_id")) {
    return NodeId::entity(j.at("entity_id").get<std::string>());
  }
  return NodeId::span(j.at("doc_id").get<std::string>(),
                      j.at("start").get<std::size_t>(),
                      j.at("end").get<std::size_t>());
}

json edge_to_json(const QuestionEdge& e) {
  json j;
  j["record_id"] = e.record_id;
  j["question"] = e.question;
  j["label"] = e.label;
  json q_spans = json::array();
  for (const auto& s : e.q_spans) {
    q_spans.push_back({{"start", s.start}, {"end", s.end}, {"text", s.text}});
  }
  j["q_spans"] = std::move(q_spans);
  json sources = json::array();
  for (const auto& s : e.sources) sources.push_back(node_id_to_json(s));
  j["sources"] = std::move(sources);
  j["target"] = node_id_to_json(e.target);
  j["min_align_confidence"] = e.min_align_confidence;
  return j;
}

QuestionEdge edge_from_json(const json& j) {
  QuestionEdge e;
  e.record_id = j.at("record_id").get<std::string>();
  e.question = j.at("question").get<std::string>();
  e.label = j.at("label").get<std::string>();
  for (const auto& s : j.at("q_spans")) {
    e.q_spans.push_back({s.at("start").get<std::size_t>(),
                         s.at("end").get<std::size_t>(),
                         s.at("text").get<std::string>()});
  }
  for (const auto& s : j.at("sources")) e.sources.push_back(node_id_from_json(s));
  e.target = node_id_from_json(j.at("target"));
  e.min_align_confidence = j.at("min_align_confidence").get<double>();
  return e;
}

json mention_to_json(const MentionEdge& m) {
  json j;
  j["entity_id"] = m.entity_id;
  j["node"] = node_id_to_json(m.node);
  j["confidence"] = m.confidence;
  j["via"] = m.via == MentionVia::Link ? "link" : "match";
  return j;
}

MentionEdge mention_from_json(const json& j) {
  MentionEdge m;
  m.entity_id = j.at("entity_id").get<std::string>();
  m.node = node_id_from_json(j.at("node"));
  m.confidence = j.at("confidence").get<double>();
  m.via = j.at("via") == "link" ? MentionVia::Link : MentionVia::Match;
  return m;
}

std::string render_nodes(const QedbGraph& g) {
  std::string out;
  for (const auto& n : g.nodes) out += node_to_json(n).dump() + "\n";
  return out;
}

std::string render_edges(const QedbGraph& g) {
  std::string out;
  for (const auto& e : g.edges) out += edge_to_json(e).dump() + "\n";
  return out;
}

std::string render_mentions(const QedbGraph& g) {
  std::string out;
  for (const auto& m : g.mentions) out += mention_to_json(m).dump() + "\n";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StoreError("cannot write " + path.string());
  out << data;
  if (!out) throw StoreError("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
void for_each_line(const std::string& data, Fn fn) {
  std::istringstream in(data);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) fn(line);
  }
}

}  // namespace

void save_store(const QedbGraph& graph, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw StoreError("cannot create store directory " + dir.string());

  const std::string nodes = render_nodes(graph);
  const std::string edges = render_edges(graph);
  const std::string mentions = render_mentions(graph);

  json manifest;
  manifest["format_version"] = kStoreFormatVersion;
  manifest["checksums"] = {{"nodes.jsonl", fnv1a_hex(nodes)},
                           {"edges.jsonl", fnv1a_hex(edges)},
                           {"mentions.jsonl", fnv1a_hex(mentions)}};

  write_file(dir / "nodes.jsonl", nodes);
  write_file(dir / "edges.jsonl", edges);
  write_file(dir / "mentions.jsonl", mentions);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

QedbGraph load_store(const std::filesystem::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw StoreError("corrupt manifest.json in " + dir.string() + ": " +
                     e.what());
  }
  const int version = manifest.at("format_version").get<int>();
  if (version != kStoreFormatVersion) {
    throw StoreError("store format version " + std::to_string(version) +
                     " not supported (expected " +
                     std::to_string(kStoreFormatVersion) + ")");
  }

  QedbGraph graph;
  const auto& checksums = manifest.at("checksums");
  for (const char* name : {"nodes.jsonl", "edges.jsonl", "mentions.jsonl"}) {
    const std::string data = read_file(dir / name);
    if (fnv1a_hex(data) != checksums.at(name).get<std::string>()) {
      throw StoreError(std::string("checksum mismatch in ") +
                       (dir / name).string());
    }
    try {
      if (std::string(name) == "nodes.jsonl") {
        for_each_line(data, [&](const std::string& line) {
          graph.nodes.push_back(node_from_json(json::parse(line)));
        });
      } else if (std::string(name) == "edges.jsonl") {
        for_each_line(data, [&](const std::string& line) {
          graph.edges.push_back(edge_from_json(json::parse(line)));
        });
      } else {
        for_each_line(data, [&](const std::string& line) {
          graph.mentions.push_back(mention_from_json(json::parse(line)));
        });
      }
    } catch (const json::exception& e) {
      throw StoreError(std::string("corrupt record in ") +
                       (dir / name).string() + ": " + e.what());
    }
  }
  graph.rebuild_indexes();
  return graph;
}

void export_graph(const QedbGraph& graph, std::ostream& out) {
  for (const auto& n : graph.nodes) {
    json j = node_to_json(n);
    j["type"] = "node";
    out << j.dump() << "\n";
  }
  for (const auto& e : graph.edges) {
    json j = edge_to_json(e);
    j["type"] = "edge";
    out << j.dump() << "\n";
  }
  for (const auto& m : graph.mentions) {
    json j = mention_to_json(m);
    j["type"] = "mention";
    out << j.dump() << "\n";
  }
}

QedbGraph import_export(std::istream& in) {
  QedbGraph graph;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "node") {
        graph.nodes.push_back(node_from_json(j));
      } else if (type == "edge") {
        graph.edges.push_back(edge_from_json(j));
      } else if (type == "mention") {
        graph.mentions.push_back(mention_from_json(j));
      } else {
        throw StoreError("unknown export line type: " + type);
      }
    } catch (const json::exception& e) {
      throw StoreError("export line " + std::to_string(lineno) + ": " +
                       e.what());
    }
  }
  graph.rebuild_indexes();
  return graph;
}

}  // namespace qedb
