#pragma once

#include "qedb/ingest.hpp"
#include "qedb/linker.hpp"
#include "qedb/model.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qedb {

// Canonical node identity. Span nodes are keyed by position only, so an
// answer span and a question-aligned reference span at the same position are
// the same node.
struct NodeId {
  enum class Kind { Span, Entity };
  Kind kind = Kind::Span;
  std::string doc_id;          // span nodes
  std::size_t start = 0;       // span nodes
  std::size_t end = 0;         // span nodes
  std::string entity_id;       // entity nodes

  static NodeId span(std::string doc_id, std::size_t start, std::size_t end) {
    return {Kind::Span, std::move(doc_id), start, end, {}};
  }
  static NodeId entity(std::string entity_id) {
    return {Kind::Entity, {}, 0, 0, std::move(entity_id)};
  }

  std::string key() const;  // stable total order / map key

  bool operator==(const NodeId&) const = default;
  auto operator<=>(const NodeId&) const = default;
};

struct Node {
  NodeId id;
  std::string text;            // span text, or entity canonical name
  bool is_answer = false;      // span roles across all incident records
  bool is_reference = false;

  bool operator==(const Node&) const = default;
};

// One labeled directed hyperedge: the record's reference spans point at its
// answer span, labeled with the abstracted question.
struct QuestionEdge {
  std::string record_id;
  std::string question;        // original surface form
  std::string label;           // abstracted question, $1..$k placeholders
  std::vector<Span> q_spans;   // question-side reference spans, same order
  std::vector<NodeId> sources; // r_d nodes, in reference order
  NodeId target;               // answer node
  double min_align_confidence = 1.0;

  bool operator==(const QuestionEdge&) const = default;
};

enum class MentionVia { Link, Match };

// Entity-to-span attachment with the confidence that produced it.
struct MentionEdge {
  std::string entity_id;
  NodeId node;
  double confidence = 0.0;
  MentionVia via = MentionVia::Link;

  bool operator==(const MentionEdge&) const = default;
};

struct GraphConfig {
  double min_link_confidence = 0.25;
};

// The built QEDB: immutable after construction, indexes derivable from
// edges + mentions.
struct QedbGraph {
  std::vector<Node> nodes;           // sorted by NodeId key
  std::vector<QuestionEdge> edges;   // sorted by record_id
  std::vector<MentionEdge> mentions; // sorted by (entity_id, node key)

  // entity_id -> edge indexes where the entity attaches to a source node.
  std::map<std::string, std::vector<std::size_t>> reference_index;
  // entity_id -> edge indexes where the entity attaches to the answer node.
  std::map<std::string, std::vector<std::size_t>> answer_index;
  // label -> edge indexes.
  std::map<std::string, std::vector<std::size_t>> label_index;

  // node key -> mentions attached to that node.
  std::map<std::string, std::vector<std::size_t>> node_mentions;

  void rebuild_indexes();
  const Node* find_node(const NodeId& id) const;
  std::string entity_name(const std::string& entity_id) const;

  // Entities attached to `node` with confidence strictly above `min_conf`.
  std::vector<const MentionEdge*> entities_at(const NodeId& node,
                                              double min_conf) const;

  bool same_content(const QedbGraph& other) const {
    return nodes == other.nodes && edges == other.edges &&
           mentions == other.mentions;
  }
};

// Question text with each reference span replaced by $i (numbered by
// ascending question offset) and whitespace collapsed.
std::string abstract_question(const QaRecord& record);

QedbGraph build_graph(const Corpus& corpus,
                      std::span<const ReferenceEntityMatch> matches,
                      const GraphConfig& config);

struct GraphStats {
  std::size_t span_nodes = 0;
  std::size_t entity_nodes = 0;
  std::size_t edges = 0;
  std::size_t mentions = 0;
  std::map<std::size_t, std::size_t> arity_histogram;
  std::size_t distinct_labels = 0;
  // Fraction of records with at least one entity-linked reference, and with
  // both a linked answer and a linked reference.
  double question_linkable_fraction = 0.0;
  double answer_and_question_linkable_fraction = 0.0;

  bool operator==(const GraphStats&) const = default;
};

GraphStats graph_stats(const QedbGraph& graph);

}  // namespace qedb
