#include "qedb/graph.hpp"

#include "qedb/text.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qedb {

std::string NodeId::key() const {
  std::ostringstream out;
  if (kind == Kind::Entity) {
    out << "e:" << entity_id;
  } else {
    out << "s:" << doc_id << ":" << start << ":" << end;
  }
  return out.str();
}

void QedbGraph::rebuild_indexes() {
  reference_index.clear();
  answer_index.clear();
  label_index.clear();
  node_mentions.clear();

  for (std::size_t m = 0; m < mentions.size(); ++m) {
    node_mentions[mentions[m].node.key()].push_back(m);
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    label_index[edge.label].push_back(e);
    std::set<std::string> source_entities;
    for (const auto& src : edge.sources) {
      if (auto it = node_mentions.find(src.key()); it != node_mentions.end()) {
        for (std::size_t m : it->second) {
          source_entities.insert(mentions[m].entity_id);
        }
      }
    }
    for (const auto& ent : source_entities) {
      reference_index[ent].push_back(e);
    }
    if (auto it = node_mentions.find(edge.target.key());
        it != node_mentions.end()) {
      std::set<std::string> answer_entities;
      for (std::size_t m : it->second) {
        answer_entities.insert(mentions[m].entity_id);
      }
      for (const auto& ent : answer_entities) {
        answer_index[ent].push_back(e);
      }
    }
  }
}

const Node* QedbGraph::find_node(const NodeId& id) const {
  auto it = std::lower_bound(
      nodes.begin(), nodes.end(), id,
      [](const Node& n, const NodeId& want) { return n.id < want; });
  if (it != nodes.end() && it->id == id) return &*it;
  return nullptr;
}

std::string QedbGraph::entity_name(const std::string& entity_id) const {
  const Node* n = find_node(NodeId::entity(entity_id));
  return n ? n->text : entity_id;
}

std::vector<const MentionEdge*> QedbGraph::entities_at(const NodeId& node,
                                                       double min_conf) const {
  std::vector<const MentionEdge*> out;
  auto it = node_mentions.find(node.key());
  if (it == node_mentions.end()) return out;
  for (std::size_t m : it->second) {
    if (mentions[m].confidence > min_conf) out.push_back(&mentions[m]);
  }
  return out;
}

std::string abstract_question(const QaRecord& record) {
  // References are stored ordered by q_span start; numbering follows storage
  // order.
  for (std::size_t i = 1; i < record.references.size(); ++i) {
    if (record.references[i - 1].q_span.overlaps(record.references[i].q_span)) {
      throw std::invalid_argument("overlapping question references in record " +
                                  record.record_id);
    }
  }
  std::string out;
  std::size_t cursor = 0;
  const std::size_t qlen = text::utf8_length(record.question);
  for (std::size_t i = 0; i < record.references.size(); ++i) {
    const auto& span = record.references[i].q_span;
    out += text::utf8_substr(record.question, cursor, span.start);
    out += "$" + std::to_string(i + 1);
    cursor = span.end;
  }
  out += text::utf8_substr(record.question, cursor, qlen);
  return text::collapse_whitespace(out);
}

QedbGraph build_graph(const Corpus& corpus,
                      std::span<const ReferenceEntityMatch> matches,
                      const GraphConfig& config) {
  QedbGraph graph;
  std::map<NodeId, Node> nodes;

  auto span_node = [&](const std::string& doc_id, const Span& span,
                       bool as_answer) -> NodeId {
    NodeId id = NodeId::span(doc_id, span.start, span.end);
    auto& node = nodes.try_emplace(id, Node{id, span.text}).first->second;
    if (as_answer) {
      node.is_answer = true;
    } else {
      node.is_reference = true;
    }
    return id;
  };

  // Edges: one per record, sorted by record_id for deterministic output.
  std::vector<const QaRecord*> ordered;
  ordered.reserve(corpus.records.size());
  for (const auto& r : corpus.records) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const QaRecord* a, const QaRecord* b) {
              return a->record_id < b->record_id;
            });
  for (const QaRecord* r : ordered) {
    QuestionEdge edge;
    edge.record_id = r->record_id;
    edge.question = r->question;
    edge.label = abstract_question(*r);
    edge.target = span_node(r->doc_id, r->answer, /*as_answer=*/true);
    for (const auto& ref : r->references) {
      edge.q_spans.push_back(ref.q_span);
      edge.sources.push_back(
          span_node(r->doc_id, ref.d_span, /*as_answer=*/false));
      edge.min_align_confidence =
          std::min(edge.min_align_confidence, ref.align_confidence);
    }
    graph.edges.push_back(std::move(edge));
  }

  // Entity layer. Track each entity's best link confidence for match-derived
  // mentions.
  std::map<std::string, double> entity_conf;
  for (const auto& link : corpus.links) {
    if (link.link_confidence < config.min_link_confidence) continue;
    auto& node = nodes
                     .try_emplace(NodeId::entity(link.entity_id),
                                  Node{NodeId::entity(link.entity_id),
                                       link.canonical_name})
                     .first->second;
    if (node.text.empty()) node.text = link.canonical_name;
    auto [it, inserted] = entity_conf.emplace(link.entity_id,
                                              link.link_confidence);
    if (!inserted) it->second = std::max(it->second, link.link_confidence);
  }

  // Mention edges, deduped by (entity, node) keeping the best confidence.
  std::map<std::pair<std::string, NodeId>, MentionEdge> mention_map;
  auto add_mention = [&](MentionEdge m) {
    auto key = std::make_pair(m.entity_id, m.node);
    auto [it, inserted] = mention_map.emplace(key, m);
    if (!inserted) {
      if (m.confidence > it->second.confidence ||
          (m.confidence == it->second.confidence &&
           m.via == MentionVia::Link)) {
        it->second = m;
      }
    }
  };

  // From entity links: attach to every span node containing the mention.
  for (const auto& link : corpus.links) {
    if (link.link_confidence < config.min_link_confidence) continue;
    for (const auto& [id, node] : nodes) {
      if (id.kind != NodeId::Kind::Span || id.doc_id != link.doc_id) continue;
      if (id.start <= link.mention.start && link.mention.end <= id.end) {
        add_mention({link.entity_id, id, link.link_confidence,
                     MentionVia::Link});
      }
    }
  }

  // From reference-entity matches: attach to the matched reference's r_d node.
  std::map<std::string, const QaRecord*> by_id;
  for (const auto& r : corpus.records) by_id.emplace(r.record_id, &r);
  for (const auto& m : matches) {
    auto conf_it = entity_conf.find(m.entity_id);
    if (conf_it == entity_conf.end()) continue;
    auto rec_it = by_id.find(m.record_id);
    if (rec_it == by_id.end()) continue;
    const QaRecord& r = *rec_it->second;
    if (m.reference_index >= r.references.size()) continue;
    const auto& d_span = r.references[m.reference_index].d_span;
    add_mention({m.entity_id, NodeId::span(r.doc_id, d_span.start, d_span.end),
                 conf_it->second, MentionVia::Match});
  }

  for (auto& [key, m] : mention_map) graph.mentions.push_back(std::move(m));
  for (auto& [id, node] : nodes) graph.nodes.push_back(std::move(node));
  graph.rebuild_indexes();
  return graph;
}

GraphStats graph_stats(const QedbGraph& graph) {
  GraphStats stats;
  for (const auto& n : graph.nodes) {
    if (n.id.kind == NodeId::Kind::Entity) {
      ++stats.entity_nodes;
    } else {
      ++stats.span_nodes;
    }
  }
  stats.edges = graph.edges.size();
  stats.mentions = graph.mentions.size();
  std::set<std::string> labels;
  std::size_t question_linked = 0;
  std::size_t both_linked = 0;
  for (const auto& e : graph.edges) {
    ++stats.arity_histogram[e.sources.size()];
    labels.insert(e.label);
    bool ref_linked = false;
    for (const auto& src : e.sources) {
      if (!graph.entities_at(src, 0.0).empty()) ref_linked = true;
    }
    const bool answer_linked = !graph.entities_at(e.target, 0.0).empty();
    if (ref_linked) ++question_linked;
    if (ref_linked && answer_linked) ++both_linked;
  }
  stats.distinct_labels = labels.size();
  if (!graph.edges.empty()) {
    stats.question_linkable_fraction =
        static_cast<double>(question_linked) /
        static_cast<double>(graph.edges.size());
    stats.answer_and_question_linkable_fraction =
        static_cast<double>(both_linked) /
        static_cast<double>(graph.edges.size());
  }
  return stats;
}

}  // namespace qedb
