#include "qedb/compose.hpp"

#include "qedb/text.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qedb {

namespace {

// Entities attached to the edge's answer node, above `min_conf`.
std::set<std::string> answer_entities(const QedbGraph& graph,
                                      const QuestionEdge& edge,
                                      double min_conf) {
  std::set<std::string> out;
  for (const auto* m : graph.entities_at(edge.target, min_conf)) {
    out.insert(m->entity_id);
  }
  return out;
}

std::string answer_text(const QedbGraph& graph, const QuestionEdge& edge) {
  const Node* n = graph.find_node(edge.target);
  return n ? n->text : std::string{};
}

std::string substitute_span(const std::string& question, const Span& span) {
  const std::size_t len = text::utf8_length(question);
  return text::collapse_whitespace(text::utf8_substr(question, 0, span.start) +
                                   "$1" +
                                   text::utf8_substr(question, span.end, len));
}

}  // namespace

std::vector<RelatedEntity> related_entities(const QedbGraph& graph,
                                            const std::string& entity_id,
                                            std::size_t k,
                                            double min_link_confidence) {
  struct Tally {
    std::size_t support = 0;
    std::string example_record;
    std::string example_question;
  };
  std::map<std::string, Tally> tallies;

  auto it = graph.answer_index.find(entity_id);
  if (it == graph.answer_index.end()) return {};
  for (std::size_t ei : it->second) {
    const auto& edge = graph.edges[ei];
    // The answer-side attachment must itself clear the threshold.
    bool answer_ok = false;
    for (const auto* m : graph.entities_at(edge.target, min_link_confidence)) {
      if (m->entity_id == entity_id) answer_ok = true;
    }
    if (!answer_ok) continue;

    std::set<std::string> related;
    for (const auto& src : edge.sources) {
      for (const auto* m : graph.entities_at(src, min_link_confidence)) {
        related.insert(m->entity_id);
      }
    }
    for (const auto& other : related) {
      if (other == entity_id) continue;
      if (is_year(graph.entity_name(other))) continue;
      auto& t = tallies[other];
      ++t.support;
      if (t.example_record.empty() || edge.record_id < t.example_record) {
        t.example_record = edge.record_id;
        t.example_question = edge.question;
      }
    }
  }

  std::vector<RelatedEntity> out;
  for (const auto& [other, t] : tallies) {
    out.push_back({entity_id, other, t.support, t.example_question});
  }
  std::sort(out.begin(), out.end(),
            [](const RelatedEntity& a, const RelatedEntity& b) {
              if (a.support != b.support) return a.support > b.support;
              return a.related_entity < b.related_entity;
            });
  if (out.size() > k) out.resize(k);
  return out;
}

std::vector<BridgeJoin> enumerate_bridge_joins(const QedbGraph& graph,
                                               const JoinConstraints& c) {
  // Popularity per entity: answer occurrences x reference occurrences.
  auto popularity = [&](const std::string& e) -> std::size_t {
    auto a = graph.answer_index.find(e);
    auto r = graph.reference_index.find(e);
    const std::size_t na = a == graph.answer_index.end() ? 0 : a->second.size();
    const std::size_t nr =
        r == graph.reference_index.end() ? 0 : r->second.size();
    return na * nr;
  };

  std::set<BridgeJoin> joins;

  auto admit = [&](const QuestionEdge& q1, const QuestionEdge& q2,
                   const std::string& bridge, std::size_t ref_index,
                   const std::string& bridge_display) {
    if (q1.record_id == q2.record_id) return;
    if (c.single_ref_q2 && q2.sources.size() != 1) return;
    if (c.single_answer) {
      if (answer_entities(graph, q1, -1.0).size() > 1) return;
      if (answer_entities(graph, q2, -1.0).size() > 1) return;
    }
    if (q1.min_align_confidence < c.min_align_conf_q1) return;
    if (q2.min_align_confidence < c.min_align_conf_q2) return;
    if (c.bridge_not_year && is_year(bridge_display)) return;
    const std::string a2 = answer_text(graph, q2);
    if (c.q2_answer_not_in_q1 && text::icontains(q1.question, a2)) return;

    BridgeJoin join;
    join.q1 = q1.record_id;
    join.q2 = q2.record_id;
    join.bridge_entity = bridge;
    join.bridge_ref_index = ref_index;
    join.rendered_q1 = q1.question;
    join.rendered_q2 = substitute_span(q2.question, q2.q_spans[ref_index]);
    join.answer = a2;
    joins.insert(std::move(join));
  };

  // Entity bridges: q1's answer entity attaches to a reference node of q2.
  for (const auto& [entity, q1_edges] : graph.answer_index) {
    auto rit = graph.reference_index.find(entity);
    if (rit == graph.reference_index.end()) continue;
    if (popularity(entity) > c.max_bridge_popularity) continue;
    const std::string display = graph.entity_name(entity);
    for (std::size_t i1 : q1_edges) {
      for (std::size_t i2 : rit->second) {
        const auto& q2 = graph.edges[i2];
        for (std::size_t r = 0; r < q2.sources.size(); ++r) {
          bool linked = false;
          for (const auto* m : graph.entities_at(q2.sources[r], -1.0)) {
            if (m->entity_id == entity) linked = true;
          }
          if (linked) admit(graph.edges[i1], q2, entity, r, display);
        }
      }
    }
  }

  if (c.string_fallback) {
    // Bridge on exact answer text equal to a reference span text.
    std::map<std::string, std::size_t> answer_counts;
    std::map<std::string, std::size_t> ref_counts;
    for (const auto& e : graph.edges) {
      ++answer_counts[text::to_lower(answer_text(graph, e))];
      std::set<std::string> texts;
      for (const auto& s : e.q_spans) texts.insert(text::to_lower(s.text));
      for (const auto& t : texts) ++ref_counts[t];
    }
    for (const auto& q1 : graph.edges) {
      const std::string a1 = text::to_lower(answer_text(graph, q1));
      if (a1.empty()) continue;
      if (answer_counts[a1] * ref_counts[a1] > c.max_bridge_popularity)
        continue;
      for (const auto& q2 : graph.edges) {
        for (std::size_t r = 0; r < q2.q_spans.size(); ++r) {
          if (text::to_lower(q2.q_spans[r].text) == a1) {
            admit(q1, q2, "text:" + a1, r, a1);
          }
        }
      }
    }
  }

  return {joins.begin(), joins.end()};
}

std::string render_bridge(const BridgeJoin& join) {
  return join.rendered_q1 + "\n" + join.rendered_q2;
}

std::vector<FrameGroup> frame_query(const QedbGraph& graph,
                                    const std::string& entity_id) {
  auto it = graph.reference_index.find(entity_id);
  if (it == graph.reference_index.end()) return {};
  std::map<std::string, FrameGroup> groups;
  for (std::size_t ei : it->second) {
    const auto& edge = graph.edges[ei];
    auto& g = groups[edge.label];
    g.label = edge.label;
    g.answers.emplace_back(answer_text(graph, edge), edge.record_id);
  }
  std::vector<FrameGroup> out;
  for (auto& [label, g] : groups) {
    std::sort(g.answers.begin(), g.answers.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> shared_answer_query(
    const QedbGraph& graph, const std::string& entity_id,
    double distinctness_threshold) {
  auto it = graph.answer_index.find(entity_id);
  if (it == graph.answer_index.end()) return {};
  const auto& edge_ids = it->second;
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < edge_ids.size(); ++i) {
    for (std::size_t j = i + 1; j < edge_ids.size(); ++j) {
      const auto& a = graph.edges[edge_ids[i]];
      const auto& b = graph.edges[edge_ids[j]];
      if (jaccard_similarity(std::string_view(a.question),
                             std::string_view(b.question)) <
          distinctness_threshold) {
        auto pair = std::minmax(a.record_id, b.record_id);
        out.emplace_back(pair.first, pair.second);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace qedb
