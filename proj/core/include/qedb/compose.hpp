#pragma once

#include "qedb/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qedb {

// One entry of a related-entity ranking.
struct RelatedEntity {
  std::string query_entity;
  std::string related_entity;
  std::size_t support = 0;           // number of linking questions
  std::string example_question;

  bool operator==(const RelatedEntity&) const = default;
};

// Entities e' ranked by how many questions have an answer linked to e and a
// question reference linked to e'. Year entities are discarded; ties break by
// entity_id; at most k results.
std::vector<RelatedEntity> related_entities(const QedbGraph& graph,
                                            const std::string& entity_id,
                                            std::size_t k,
                                            double min_link_confidence = 0.25);

struct JoinConstraints {
  bool single_ref_q2 = true;
  bool single_answer = true;
  double min_align_conf_q1 = 2.0 / 3.0;
  double min_align_conf_q2 = 2.0 / 3.0;
  bool bridge_not_year = true;
  // Popularity of a bridge entity is (answer occurrences) x (reference
  // occurrences); entities above the cap are skipped.
  std::size_t max_bridge_popularity = 100000;
  bool q2_answer_not_in_q1 = true;
  // Fallback for corpora without entity links: bridge on exact answer text
  // equal to a reference span text.
  bool string_fallback = false;

  void set_min_align_conf(double v) {
    min_align_conf_q1 = v;
    min_align_conf_q2 = v;
  }
};

// A 2-hop bridge: q1's answer entity appears as a question reference in q2.
struct BridgeJoin {
  std::string q1;                 // record_id
  std::string q2;                 // record_id
  std::string bridge_entity;
  std::size_t bridge_ref_index = 0;
  std::string rendered_q1;        // q1 verbatim
  std::string rendered_q2;        // q2 with the bridge mention replaced by $1
  std::string answer;             // q2's answer text

  bool operator==(const BridgeJoin&) const = default;
  auto operator<=>(const BridgeJoin&) const = default;
};

std::vector<BridgeJoin> enumerate_bridge_joins(const QedbGraph& graph,
                                               const JoinConstraints& c);

// Two-line QDMR-style rendering.
std::string render_bridge(const BridgeJoin& join);

// One group of a frame: an abstracted label with the answers it produced for
// the frame entity.
struct FrameGroup {
  std::string label;
  std::vector<std::pair<std::string, std::string>> answers;  // (answer, record_id)

  bool operator==(const FrameGroup&) const = default;
};

// All edges where the entity occurs as a question reference, grouped by label.
std::vector<FrameGroup> frame_query(const QedbGraph& graph,
                                    const std::string& entity_id);

// Unordered pairs of distinct questions whose answers both link to the
// entity; question token-Jaccard must be below the threshold.
std::vector<std::pair<std::string, std::string>> shared_answer_query(
    const QedbGraph& graph, const std::string& entity_id,
    double distinctness_threshold = 0.8);

}  // namespace qedb
