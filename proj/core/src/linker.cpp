#include "qedb/linker.hpp"

#include "qedb/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace qedb {

double jaccard_similarity(std::span<const std::string> a,
                          std::span<const std::string> b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : sa) {
    if (sb.count(t)) ++inter;
  }
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard_similarity(std::string_view a, std::string_view b) {
  return jaccard_similarity(text::tokenize(a), text::tokenize(b));
}

std::vector<ReferenceEntityMatch> match_entities_to_references(
    const QaRecord& record, std::span<const EntityLink> passage_links,
    double min_link_confidence) {
  // Candidate strings per entity: every surface form in the passage plus the
  // canonical name, with the entity's best link confidence for tie-breaking.
  struct Candidate {
    std::vector<std::string> surface_forms;
    std::string canonical_name;
    double max_link_confidence = 0.0;
  };
  std::map<std::string, Candidate> candidates;
  for (const auto& link : passage_links) {
    if (link.link_confidence < min_link_confidence) continue;
    auto& c = candidates[link.entity_id];
    c.surface_forms.push_back(link.mention.text);
    c.canonical_name = link.canonical_name;
    c.max_link_confidence =
        std::max(c.max_link_confidence, link.link_confidence);
  }

  std::vector<ReferenceEntityMatch> out;
  for (std::size_t i = 0; i < record.references.size(); ++i) {
    const auto ref_tokens = text::tokenize(record.references[i].q_span.text);
    ReferenceEntityMatch best;
    double best_conf = -1.0;
    for (const auto& [entity_id, cand] : candidates) {
      double sim = 0.0;
      MatchVia via = MatchVia::SurfaceForm;
      for (const auto& surface : cand.surface_forms) {
        sim = std::max(sim,
                       jaccard_similarity(ref_tokens, text::tokenize(surface)));
      }
      const double canon_sim =
          jaccard_similarity(ref_tokens, text::tokenize(cand.canonical_name));
      if (canon_sim >= sim) {
        sim = canon_sim;
        via = MatchVia::CanonicalName;
      }
      const bool better =
          sim > best.similarity ||
          (sim == best.similarity &&
           (cand.max_link_confidence > best_conf ||
            (cand.max_link_confidence == best_conf &&
             (best.entity_id.empty() || entity_id < best.entity_id))));
      if (better) {
        best.record_id = record.record_id;
        best.reference_index = i;
        best.entity_id = entity_id;
        best.similarity = sim;
        best.via = via;
        best_conf = cand.max_link_confidence;
      }
    }
    if (best.similarity > 0.0) out.push_back(best);
  }
  return out;
}

bool is_year(std::string_view entity_or_text) {
  std::size_t a = 0;
  std::size_t b = entity_or_text.size();
  while (a < b && std::isspace(static_cast<unsigned char>(entity_or_text[a])))
    ++a;
  while (b > a &&
         std::isspace(static_cast<unsigned char>(entity_or_text[b - 1])))
    --b;
  const auto digits = entity_or_text.substr(a, b - a);
  if (digits.size() < 3 || digits.size() > 4) return false;
  long value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    value = value * 10 + (c - '0');
  }
  return value >= 1000 && value <= 2999;
}

}  // namespace qedb
