#pragma once

#include "qedb/model.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qedb {

// Which candidate string achieved the winning similarity.
enum class MatchVia { SurfaceForm, CanonicalName };

// The entity heuristically associated with one question reference.
struct ReferenceEntityMatch {
  std::string record_id;
  std::size_t reference_index = 0;
  std::string entity_id;
  double similarity = 0.0;
  MatchVia via = MatchVia::SurfaceForm;

  bool operator==(const ReferenceEntityMatch&) const = default;
};

// |set(a) ∩ set(b)| / |set(a) ∪ set(b)|; both empty -> 1.0.
double jaccard_similarity(std::span<const std::string> a,
                          std::span<const std::string> b);

// Convenience overload tokenizing both sides first.
double jaccard_similarity(std::string_view a, std::string_view b);

// For each reference of `record`, the passage entity whose surface form or
// canonical name is most token-similar to the question span. Candidates with
// link_confidence below `min_link_confidence` are ignored; a reference with
// best similarity 0 yields no match. Ties break by higher link confidence,
// then smaller entity_id.
std::vector<ReferenceEntityMatch> match_entities_to_references(
    const QaRecord& record, std::span<const EntityLink> passage_links,
    double min_link_confidence);

// True iff the trimmed text is a bare integer in [1000, 2999].
bool is_year(std::string_view entity_or_text);

}  // namespace qedb
