#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qedb {

// A character-offset span [start, end) into some host string, carrying the
// covered text. Offsets count Unicode code points, not bytes.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;

  bool operator==(const Span&) const = default;
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
};

// One aligned (question span, passage span) pair.
struct ReferencePair {
  Span q_span;
  Span d_span;
  double align_confidence = 1.0;

  bool operator==(const ReferencePair&) const = default;
};

// One generated question with its answer span and reference alignments.
struct QaRecord {
  std::string record_id;
  std::string doc_id;
  std::string question;
  Span answer;
  std::vector<ReferencePair> references;
  // Per-reference entity-id sets; same length as `references`.
  std::vector<std::vector<std::string>> question_entities;

  bool operator==(const QaRecord&) const = default;
};

// An entity mention in a passage.
struct EntityLink {
  std::string doc_id;
  Span mention;
  std::string entity_id;
  std::string canonical_name;
  double link_confidence = 1.0;

  bool operator==(const EntityLink&) const = default;
};

struct Passage {
  std::string doc_id;
  std::string text;
  std::optional<std::string> title;

  bool operator==(const Passage&) const = default;
};

// One detected problem in a record; violations are data, not failures.
struct Violation {
  std::string message;
};

// Checks a record's spans and arities against its passage. Empty report means
// the record is internally consistent.
std::vector<Violation> validate_record(const QaRecord& record,
                                       const Passage& passage);

}  // namespace qedb
