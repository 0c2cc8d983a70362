#include "qedb/model.hpp"

#include "qedb/text.hpp"

#include <sstream>

namespace qedb {

namespace {

void check_span(const Span& span, const std::string& host,
                const std::string& what, std::vector<Violation>& out) {
  if (span.start >= span.end) {
    std::ostringstream msg;
    msg << what << ": empty or inverted span [" << span.start << ", "
        << span.end << ")";
    out.push_back({msg.str()});
    return;
  }
  const std::string actual = text::utf8_substr(host, span.start, span.end);
  if (actual != span.text) {
    std::ostringstream msg;
    msg << what << ": span text \"" << span.text
        << "\" does not match host substring \"" << actual << "\" at ["
        << span.start << ", " << span.end << ")";
    out.push_back({msg.str()});
  }
}

}  // namespace

std::vector<Violation> validate_record(const QaRecord& record,
                                       const Passage& passage) {
  std::vector<Violation> out;
  if (record.doc_id != passage.doc_id) {
    out.push_back({"doc_id mismatch: record " + record.doc_id + " vs passage " +
                   passage.doc_id});
    return out;
  }

  check_span(record.answer, passage.text, "answer", out);

  if (record.question_entities.size() != record.references.size()) {
    std::ostringstream msg;
    msg << "arity mismatch: " << record.references.size() << " references vs "
        << record.question_entities.size() << " entity sets";
    out.push_back({msg.str()});
  }

  for (std::size_t i = 0; i < record.references.size(); ++i) {
    const auto& ref = record.references[i];
    const std::string tag = "reference " + std::to_string(i);
    check_span(ref.q_span, record.question, tag + " q_span", out);
    check_span(ref.d_span, passage.text, tag + " d_span", out);
    if (ref.align_confidence < 0.0 || ref.align_confidence > 1.0) {
      out.push_back({tag + ": align_confidence outside [0, 1]"});
    }
    if (record.answer.overlaps(ref.d_span)) {
      out.push_back({tag + ": d_span overlaps the answer span"});
    }
    if (i > 0) {
      const auto& prev = record.references[i - 1];
      if (prev.q_span.start > ref.q_span.start) {
        out.push_back({tag + ": q_spans not ordered by start offset"});
      }
      if (prev.q_span.overlaps(ref.q_span)) {
        out.push_back({tag + ": q_span overlaps previous reference"});
      }
    }
  }
  return out;
}

}  // namespace qedb
