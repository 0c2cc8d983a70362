#include "qedb/ingest.hpp"

#include "qedb/text.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace qedb {

namespace {

using nlohmann::json;

json span_to_json(const Span& s) {
  json j;
  j["start"] = s.start;
  j["end"] = s.end;
  j["text"] = s.text;
  return j;
}

Span span_from_json(const json& j) {
  const long long start = j.at("start").get<long long>();
  const long long end = j.at("end").get<long long>();
  if (start < 0 || end < 0) throw DataError("negative span offset");
  if (start >= end) throw DataError("span start must be less than end");
  Span s;
  s.start = static_cast<std::size_t>(start);
  s.end = static_cast<std::size_t>(end);
  s.text = j.at("text").get<std::string>();
  return s;
}

template <typename Fn>
auto parse_lines(std::istream& in, Fn decode) {
  std::vector<decltype(decode(std::string{}))> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(decode(line));
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::string encode_passage(const Passage& p) {
  json j;
  j["doc_id"] = p.doc_id;
  j["text"] = p.text;
  if (p.title) j["title"] = *p.title;
  return j.dump();
}

Passage decode_passage(const std::string& line) {
  const json j = json::parse(line);
  Passage p;
  p.doc_id = j.at("doc_id").get<std::string>();
  p.text = j.at("text").get<std::string>();
  if (j.contains("title")) p.title = j.at("title").get<std::string>();
  return p;
}

std::string encode_record(const QaRecord& r) {
  json j;
  j["record_id"] = r.record_id;
  j["doc_id"] = r.doc_id;
  j["question"] = r.question;
  j["answer"] = span_to_json(r.answer);
  json refs = json::array();
  for (const auto& ref : r.references) {
    json jr;
    jr["q_span"] = span_to_json(ref.q_span);
    jr["d_span"] = span_to_json(ref.d_span);
    jr["align_confidence"] = ref.align_confidence;
    refs.push_back(std::move(jr));
  }
  j["references"] = std::move(refs);
  j["question_entities"] = r.question_entities;
  return j.dump();
}

QaRecord decode_record(const std::string& line) {
  const json j = json::parse(line);
  QaRecord r;
  r.record_id = j.at("record_id").get<std::string>();
  r.doc_id = j.at("doc_id").get<std::string>();
  r.question = j.at("question").get<std::string>();
  r.answer = span_from_json(j.at("answer"));
  if (j.contains("references")) {
    for (const auto& jr : j.at("references")) {
      ReferencePair ref;
      ref.q_span = span_from_json(jr.at("q_span"));
      ref.d_span = span_from_json(jr.at("d_span"));
      ref.align_confidence = jr.value("align_confidence", 1.0);
      if (ref.align_confidence < 0.0 || ref.align_confidence > 1.0) {
        throw DataError("align_confidence outside [0, 1]");
      }
      r.references.push_back(std::move(ref));
    }
  }
  if (j.contains("question_entities")) {
    r.question_entities =
        j.at("question_entities").get<std::vector<std::vector<std::string>>>();
  }
  // Missing entity sets default to empty, one per reference.
  if (r.question_entities.empty() && !r.references.empty()) {
    r.question_entities.resize(r.references.size());
  }
  return r;
}

std::string encode_link(const EntityLink& l) {
  json j;
  j["doc_id"] = l.doc_id;
  j["mention"] = span_to_json(l.mention);
  j["entity_id"] = l.entity_id;
  j["canonical_name"] = l.canonical_name;
  j["link_confidence"] = l.link_confidence;
  return j.dump();
}

EntityLink decode_link(const std::string& line) {
  const json j = json::parse(line);
  EntityLink l;
  l.doc_id = j.at("doc_id").get<std::string>();
  l.mention = span_from_json(j.at("mention"));
  l.entity_id = j.at("entity_id").get<std::string>();
  l.canonical_name = j.at("canonical_name").get<std::string>();
  l.link_confidence = j.value("link_confidence", 1.0);
  if (l.link_confidence < 0.0 || l.link_confidence > 1.0) {
    throw DataError("link_confidence outside [0, 1]");
  }
  return l;
}

std::vector<Passage> parse_passages(std::istream& in) {
  auto passages = parse_lines(in, decode_passage);
  std::set<std::string> seen;
  for (const auto& p : passages) {
    if (!seen.insert(p.doc_id).second) {
      throw DataError("duplicate doc_id: " + p.doc_id);
    }
  }
  return passages;
}

std::vector<QaRecord> parse_qa_records(std::istream& in) {
  return parse_lines(in, decode_record);
}

std::vector<EntityLink> parse_links(std::istream& in) {
  return parse_lines(in, decode_link);
}

Corpus load_corpus(const std::string& passages_path,
                   const std::string& records_path,
                   const std::string& links_path, Strictness strictness) {
  const bool strict = strictness == Strictness::Strict;
  Corpus corpus;

  std::ifstream pin(passages_path);
  if (!pin) throw DataError("cannot read passages file: " + passages_path);
  for (auto& p : parse_passages(pin)) {
    corpus.passages.emplace(p.doc_id, std::move(p));
  }

  std::ifstream rin(records_path);
  if (!rin) throw DataError("cannot read records file: " + records_path);
  std::set<std::string> record_ids;
  for (auto& r : parse_qa_records(rin)) {
    std::string problem;
    auto it = corpus.passages.find(r.doc_id);
    if (it == corpus.passages.end()) {
      problem = "unknown doc_id " + r.doc_id;
    } else if (!record_ids.insert(r.record_id).second) {
      problem = "duplicate record_id " + r.record_id;
    } else {
      auto violations = validate_record(r, it->second);
      if (!violations.empty()) problem = violations.front().message;
    }
    if (problem.empty()) {
      corpus.records.push_back(std::move(r));
      ++corpus.stats.accepted_records;
    } else if (strict) {
      throw DataError("record " + r.record_id + ": " + problem);
    } else {
      ++corpus.stats.rejected_records;
    }
  }

  if (!links_path.empty()) {
    std::ifstream lin(links_path);
    if (!lin) throw DataError("cannot read links file: " + links_path);
    for (auto& l : parse_links(lin)) {
      std::string problem;
      auto it = corpus.passages.find(l.doc_id);
      if (it == corpus.passages.end()) {
        problem = "unknown doc_id " + l.doc_id;
      } else if (l.mention.end > text::utf8_length(it->second.text)) {
        // Out-of-bounds mentions are dropped in both modes.
        ++corpus.stats.rejected_links;
        continue;
      } else if (text::utf8_substr(it->second.text, l.mention.start,
                                   l.mention.end) != l.mention.text) {
        problem = "mention text mismatch for entity " + l.entity_id;
      }
      if (problem.empty()) {
        corpus.links.push_back(std::move(l));
        ++corpus.stats.accepted_links;
      } else if (strict) {
        throw DataError("link: " + problem);
      } else {
        ++corpus.stats.rejected_links;
      }
    }
  }
  return corpus;
}

}  // namespace qedb
