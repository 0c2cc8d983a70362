#include "fixtures.hpp"

#include "qedb/text.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace qedb::testing {

namespace {

std::size_t byte_to_char_offset(const std::string& host, std::size_t byte) {
  std::size_t chars = 0;
  for (std::size_t i = 0; i < byte && i < host.size(); ++i) {
    if ((static_cast<unsigned char>(host[i]) & 0xC0) != 0x80) ++chars;
  }
  return chars;
}

struct RefSpec {
  std::string q_text;
  std::string d_text;
  double align_confidence = 1.0;
  std::size_t q_occurrence = 0;
  std::size_t d_occurrence = 0;
};

QaRecord make_record(const std::string& record_id, const std::string& doc_id,
                     const std::string& passage_text,
                     const std::string& question,
                     const std::string& answer_text,
                     std::size_t answer_occurrence,
                     const std::vector<RefSpec>& refs) {
  QaRecord r;
  r.record_id = record_id;
  r.doc_id = doc_id;
  r.question = question;
  r.answer = find_span(passage_text, answer_text, answer_occurrence);
  for (const auto& spec : refs) {
    ReferencePair pair;
    pair.q_span = find_span(question, spec.q_text, spec.q_occurrence);
    pair.d_span = find_span(passage_text, spec.d_text, spec.d_occurrence);
    pair.align_confidence = spec.align_confidence;
    r.references.push_back(std::move(pair));
  }
  r.question_entities.resize(r.references.size());
  return r;
}

EntityLink make_link(const std::string& doc_id,
                     const std::string& passage_text,
                     const std::string& mention_text,
                     const std::string& entity_id,
                     const std::string& canonical_name, double confidence,
                     std::size_t occurrence = 0) {
  EntityLink l;
  l.doc_id = doc_id;
  l.mention = find_span(passage_text, mention_text, occurrence);
  l.entity_id = entity_id;
  l.canonical_name = canonical_name;
  l.link_confidence = confidence;
  return l;
}

void check(const Corpus& corpus) {
  for (const auto& r : corpus.records) {
    const auto violations = validate_record(r, corpus.passages.at(r.doc_id));
    if (!violations.empty()) {
      throw std::logic_error("fixture record " + r.record_id + ": " +
                             violations.front().message);
    }
  }
}

}  // namespace

Span find_span(const std::string& host, const std::string& needle,
               std::size_t occurrence) {
  std::size_t byte = 0;
  for (std::size_t n = 0;; ++n) {
    byte = host.find(needle, byte);
    if (byte == std::string::npos) {
      throw std::logic_error("fixture: \"" + needle + "\" occurrence " +
                             std::to_string(occurrence) + " not in \"" + host +
                             "\"");
    }
    if (n == occurrence) break;
    byte += needle.size();
  }
  Span s;
  s.start = byte_to_char_offset(host, byte);
  s.end = s.start + text::utf8_length(needle);
  s.text = needle;
  return s;
}

Corpus tv_series_corpus() {
  Corpus corpus;
  const std::string d1 =
      "Tipping the Velvet is a 2002 BBC television drama serial based on "
      "a 1998 novel of the same name by Sarah Waters. It aired from October "
      "2002. Rachael Stirling plays Nan Astley and Keeley Hawes plays "
      "Kitty Butler.";
  corpus.passages["d1"] = {"d1", d1, "Tipping the Velvet (TV series)"};

  corpus.records = {
      make_record("fig1-q1", "d1", d1,
                  "what is the tv series tipping the velvet based on",
                  "a 1998 novel of the same name", 0,
                  {{"the tv series tipping the velvet", "Tipping the Velvet",
                    1.0}}),
      make_record("fig1-q2", "d1", d1, "who wrote the novel tipping the velvet",
                  "Sarah Waters", 0,
                  {{"the novel tipping the velvet",
                    "a 1998 novel of the same name", 1.0}}),
      make_record("fig1-q3", "d1", d1,
                  "when did the tv series tipping the velvet first air",
                  "October 2002", 0,
                  {{"the tv series tipping the velvet", "Tipping the Velvet",
                    1.0}}),
      make_record("fig1-q4", "d1", d1,
                  "who plays nan astley in tipping the velvet",
                  "Rachael Stirling", 0,
                  {{"nan astley", "Nan Astley", 1.0},
                   {"tipping the velvet", "Tipping the Velvet", 1.0, 0, 0}}),
  };

  corpus.links = {
      make_link("d1", d1, "Tipping the Velvet", "e_tipping_the_velvet",
                "Tipping the Velvet", 0.9),
      make_link("d1", d1, "Sarah Waters", "e_sarah_waters", "Sarah Waters",
                0.9),
      make_link("d1", d1, "Rachael Stirling", "e_rachael_stirling",
                "Rachael Stirling", 0.9),
      make_link("d1", d1, "Kitty Butler", "e_kitty_butler", "Kitty Butler",
                0.8),
  };
  corpus.stats.accepted_records = corpus.records.size();
  corpus.stats.accepted_links = corpus.links.size();
  check(corpus);
  return corpus;
}

Corpus three_doc_corpus() {
  Corpus corpus;
  const std::string d1 =
      "Tipping the Velvet is a 2002 BBC television drama serial based on "
      "a 1998 novel of the same name. Rachael Stirling plays Nan Astley and "
      "Keeley Hawes plays Kitty Butler. It first aired in October 2002.";
  const std::string d2 =
      "Tipping the Velvet is a 1998 historical novel by Sarah Waters. The "
      "novel follows Nan Astley, who falls for Kitty Butler, a male "
      "impersonator.";
  const std::string d3 =
      "Rachael Stirling is a British actress and the daughter of Diana Rigg. "
      "She starred as Nan Astley in the BBC drama Tipping the Velvet.";
  corpus.passages["d1"] = {"d1", d1, "Tipping the Velvet (TV series)"};
  corpus.passages["d2"] = {"d2", d2, "Tipping the Velvet (novel)"};
  corpus.passages["d3"] = {"d3", d3, "Rachael Stirling"};

  corpus.records = {
      make_record("fig2-q1", "d1", d1,
                  "what is the tv series tipping the velvet based on",
                  "a 1998 novel of the same name", 0,
                  {{"the tv series tipping the velvet", "Tipping the Velvet",
                    1.0}}),
      make_record("fig2-q2", "d1", d1, "who plays kitty in tipping the velvet",
                  "Keeley Hawes", 0,
                  {{"kitty", "Kitty Butler", 0.9},
                   {"tipping the velvet", "Tipping the Velvet", 1.0}}),
      make_record("fig2-q3", "d1", d1,
                  "who plays nan astley in tipping the velvet",
                  "Rachael Stirling", 0,
                  {{"nan astley", "Nan Astley", 1.0},
                   {"tipping the velvet", "Tipping the Velvet", 1.0}}),
      make_record("fig2-q4", "d1", d1, "when did tipping the velvet first air",
                  "October 2002", 0,
                  {{"tipping the velvet", "Tipping the Velvet", 1.0}}),
      make_record("fig2-q5", "d2", d2, "who wrote tipping the velvet",
                  "Sarah Waters", 0,
                  {{"tipping the velvet", "Tipping the Velvet", 1.0}}),
      make_record("fig2-q6", "d2", d2,
                  "who does nan astley fall for in tipping the velvet",
                  "Kitty Butler", 0,
                  {{"nan astley", "Nan Astley", 1.0},
                   {"tipping the velvet", "Tipping the Velvet", 1.0}}),
      make_record("fig2-q7", "d3", d3,
                  "who does rachael stirling play in the tv series tipping "
                  "the velvet",
                  "Nan Astley", 0,
                  {{"rachael stirling", "Rachael Stirling", 1.0},
                   {"the tv series tipping the velvet", "Tipping the Velvet",
                    0.9}}),
      make_record("fig2-q8", "d3", d3, "who is the mother of rachael stirling",
                  "Diana Rigg", 0,
                  {{"rachael stirling", "Rachael Stirling", 1.0}}),
  };

  corpus.links = {
      make_link("d1", d1, "Tipping the Velvet", "e_tipping_the_velvet",
                "Tipping the Velvet", 0.9),
      make_link("d1", d1, "Rachael Stirling", "e_rachael_stirling",
                "Rachael Stirling", 0.9),
      make_link("d1", d1, "Kitty Butler", "e_kitty_butler", "Kitty Butler",
                0.8),
      make_link("d1", d1, "Keeley Hawes", "e_keeley_hawes", "Keeley Hawes",
                0.9),
      make_link("d2", d2, "Tipping the Velvet", "e_tipping_the_velvet",
                "Tipping the Velvet", 0.9),
      make_link("d2", d2, "Sarah Waters", "e_sarah_waters", "Sarah Waters",
                0.9),
      make_link("d2", d2, "Kitty Butler", "e_kitty_butler", "Kitty Butler",
                0.8),
      make_link("d3", d3, "Rachael Stirling", "e_rachael_stirling",
                "Rachael Stirling", 0.9),
      make_link("d3", d3, "Diana Rigg", "e_diana_rigg", "Diana Rigg", 0.9),
      make_link("d3", d3, "Tipping the Velvet", "e_tipping_the_velvet",
                "Tipping the Velvet", 0.9),
  };
  corpus.stats.accepted_records = corpus.records.size();
  corpus.stats.accepted_links = corpus.links.size();
  check(corpus);
  return corpus;
}

Corpus bridge_rows_corpus() {
  Corpus corpus;
  const std::string dl =
      "Lucretius was the roman proponent of hedonism. Lucretius wrote On the "
      "Nature of Things, a book on atomism.";
  const std::string dj =
      "Jebediah are an australian rock band formed in 1994 by Kevin "
      "Mitchell. Jebediah sings the song Please Leave the Grates.";
  corpus.passages["dl"] = {"dl", dl, "Lucretius"};
  corpus.passages["dj"] = {"dj", dj, "Jebediah"};

  corpus.records = {
      make_record("br-l1", "dl", dl, "who was the roman proponent of hedonism",
                  "Lucretius", 0, {}),
      make_record("br-l2", "dl", dl,
                  "what is the name of lucretius's book on atomism",
                  "On the Nature of Things", 0,
                  {{"lucretius", "Lucretius", 1.0, 0, 1}}),
      make_record("br-j1", "dj", dj, "who sings the song please leave the grates",
                  "Jebediah", 0, {}),
      make_record("br-j2", "dj", dj, "when was jebediah formed and by whom",
                  "1994", 0, {{"jebediah", "Jebediah", 1.0, 0, 1}}),
  };

  corpus.links = {
      make_link("dl", dl, "Lucretius", "e_lucretius", "Lucretius", 0.9, 0),
      make_link("dl", dl, "Lucretius", "e_lucretius", "Lucretius", 0.9, 1),
      make_link("dl", dl, "On the Nature of Things", "e_on_the_nature",
                "On the Nature of Things", 0.9),
      make_link("dj", dj, "Jebediah", "e_jebediah", "Jebediah", 0.9, 0),
      make_link("dj", dj, "Jebediah", "e_jebediah", "Jebediah", 0.9, 1),
      make_link("dj", dj, "Please Leave the Grates", "e_grates",
                "Please Leave the Grates", 0.8),
  };
  corpus.stats.accepted_records = corpus.records.size();
  corpus.stats.accepted_links = corpus.links.size();
  check(corpus);
  return corpus;
}

Corpus island_corpus() {
  Corpus corpus;
  const std::string t1 =
      "The sulu worn in Fiji came from Tonga, a pacific island nation.";
  const std::string t2 = "Niuatoputapu is the highest point of Tonga.";
  const std::string t3 =
      "Deborah Gardner was murdered in Tonga in 1976 while serving in the "
      "peace corps.";
  corpus.passages["t1"] = {"t1", t1, std::nullopt};
  corpus.passages["t2"] = {"t2", t2, std::nullopt};
  corpus.passages["t3"] = {"t3", t3, std::nullopt};

  corpus.records = {
      make_record("isl-q1", "t1", t1, "where did the sulu come from in fiji",
                  "Tonga", 0, {{"fiji", "Fiji", 1.0}}),
      make_record("isl-q2", "t2", t2,
                  "niuatoputapu is the highest point in which pacific island "
                  "nation",
                  "Tonga", 0, {{"niuatoputapu", "Niuatoputapu", 1.0}}),
      make_record("isl-q3", "t3", t3,
                  "in which country was deborah gardner murdered by the peace "
                  "corps in 1976",
                  "Tonga", 0,
                  {{"deborah gardner", "Deborah Gardner", 1.0},
                   {"1976", "1976", 1.0}}),
  };

  corpus.links = {
      make_link("t1", t1, "Tonga", "e_tonga", "Tonga", 0.9),
      make_link("t1", t1, "Fiji", "e_fiji", "Fiji", 0.9),
      make_link("t2", t2, "Tonga", "e_tonga", "Tonga", 0.9),
      make_link("t2", t2, "Niuatoputapu", "e_niuatoputapu", "Niuatoputapu",
                0.9),
      make_link("t3", t3, "Tonga", "e_tonga", "Tonga", 0.9),
      make_link("t3", t3, "Deborah Gardner", "e_deborah_gardner",
                "Deborah Ann Gardner", 0.9),
      make_link("t3", t3, "1976", "e_1976", "1976", 0.9),
  };
  corpus.stats.accepted_records = corpus.records.size();
  corpus.stats.accepted_links = corpus.links.size();
  check(corpus);
  return corpus;
}

Corpus synthetic_corpus(unsigned seed, std::size_t n_records) {
  std::mt19937 rng(seed);
  const std::vector<std::string> entities = {
      "fiji",   "tonga",    "samoa",   "grease",  "velvet", "1976",
      "1994",   "2002",     "atuan",   "tenar",   "aihal",  "marseille",
      "byrne",  "kooning",  "borchetta", "kashmir"};
  const std::vector<std::string> fillers = {
      "the",  "of",    "in",   "was",  "a",     "city", "band",
      "novel", "wrote", "play", "song", "first", "from", "about"};

  Corpus corpus;
  const std::size_t n_docs = 8;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::string>> doc_tokens;
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::vector<std::string> tokens;
    for (std::size_t t = 0; t < 40; ++t) {
      // Entity-heavy vocabulary so answers and references collide often.
      if (rng() % 3 == 0) {
        tokens.push_back(entities[rng() % entities.size()]);
      } else {
        tokens.push_back(fillers[rng() % fillers.size()]);
      }
    }
    std::string text;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (t) text += " ";
      text += tokens[t];
    }
    const std::string doc_id = "sd" + std::to_string(d);
    corpus.passages[doc_id] = {doc_id, text, std::nullopt};
    doc_ids.push_back(doc_id);
    doc_tokens.push_back(std::move(tokens));
  }

  // Fixture text is ASCII and space-joined, so token offsets are arithmetic.
  auto token_span = [&](std::size_t d, std::size_t index) {
    const auto& tokens = doc_tokens[d];
    std::size_t off = 0;
    for (std::size_t t = 0; t < index; ++t) off += tokens[t].size() + 1;
    return Span{off, off + tokens[index].size(), tokens[index]};
  };

  // Link every entity occurrence with a random confidence.
  for (std::size_t d = 0; d < n_docs; ++d) {
    for (std::size_t t = 0; t < doc_tokens[d].size(); ++t) {
      const auto& token = doc_tokens[d][t];
      if (std::find(entities.begin(), entities.end(), token) ==
          entities.end()) {
        continue;
      }
      const double confs[] = {0.2, 0.4, 0.6, 0.9};
      EntityLink link;
      link.doc_id = doc_ids[d];
      link.mention = token_span(d, t);
      link.entity_id = "e_" + token;
      link.canonical_name = token;
      link.link_confidence = confs[rng() % 4];
      corpus.links.push_back(std::move(link));
    }
  }

  for (std::size_t i = 0; i < n_records; ++i) {
    const std::size_t d = rng() % n_docs;
    const auto& tokens = doc_tokens[d];
    const std::size_t answer_idx = rng() % tokens.size();
    // Word-boundary safety: spans cover whole tokens, but find() is
    // substring-based, so resolve occurrences on token positions instead.
    QaRecord r;
    r.record_id = "syn-" + std::to_string(i);
    r.doc_id = doc_ids[d];
    Span answer = token_span(d, answer_idx);

    const std::size_t n_refs = rng() % 3;  // 0, 1 or 2
    std::vector<std::size_t> ref_idx;
    for (std::size_t attempt = 0; attempt < 12 && ref_idx.size() < n_refs;
         ++attempt) {
      const std::size_t idx = rng() % tokens.size();
      if (idx == answer_idx) continue;
      if (tokens[idx] == tokens[answer_idx]) continue;
      bool dup = false;
      for (std::size_t existing : ref_idx) {
        if (existing == idx || tokens[existing] == tokens[idx]) dup = true;
      }
      if (!dup) ref_idx.push_back(idx);
    }

    std::string question = "q" + std::to_string(i) + " which";
    std::vector<std::pair<Span, Span>> spans;  // (q_span placeholder, d_span)
    const double confs[] = {0.5, 0.7, 1.0};
    for (std::size_t ridx : ref_idx) {
      question += " ";
      const std::size_t q_start = text::utf8_length(question);
      question += tokens[ridx];
      Span q_span{q_start, q_start + text::utf8_length(tokens[ridx]),
                  tokens[ridx]};
      spans.emplace_back(q_span, token_span(d, ridx));
    }
    question += " is " + tokens[answer_idx];
    r.question = question;
    r.answer = answer;
    for (const auto& [q_span, d_span] : spans) {
      r.references.push_back({q_span, d_span, confs[rng() % 3]});
    }
    r.question_entities.resize(r.references.size());

    // Answers may not overlap same-record passage references; skip instead
    // of repairing, frequencies do not matter here.
    bool ok = true;
    for (const auto& ref : r.references) {
      if (r.answer.overlaps(ref.d_span)) ok = false;
    }
    if (ok) corpus.records.push_back(std::move(r));
  }
  corpus.stats.accepted_records = corpus.records.size();
  corpus.stats.accepted_links = corpus.links.size();
  check(corpus);
  return corpus;
}

std::vector<QaRecord> synthetic_questions(unsigned seed, std::size_t n) {
  std::mt19937 rng(seed);
  const std::vector<std::string> vocab = {
      "who",   "what",  "where",  "when",   "first", "city",   "river",
      "play",  "song",  "novel",  "wrote",  "king",  "nation", "mountain",
      "album", "team",  "movie",  "series", "prize", "physics"};
  std::vector<QaRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    QaRecord r;
    r.record_id = "bm-" + std::to_string(i);
    std::string q;
    const std::size_t len = 4 + rng() % 5;
    for (std::size_t t = 0; t < len; ++t) {
      if (t) q += " ";
      q += vocab[rng() % vocab.size()];
    }
    // A unique trailing token keeps every question distinct.
    q += " t" + std::to_string(i);
    r.question = q;
    out.push_back(std::move(r));
  }
  return out;
}

BuiltFixture build_fixture(Corpus corpus, double min_link_confidence) {
  BuiltFixture out;
  out.corpus = std::move(corpus);
  std::map<std::string, std::vector<EntityLink>> by_doc;
  for (const auto& l : out.corpus.links) by_doc[l.doc_id].push_back(l);
  for (const auto& r : out.corpus.records) {
    auto it = by_doc.find(r.doc_id);
    if (it == by_doc.end()) continue;
    auto m = match_entities_to_references(r, it->second, min_link_confidence);
    out.matches.insert(out.matches.end(), m.begin(), m.end());
  }
  GraphConfig gc;
  gc.min_link_confidence = min_link_confidence;
  out.graph = build_graph(out.corpus, out.matches, gc);
  return out;
}

void write_corpus_files(const Corpus& corpus,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "passages.jsonl");
    for (const auto& [id, p] : corpus.passages) out << encode_passage(p) << "\n";
  }
  {
    std::ofstream out(dir / "qa.jsonl");
    for (const auto& r : corpus.records) out << encode_record(r) << "\n";
  }
  {
    std::ofstream out(dir / "links.jsonl");
    for (const auto& l : corpus.links) out << encode_link(l) << "\n";
  }
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("qedb_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace qedb::testing
