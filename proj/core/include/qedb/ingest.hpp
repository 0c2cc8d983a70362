#pragma once

#include "qedb/model.hpp"

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qedb {

// Raised on malformed input lines or unrecoverable load failures.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strictness { Strict, Lenient };

struct CorpusStats {
  std::size_t accepted_records = 0;
  std::size_t rejected_records = 0;
  std::size_t accepted_links = 0;
  std::size_t rejected_links = 0;

  bool operator==(const CorpusStats&) const = default;
};

// Validated, immutable input set for graph construction.
struct Corpus {
  std::map<std::string, Passage> passages;
  std::vector<QaRecord> records;
  std::vector<EntityLink> links;
  CorpusStats stats;

  bool operator==(const Corpus&) const = default;
};

// JSONL codecs. Encoding is canonical: same value, same bytes.
std::string encode_passage(const Passage& p);
std::string encode_record(const QaRecord& r);
std::string encode_link(const EntityLink& l);
Passage decode_passage(const std::string& line);
QaRecord decode_record(const std::string& line);
EntityLink decode_link(const std::string& line);

// One object per line; errors carry the 1-based line number.
std::vector<Passage> parse_passages(std::istream& in);
std::vector<QaRecord> parse_qa_records(std::istream& in);
std::vector<EntityLink> parse_links(std::istream& in);

// Loads and cross-validates the three inputs. Strict mode throws on the first
// record/link that lenient mode would drop. An empty links_path skips the
// entity layer entirely.
Corpus load_corpus(const std::string& passages_path,
                   const std::string& records_path,
                   const std::string& links_path, Strictness strictness);

}  // namespace qedb
