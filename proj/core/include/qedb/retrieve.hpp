#pragma once

#include "qedb/graph.hpp"
#include "qedb/model.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace qedb {

struct ScoredRecord {
  std::string record_id;
  double score = 0.0;

  bool operator==(const ScoredRecord&) const = default;
};

// Inverted index over question texts.
class Bm25Index {
 public:
  Bm25Index() = default;
  Bm25Index(std::span<const QaRecord> records, double k1 = 1.2,
            double b = 0.75);
  // (record_id, question) pairs; used when indexing a loaded graph.
  Bm25Index(std::span<const std::pair<std::string, std::string>> questions,
            double k1 = 1.2, double b = 0.75);

  // Standard BM25 ranking; ties break by record_id; at most top_k results.
  // Records scoring 0 (no shared tokens) are omitted.
  std::vector<ScoredRecord> retrieve(const std::string& query,
                                     std::size_t top_k) const;

  std::size_t size() const { return doc_lengths_.size(); }
  double k1() const { return k1_; }
  double b() const { return b_; }

 private:
  struct Posting {
    std::size_t doc = 0;  // index into record_ids_
    std::size_t tf = 0;
  };
  std::map<std::string, std::vector<Posting>> postings_;
  std::vector<std::string> record_ids_;
  std::vector<std::size_t> doc_lengths_;
  double avg_length_ = 0.0;
  double k1_ = 1.2;
  double b_ = 0.75;
};

inline Bm25Index build_index(std::span<const QaRecord> records, double k1 = 1.2,
                             double b = 0.75) {
  return Bm25Index(records, k1, b);
}

inline std::vector<ScoredRecord> retrieve_similar(const Bm25Index& index,
                                                  const std::string& query,
                                                  std::size_t top_k) {
  return index.retrieve(query, top_k);
}

// Index over the stored questions of a loaded graph.
Bm25Index index_graph_questions(const QedbGraph& graph, double k1 = 1.2,
                                double b = 0.75);

struct OneHopAnswer {
  std::string answer;
  std::string supporting_question;
  double score = 0.0;

  bool operator==(const OneHopAnswer&) const = default;
};

// Maps retrieved records to their stored answers; duplicate answer texts
// merge keeping the best score.
std::vector<OneHopAnswer> answer_one_hop(const QedbGraph& graph,
                                         const Bm25Index& index,
                                         const std::string& query,
                                         std::size_t top_k);

struct EmF1 {
  int em = 0;
  double f1 = 0.0;

  bool operator==(const EmF1&) const = default;
};

// EM: normalized span-text multisets equal. F1: token-overlap F1 under the
// best one-to-one span matching, divided by max(|predicted|, |gold|).
EmF1 em_f1(std::span<const std::string> predicted,
           std::span<const std::string> gold);

}  // namespace qedb
