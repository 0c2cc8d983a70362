#include "qedb/retrieve.hpp"

#include "qedb/text.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qedb {

Bm25Index::Bm25Index(
    std::span<const std::pair<std::string, std::string>> questions, double k1,
    double b)
    : k1_(k1), b_(b) {
  std::size_t total = 0;
  for (const auto& [record_id, question] : questions) {
    const std::size_t doc = record_ids_.size();
    record_ids_.push_back(record_id);
    const auto tokens = text::tokenize(question);
    doc_lengths_.push_back(tokens.size());
    total += tokens.size();
    std::map<std::string, std::size_t> tf;
    for (const auto& t : tokens) ++tf[t];
    for (const auto& [term, count] : tf) {
      postings_[term].push_back({doc, count});
    }
  }
  avg_length_ = doc_lengths_.empty()
                    ? 0.0
                    : static_cast<double>(total) /
                          static_cast<double>(doc_lengths_.size());
}

namespace {
std::vector<std::pair<std::string, std::string>> id_question_pairs(
    std::span<const QaRecord> records) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(records.size());
  for (const auto& r : records) out.emplace_back(r.record_id, r.question);
  return out;
}
}  // namespace

Bm25Index::Bm25Index(std::span<const QaRecord> records, double k1, double b)
    : Bm25Index(id_question_pairs(records), k1, b) {}

Bm25Index index_graph_questions(const QedbGraph& graph, double k1, double b) {
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(graph.edges.size());
  for (const auto& e : graph.edges) pairs.emplace_back(e.record_id, e.question);
  return Bm25Index(pairs, k1, b);
}

std::vector<ScoredRecord> Bm25Index::retrieve(const std::string& query,
                                              std::size_t top_k) const {
  const std::size_t n = doc_lengths_.size();
  if (n == 0 || top_k == 0) return {};

  // Distinct query terms, each weighted once.
  const auto raw = text::tokenize(query);
  const std::set<std::string> terms(raw.begin(), raw.end());

  std::vector<double> scores(n, 0.0);
  for (const auto& term : terms) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double df = static_cast<double>(it->second.size());
    const double idf =
        std::log(1.0 + (static_cast<double>(n) - df + 0.5) / (df + 0.5));
    for (const auto& p : it->second) {
      const double tf = static_cast<double>(p.tf);
      const double norm =
          k1_ * (1.0 - b_ + b_ * static_cast<double>(doc_lengths_[p.doc]) /
                                 avg_length_);
      scores[p.doc] += idf * tf * (k1_ + 1.0) / (tf + norm);
    }
  }

  std::vector<ScoredRecord> out;
  for (std::size_t d = 0; d < n; ++d) {
    if (scores[d] > 0.0) out.push_back({record_ids_[d], scores[d]});
  }
  std::sort(out.begin(), out.end(),
            [](const ScoredRecord& a, const ScoredRecord& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.record_id < b.record_id;
            });
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

std::vector<OneHopAnswer> answer_one_hop(const QedbGraph& graph,
                                         const Bm25Index& index,
                                         const std::string& query,
                                         std::size_t top_k) {
  std::map<std::string, const QuestionEdge*> edges_by_record;
  for (const auto& e : graph.edges) edges_by_record.emplace(e.record_id, &e);

  std::vector<OneHopAnswer> out;
  for (const auto& hit : index.retrieve(query, top_k)) {
    auto it = edges_by_record.find(hit.record_id);
    if (it == edges_by_record.end()) continue;
    const Node* answer = graph.find_node(it->second->target);
    if (!answer) continue;
    auto dup = std::find_if(out.begin(), out.end(), [&](const OneHopAnswer& a) {
      return a.answer == answer->text;
    });
    if (dup == out.end()) {
      out.push_back({answer->text, it->second->question, hit.score});
    }
    // Retrieval order is score-descending, so the first hit already holds
    // the max score for its answer text.
  }
  return out;
}

namespace {

double token_f1(const std::vector<std::string>& pred,
                const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return pred.empty() && gold.empty() ? 1.0 : 0.0;
  std::map<std::string, std::size_t> counts;
  for (const auto& t : gold) ++counts[t];
  std::size_t overlap = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double precision =
      static_cast<double>(overlap) / static_cast<double>(pred.size());
  const double recall =
      static_cast<double>(overlap) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

std::string normalize(const std::string& s) {
  return text::collapse_whitespace(text::to_lower(s));
}

// Max-weight one-to-one matching; exact over the smaller side (bitmask DP)
// when feasible, greedy beyond.
double best_matching_total(const std::vector<std::vector<double>>& weight) {
  const std::size_t rows = weight.size();
  if (rows == 0) return 0.0;
  const std::size_t cols = weight[0].size();
  if (cols == 0) return 0.0;
  if (cols > 16 && rows <= 16) {
    std::vector<std::vector<double>> t(cols, std::vector<double>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) t[c][r] = weight[r][c];
    }
    return best_matching_total(t);
  }
  if (cols <= 16) {
    std::vector<double> dp(std::size_t{1} << cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      auto next = dp;
      for (std::size_t mask = 0; mask < dp.size(); ++mask) {
        for (std::size_t c = 0; c < cols; ++c) {
          if (mask & (std::size_t{1} << c)) continue;
          const std::size_t m2 = mask | (std::size_t{1} << c);
          next[m2] = std::max(next[m2], dp[mask] + weight[r][c]);
        }
      }
      dp = std::move(next);
    }
    return *std::max_element(dp.begin(), dp.end());
  }
  // Greedy fallback for large lists.
  struct Cell {
    double w;
    std::size_t r, c;
  };
  std::vector<Cell> cells;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) cells.push_back({weight[r][c], r, c});
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.w != b.w) return a.w > b.w;
    if (a.r != b.r) return a.r < b.r;
    return a.c < b.c;
  });
  std::vector<bool> used_r(rows, false), used_c(cols, false);
  double total = 0.0;
  for (const auto& cell : cells) {
    if (used_r[cell.r] || used_c[cell.c]) continue;
    used_r[cell.r] = true;
    used_c[cell.c] = true;
    total += cell.w;
  }
  return total;
}

}  // namespace

EmF1 em_f1(std::span<const std::string> predicted,
           std::span<const std::string> gold) {
  std::vector<std::string> p_norm, g_norm;
  for (const auto& s : predicted) p_norm.push_back(normalize(s));
  for (const auto& s : gold) g_norm.push_back(normalize(s));

  EmF1 result;
  {
    auto p_sorted = p_norm;
    auto g_sorted = g_norm;
    std::sort(p_sorted.begin(), p_sorted.end());
    std::sort(g_sorted.begin(), g_sorted.end());
    result.em = p_sorted == g_sorted ? 1 : 0;
  }

  if (p_norm.empty() && g_norm.empty()) {
    result.f1 = 1.0;
    return result;
  }
  if (p_norm.empty() || g_norm.empty()) {
    result.f1 = 0.0;
    return result;
  }

  std::vector<std::vector<std::string>> p_tokens, g_tokens;
  for (const auto& s : p_norm) p_tokens.push_back(text::tokenize(s));
  for (const auto& s : g_norm) g_tokens.push_back(text::tokenize(s));

  std::vector<std::vector<double>> weight(p_tokens.size());
  for (std::size_t i = 0; i < p_tokens.size(); ++i) {
    weight[i].resize(g_tokens.size());
    for (std::size_t j = 0; j < g_tokens.size(); ++j) {
      weight[i][j] = token_f1(p_tokens[i], g_tokens[j]);
    }
  }
  result.f1 = best_matching_total(weight) /
              static_cast<double>(std::max(p_norm.size(), g_norm.size()));
  return result;
}

}  // namespace qedb
