// qedb: build and query a question-answer explanation graph.
//
// Subcommands: build, join, related, frame, type2, ask, stats, export.
// Exit codes: 0 success, 1 usage, 2 data error, 3 store error.

#include "qedb/compose.hpp"
#include "qedb/config.hpp"
#include "qedb/graph.hpp"
#include "qedb/ingest.hpp"
#include "qedb/linker.hpp"
#include "qedb/retrieve.hpp"
#include "qedb/store.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitStore = 3;

std::string default_store() {
  const char* env = std::getenv("QEDB_STORE");
  return env ? env : "";
}

qedb::QedbGraph open_store(const std::string& path) {
  if (path.empty()) {
    throw qedb::StoreError(
        "no store path given (use --store or set QEDB_STORE)");
  }
  return qedb::load_store(path);
}

// Flags override config-file values, which override defaults.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, double> doubles;
  std::map<std::string, std::size_t> sizes;
  bool strict_flag = false;
  bool lenient_flag = false;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "JSON config file");
    add_double(app, "--min-link-confidence", "min_link_confidence");
    add_double(app, "--min-align-conf", "min_align_conf");
    add_double(app, "--distinctness-threshold", "distinctness_threshold");
    add_double(app, "--bm25-k1", "bm25_k1");
    add_double(app, "--bm25-b", "bm25_b");
    app.add_option_function<std::size_t>(
        "--max-bridge-popularity",
        [this](std::size_t v) { sizes["max_bridge_popularity"] = v; },
        "Cap on bridge-entity popularity");
    app.add_flag("--strict", strict_flag, "Reject the load on any bad record");
    app.add_flag("--lenient", lenient_flag, "Drop and count bad records");
  }

  qedb::Config resolve() const {
    qedb::Config c;
    if (!config_path.empty()) c = qedb::load_config(config_path);
    apply(c.min_link_confidence, "min_link_confidence");
    apply(c.min_align_conf, "min_align_conf");
    apply(c.distinctness_threshold, "distinctness_threshold");
    apply(c.bm25_k1, "bm25_k1");
    apply(c.bm25_b, "bm25_b");
    if (auto it = sizes.find("max_bridge_popularity"); it != sizes.end()) {
      c.max_bridge_popularity = it->second;
    }
    if (strict_flag) c.strict = true;
    if (lenient_flag) c.strict = false;
    qedb::validate_config(c);
    return c;
  }

 private:
  void add_double(CLI::App& app, const std::string& flag,
                  const std::string& key) {
    app.add_option_function<double>(
        flag, [this, key](double v) { doubles[key] = v; }, "");
  }
  void apply(double& field, const std::string& key) const {
    if (auto it = doubles.find(key); it != doubles.end()) field = it->second;
  }
};

int cmd_build(const std::string& passages, const std::string& qa,
              const std::string& links, const std::string& out_dir,
              const qedb::Config& config) {
  std::string links_path = links;
  if (!links_path.empty() && !std::filesystem::exists(links_path)) {
    std::cerr << "warning: links file " << links_path
              << " not found; building without an entity layer\n";
    links_path.clear();
  }
  const auto corpus = qedb::load_corpus(
      passages, qa, links_path,
      config.strict ? qedb::Strictness::Strict : qedb::Strictness::Lenient);

  std::map<std::string, std::vector<qedb::EntityLink>> links_by_doc;
  for (const auto& l : corpus.links) links_by_doc[l.doc_id].push_back(l);
  std::vector<qedb::ReferenceEntityMatch> matches;
  for (const auto& r : corpus.records) {
    auto it = links_by_doc.find(r.doc_id);
    if (it == links_by_doc.end()) continue;
    auto m = qedb::match_entities_to_references(r, it->second,
                                                config.min_link_confidence);
    matches.insert(matches.end(), m.begin(), m.end());
  }

  qedb::GraphConfig gc;
  gc.min_link_confidence = config.min_link_confidence;
  const auto graph = qedb::build_graph(corpus, matches, gc);

  // Write to a staging directory first so a failed build leaves no partial
  // store behind.
  const std::filesystem::path out(out_dir);
  const std::filesystem::path staging = out.string() + ".tmp";
  std::filesystem::remove_all(staging);
  qedb::save_store(graph, staging);
  std::filesystem::remove_all(out);
  std::filesystem::rename(staging, out);

  const auto stats = qedb::graph_stats(graph);
  std::cout << "records accepted\t" << corpus.stats.accepted_records << "\n"
            << "records rejected\t" << corpus.stats.rejected_records << "\n"
            << "links accepted\t" << corpus.stats.accepted_links << "\n"
            << "links rejected\t" << corpus.stats.rejected_links << "\n"
            << "span nodes\t" << stats.span_nodes << "\n"
            << "entity nodes\t" << stats.entity_nodes << "\n"
            << "edges\t" << stats.edges << "\n"
            << "mentions\t" << stats.mentions << "\n"
            << "distinct labels\t" << stats.distinct_labels << "\n";
  for (const auto& [arity, count] : stats.arity_histogram) {
    std::cout << "arity " << arity << "\t" << count << "\n";
  }
  std::cout << "question linkable fraction\t"
            << stats.question_linkable_fraction << "\n"
            << "answer+question linkable fraction\t"
            << stats.answer_and_question_linkable_fraction << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Question-answer explanation graph builder and query engine"};
  app.require_subcommand(1);

  ConfigFlags flags;
  std::string store = default_store();
  std::string passages, qa, links, out_dir;
  std::string entity, query;
  std::size_t top_k = 10;

  auto* build = app.add_subcommand("build", "Build a store from input files");
  build->add_option("--passages", passages, "Passages JSONL")->required();
  build->add_option("--qa", qa, "QA records JSONL")->required();
  build->add_option("--links", links, "Entity links JSONL");
  build->add_option("--out", out_dir, "Output store directory")->required();
  flags.attach(*build);

  auto* join = app.add_subcommand("join", "Enumerate 2-hop bridge joins");
  join->add_option("--store", store, "Store directory");
  flags.attach(*join);

  auto* related = app.add_subcommand("related", "Rank related entities");
  related->add_option("--store", store, "Store directory");
  related->add_option("--entity", entity, "Query entity id")->required();
  related->add_option("--top", top_k, "Max results");
  flags.attach(*related);

  auto* frame = app.add_subcommand("frame", "Frame query for an entity");
  frame->add_option("--store", store, "Store directory");
  frame->add_option("--entity", entity, "Query entity id")->required();
  flags.attach(*frame);

  auto* type2 = app.add_subcommand("type2", "Shared-answer question pairs");
  type2->add_option("--store", store, "Store directory");
  type2->add_option("--entity", entity, "Query entity id")->required();
  flags.attach(*type2);

  auto* ask = app.add_subcommand("ask", "One-hop answer by question similarity");
  ask->add_option("--store", store, "Store directory");
  ask->add_option("question", query, "Question text")->required();
  ask->add_option("--top", top_k, "Max retrieved questions");
  flags.attach(*ask);

  auto* stats_cmd = app.add_subcommand("stats", "Print store statistics");
  stats_cmd->add_option("--store", store, "Store directory");

  auto* export_cmd = app.add_subcommand("export", "Lossless line-delimited dump");
  export_cmd->add_option("--store", store, "Store directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const qedb::Config config = flags.resolve();

    if (build->parsed()) {
      return cmd_build(passages, qa, links, out_dir, config);
    }

    const auto graph = open_store(store);

    if (join->parsed()) {
      qedb::JoinConstraints c;
      c.set_min_align_conf(config.min_align_conf);
      c.max_bridge_popularity = config.max_bridge_popularity;
      for (const auto& j : qedb::enumerate_bridge_joins(graph, c)) {
        std::cout << j.rendered_q1 << "\t"
                  << graph.entity_name(j.bridge_entity) << "\t"
                  << j.rendered_q2 << "\t" << j.answer << "\n";
      }
    } else if (related->parsed()) {
      for (const auto& r : qedb::related_entities(
               graph, entity, top_k, config.min_link_confidence)) {
        std::cout << r.related_entity << "\t"
                  << graph.entity_name(r.related_entity) << "\t" << r.support
                  << "\t" << r.example_question << "\n";
      }
    } else if (frame->parsed()) {
      for (const auto& g : qedb::frame_query(graph, entity)) {
        for (const auto& [answer, record_id] : g.answers) {
          std::cout << g.label << "\t" << answer << "\t" << record_id << "\n";
        }
      }
    } else if (type2->parsed()) {
      for (const auto& [a, b] : qedb::shared_answer_query(
               graph, entity, config.distinctness_threshold)) {
        std::cout << a << "\t" << b << "\n";
      }
    } else if (ask->parsed()) {
      const auto index =
          qedb::index_graph_questions(graph, config.bm25_k1, config.bm25_b);
      for (const auto& a :
           qedb::answer_one_hop(graph, index, query, top_k)) {
        std::cout << a.answer << "\t" << a.supporting_question << "\t"
                  << a.score << "\n";
      }
    } else if (stats_cmd->parsed()) {
      const auto s = qedb::graph_stats(graph);
      std::cout << "span nodes\t" << s.span_nodes << "\n"
                << "entity nodes\t" << s.entity_nodes << "\n"
                << "edges\t" << s.edges << "\n"
                << "mentions\t" << s.mentions << "\n"
                << "distinct labels\t" << s.distinct_labels << "\n";
      for (const auto& [arity, count] : s.arity_histogram) {
        std::cout << "arity " << arity << "\t" << count << "\n";
      }
      std::cout << "question linkable fraction\t"
                << s.question_linkable_fraction << "\n"
                << "answer+question linkable fraction\t"
                << s.answer_and_question_linkable_fraction << "\n";
    } else if (export_cmd->parsed()) {
      qedb::export_graph(graph, std::cout);
    }
    return 0;
  } catch (const qedb::StoreError& e) {
    std::cerr << "store error: " << e.what() << "\n";
    return kExitStore;
  } catch (const qedb::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
