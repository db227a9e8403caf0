// Command-line front end: graph building, search, interactive dialogue,
// evaluation and the HTTP service.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <apiclarify/apiclarify.hpp>

namespace {

using namespace apiclarify;

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

void print_recommendation(const Recommendation& rec, const KnowledgeGraph& graph) {
  auto keywords = [](const std::vector<Keyword>& ks) {
    std::string out;
    for (const auto& k : ks) {
      if (k.source != KeywordSource::DecisionPath) continue;
      if (!out.empty()) out += ", ";
      out += k.text;
    }
    return out;
  };
  std::cout << "Results (" << rec.rounds << " rounds):\n";
  for (const auto& e : rec.results) {
    std::cout << "  " << graph.label(e.api) << "\n      " << e.description << "\n";
    if (!e.keywords.empty()) std::cout << "      keywords: " << keywords(e.keywords) << "\n";
  }
  if (!rec.extensions.empty()) std::cout << "Extended APIs:\n";
  for (const auto& e : rec.extensions)
    std::cout << "  " << graph.label(e.api) << "  [" << display_name(*e.relation) << " of "
              << graph.label(*e.related_to) << "]\n      " << e.description << "\n";
}

int run_dialogue(const KnowledgeGraph& graph, const Retriever& retriever, const std::string& query,
                 const DialogueOptions& options, bool dump_tree) {
  auto session = start_session(query, graph, retriever, options);
  if (dump_tree) std::cout << tree_to_json(session.tree).dump(2) << "\n";
  while (session.state == SessionState::AwaitingAnswer) {
    auto q = next_question(session);
    std::cout << "\n" << q.text << "\n";
    for (std::size_t k = 0; k < q.options.size(); ++k)
      std::cout << "  " << (k + 1) << ") " << q.options[k].label << "  (" << q.options[k].api_count << " APIs)\n";
    std::cout << "Choose a number or 'stop': " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line) || text::collapse_whitespace(line) == "stop") {
      stop(session);
      break;
    }
    try {
      std::size_t k = std::stoul(line);
      if (k < 1 || k > q.options.size()) throw std::out_of_range("option");
      apply_selection(session, q.options[k - 1].id);
    } catch (const std::logic_error&) {
      std::cout << "Please enter 1-" << q.options.size() << " or 'stop'.\n";
    }
  }
  std::cout << "\n";
  print_recommendation(recommend(session, graph), graph);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive API recommendation over an API behavior knowledge graph"};
  app.require_subcommand(1);

  std::string pairs, annotations, triples, out_dir;
  auto* build = app.add_subcommand("build-kg", "Build a knowledge graph from method-description pairs");
  build->add_option("--pairs", pairs, "Line-delimited {fqn, description} records")->required();
  build->add_option("--annotations", annotations, "Line-delimited external annotations");
  build->add_option("--triples", triples, "Line-delimited {left, kind, right} simple-name triples");
  build->add_option("--out", out_dir, "Output graph directory")->required();

  std::string kg, query, candidates_file, strategy = "id3";
  std::size_t n = 10;
  bool dump_tree = false;
  auto* search = app.add_subcommand("search", "Rank candidate APIs for a query");
  search->add_option("--kg", kg, "Graph directory")->required();
  search->add_option("--query", query, "Query text")->required();
  search->add_option("--n", n, "Number of candidates")->check(CLI::PositiveNumber);
  search->add_option("--candidates-file", candidates_file, "Fixed ranked candidates, one fqn per line");

  auto* dialogue = app.add_subcommand("dialogue", "Clarify a query interactively");
  dialogue->add_option("--kg", kg, "Graph directory")->required();
  dialogue->add_option("--query", query, "Query text")->required();
  dialogue->add_option("--strategy", strategy, "id3 or c45")->check(CLI::IsMember({"id3", "c45"}));
  dialogue->add_option("--n", n, "Number of retrieved candidates")->check(CLI::PositiveNumber);
  dialogue->add_option("--candidates-file", candidates_file, "Fixed ranked candidates, one fqn per line");
  dialogue->add_flag("--dump-tree", dump_tree, "Print the decision tree as JSON first");

  std::string dataset, report_path;
  std::size_t top = 0, rounds = 3;
  auto* eval = app.add_subcommand("eval", "Simulated-user evaluation on a query dataset");
  eval->add_option("--kg", kg, "Graph directory")->required();
  eval->add_option("--dataset", dataset, "Line-delimited {query, best, extended} records")->required();
  eval->add_option("--top", top, "Truncate recommended lists (0 keeps all)");
  eval->add_option("--rounds", rounds, "Maximum simulated rounds")->check(CLI::PositiveNumber);
  eval->add_option("--strategy", strategy, "id3 or c45")->check(CLI::IsMember({"id3", "c45"}));
  eval->add_option("--n", n, "Number of retrieved candidates")->check(CLI::PositiveNumber);
  eval->add_option("--out", report_path, "Write the JSON report here instead of stdout");

  std::string kinds = "v-do,v-po,v-do-po";
  auto* compare = app.add_subcommand("har-compare", "Compare ID3 and C4.5 dialogue lengths on synthetic queries");
  compare->add_option("--kg", kg, "Graph directory")->required();
  compare->add_option("--kinds", kinds, "Comma-separated subset of v-do,v-po,v-do-po");
  compare->add_option("--n", n, "Number of retrieved candidates")->check(CLI::PositiveNumber);
  compare->add_option("--out", report_path, "Write the JSON report here instead of stdout");

  std::string bind;
  long ttl = -1;
  auto* serve = app.add_subcommand("serve", "Serve dialogue sessions over HTTP");
  serve->add_option("--kg", kg, "Graph directory (default $APICLARIFY_KG)");
  serve->add_option("--bind", bind, "host:port (default $APICLARIFY_BIND or 127.0.0.1:8080)");
  serve->add_option("--ttl", ttl, "Idle session timeout in seconds (default $APICLARIFY_SESSION_TTL or 1800)");

  CLI11_PARSE(app, argc, argv);

  auto emit = [&](const nlohmann::json& j) {
    if (report_path.empty()) {
      std::cout << j.dump(2) << "\n";
      return;
    }
    std::ofstream out(report_path);
    if (!out) throw Error(ErrorCode::FormatError, "cannot write " + report_path);
    out << j.dump(2) << "\n";
  };

  try {
    if (build->parsed()) {
      auto result = build_graph(read_pairs(pairs), annotations.empty() ? AnnotationMap{} : read_annotations(annotations),
                                triples.empty() ? std::vector<SimpleNameTriple>{} : read_triples(triples));
      store_graph(result.graph, out_dir);
      const auto& s = result.stats;
      for (const auto& line : s.log) std::cerr << line << "\n";
      std::cout << "apis " << s.api_entities << ", other entities " << s.other_entities << ", functional relations "
                << s.functional_relations << ", semantic relations " << s.semantic_relations << ", rejected pairs "
                << s.rejected_pairs << ", dropped triples " << s.dropped_triples << "\n";
      return 0;
    }

    if (serve->parsed()) {
      kg = kg.empty() ? env_or("APICLARIFY_KG", "") : kg;
      if (kg.empty()) throw Error(ErrorCode::InvalidArgument, "no graph directory (--kg or APICLARIFY_KG)");
      bind = bind.empty() ? env_or("APICLARIFY_BIND", "127.0.0.1:8080") : bind;
      if (ttl < 0) ttl = std::stol(env_or("APICLARIFY_SESSION_TTL", "1800"));
      auto graph = load_graph(kg);
      ServiceConfig config;
      config.session_ttl = std::chrono::seconds(ttl);
      DialogueService service(graph, config);
      httplib::Server server;
      service.mount(server);
      auto [host, port] = parse_bind_address(bind);
      std::cerr << "serving " << graph.api_count() << " APIs on " << host << ":" << port << "\n";
      if (!server.listen(host, port)) throw Error(ErrorCode::InvalidArgument, "cannot bind " + bind);
      return 0;
    }

    auto graph = load_graph(kg);
    std::unique_ptr<Retriever> retriever;
    if (!candidates_file.empty())
      retriever = std::make_unique<CandidateFileRetriever>(graph, candidates_file);
    else
      retriever = std::make_unique<LexicalIndex>(graph);
    DialogueOptions options;
    options.strategy = *parse_strategy(strategy);
    options.n = n;

    if (search->parsed()) {
      for (const auto& c : search_candidates(query, n, *retriever))
        std::cout << c.score << "\t" << graph.label(c.api) << "\n";
      return 0;
    }
    if (dialogue->parsed()) return run_dialogue(graph, *retriever, query, options, dump_tree);
    if (eval->parsed()) {
      EvalOptions eo;
      eo.dialogue = options;
      eo.max_rounds = rounds;
      eo.top = top;
      emit(to_json(run_evaluation(graph, *retriever, read_eval_dataset(dataset), eo), eo));
      return 0;
    }
    if (compare->parsed()) {
      nlohmann::json report = nlohmann::json::object();
      for (const auto& name : text::split(kinds, ',')) {
        auto kind = parse_synthetic_kind(text::collapse_whitespace(name));
        if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown query kind " + name);
        std::vector<std::string> queries;
        for (const auto& q : generate_synthetic_queries(graph, *kind)) queries.push_back(q.text);
        auto result = compare_strategies(graph, *retriever, queries, options);
        report[std::string(to_string(*kind))] = to_json(result);
      }
      emit(report);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
