#pragma once

// Evaluation harness: simulated option selection, ranking metrics,
// synthetic role-based queries, and ID3 / C4.5 dialogue-length comparison.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dialogue.hpp"
#include "fqn.hpp"
#include "ingest.hpp"
#include "kg.hpp"
#include "recommend.hpp"
#include "retrieval.hpp"

namespace apiclarify {

// ---------------------------------------------------------------------------
// Simulated user

/// Follows the first option whose sub-tree still holds `best` for up to
/// `max_rounds` answers, then stops. Returns an empty list as soon as no
/// option leads to `best`. Matching ignores parameter lists.
inline std::vector<EntityId> simulate_user(DialogueSession& session, const std::string& best, std::size_t max_rounds) {
  std::set<EntityId> targets;
  for (const auto& row : session.tree.table().rows())
    if (fqn::same_method(row.name, best)) targets.insert(row.api);
  auto holds_best = [&](std::size_t node) {
    for (auto api : targets)
      if (subtree_contains(session, node, api)) return true;
    return false;
  };
  if (!holds_best(session.current)) return {};
  std::size_t rounds = 0;
  while (session.state == SessionState::AwaitingAnswer && rounds < max_rounds) {
    auto q = next_question(session);
    const auto& node = session.tree.node(session.current);
    std::optional<std::string> pick;
    for (std::size_t k = 0; k < q.options.size(); ++k)
      if (holds_best(node.edges[k].child)) {
        pick = q.options[k].id;
        break;
      }
    if (!pick) return {};
    apply_selection(session, *pick);
    ++rounds;
  }
  return stop(session);
}

// ---------------------------------------------------------------------------
// Metrics. All list entries are compared with parameter lists stripped.

namespace detail {

inline std::vector<std::string> method_keys(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& n : names) {
    auto key = fqn::strip_params(n);
    if (seen.insert(key).second) out.push_back(key);
  }
  return out;
}

inline std::set<std::string> key_set(const std::vector<std::string>& names) {
  auto keys = method_keys(names);
  return {keys.begin(), keys.end()};
}

}  // namespace detail

inline double precision(const std::vector<std::string>& recommended, const std::vector<std::string>& truth) {
  auto rec = detail::key_set(recommended);
  if (rec.empty()) return 0.0;
  auto gt = detail::key_set(truth);
  std::size_t hits = 0;
  for (const auto& r : rec) hits += gt.count(r);
  return static_cast<double>(hits) / static_cast<double>(rec.size());
}

inline double recall(const std::vector<std::string>& recommended, const std::vector<std::string>& truth) {
  auto gt = detail::key_set(truth);
  if (gt.empty()) return 0.0;
  auto rec = detail::key_set(recommended);
  std::size_t hits = 0;
  for (const auto& t : gt) hits += rec.count(t);
  return static_cast<double>(hits) / static_cast<double>(gt.size());
}

inline double reciprocal_rank(const std::vector<std::string>& ranked, const std::vector<std::string>& truth) {
  auto gt = detail::key_set(truth);
  auto keys = detail::method_keys(ranked);
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (gt.count(keys[i])) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

/// Mean of precision@k over the ranks k that hold a hit.
inline double average_precision(const std::vector<std::string>& ranked, const std::vector<std::string>& truth) {
  auto gt = detail::key_set(truth);
  auto keys = detail::method_keys(ranked);
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (gt.count(keys[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  return hits ? sum / static_cast<double>(hits) : 0.0;
}

inline double mrr(const std::vector<std::vector<std::string>>& ranked_lists,
                  const std::vector<std::vector<std::string>>& truths) {
  if (ranked_lists.size() != truths.size()) throw Error(ErrorCode::LengthMismatch, "ranked lists vs truths");
  if (ranked_lists.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ranked_lists.size(); ++i) sum += reciprocal_rank(ranked_lists[i], truths[i]);
  return sum / static_cast<double>(ranked_lists.size());
}

inline double map(const std::vector<std::vector<std::string>>& ranked_lists,
                  const std::vector<std::vector<std::string>>& truths) {
  if (ranked_lists.size() != truths.size()) throw Error(ErrorCode::LengthMismatch, "ranked lists vs truths");
  if (ranked_lists.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ranked_lists.size(); ++i) sum += average_precision(ranked_lists[i], truths[i]);
  return sum / static_cast<double>(ranked_lists.size());
}

// ---------------------------------------------------------------------------
// Synthetic queries

enum class SyntheticKind { VDo, VPo, VDoPo };

constexpr std::string_view to_string(SyntheticKind k) {
  switch (k) {
    case SyntheticKind::VDo: return "V-DO";
    case SyntheticKind::VPo: return "V-PO";
    case SyntheticKind::VDoPo: return "V-DO-PO";
  }
  return "";
}

inline std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  std::string n = text::to_lower(name);
  if (n == "v-do") return SyntheticKind::VDo;
  if (n == "v-po") return SyntheticKind::VPo;
  if (n == "v-do-po") return SyntheticKind::VDoPo;
  return std::nullopt;
}

struct SyntheticQuery {
  SyntheticKind kind;
  std::string text;
  EntityId source;  // first API the query was assembled from
};

struct EventRoles {
  std::string verb;
  std::optional<std::string> direct_object;
  std::string preposition;  // may be empty
  std::optional<std::string> preposition_object;
};

/// Roles of one stored event. The preposition is recovered from the event
/// label, which is "verb [object] [preposition object]".
inline EventRoles event_roles(EntityId api, EntityId event, const KnowledgeGraph& graph) {
  EventRoles roles;
  for (const auto& rel : graph.function_property(api)) {
    if (rel.kind == FunctionalRelationKind::ActHasEvent && rel.object == event) roles.verb = graph.label(rel.subject);
    if (rel.subject != event) continue;
    if (rel.kind == FunctionalRelationKind::HasDirectObject) roles.direct_object = graph.label(rel.object);
    if (rel.kind == FunctionalRelationKind::HasPrepositionObject) roles.preposition_object = graph.label(rel.object);
  }
  if (roles.preposition_object) {
    std::string label = graph.label(event);
    std::string head = roles.verb + " ";
    if (roles.direct_object) head += *roles.direct_object + " ";
    std::string tail = " " + *roles.preposition_object;
    if (text::starts_with(label, head) && text::ends_with(label, tail) && label.size() > head.size() + tail.size())
      roles.preposition = label.substr(head.size(), label.size() - head.size() - tail.size());
  }
  return roles;
}

inline std::vector<SyntheticQuery> generate_synthetic_queries(const KnowledgeGraph& graph, SyntheticKind kind) {
  std::vector<SyntheticQuery> out;
  std::set<std::string> seen;
  for (auto api : graph.apis()) {
    for (const auto& rel : graph.function_property(api)) {
      if (rel.kind != FunctionalRelationKind::ApiHasEvent) continue;
      auto r = event_roles(api, rel.object, graph);
      if (r.verb.empty()) continue;
      std::optional<std::string> q;
      bool has_po = r.preposition_object && !r.preposition.empty();
      if (kind == SyntheticKind::VDo && r.direct_object) q = r.verb + " " + *r.direct_object;
      if (kind == SyntheticKind::VPo && has_po) q = r.verb + " " + r.preposition + " " + *r.preposition_object;
      if (kind == SyntheticKind::VDoPo && has_po && r.direct_object)
        q = r.verb + " " + *r.direct_object + " " + r.preposition + " " + *r.preposition_object;
      if (q && seen.insert(*q).second) out.push_back({kind, *q, api});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Strategy comparison

struct HarDistribution {
  std::vector<double> values;
  double mean = 0.0;
  std::map<int, std::size_t> histogram;  // floor(HAR) -> query count
};

struct StrategyComparison {
  std::map<TreeStrategy, HarDistribution> by_strategy;
  std::size_t skipped = 0;
  std::vector<std::string> log;
};

inline StrategyComparison compare_strategies(const KnowledgeGraph& graph, const Retriever& retriever,
                                             const std::vector<std::string>& queries, DialogueOptions options = {}) {
  StrategyComparison out;
  for (const auto& query : queries) {
    std::map<TreeStrategy, double> hars;
    try {
      for (auto strategy : {TreeStrategy::ID3, TreeStrategy::C45}) {
        options.strategy = strategy;
        hars[strategy] = har(start_session(query, graph, retriever, options).tree);
      }
    } catch (const Error& e) {
      ++out.skipped;
      out.log.push_back("skipped '" + query + "': " + e.what());
      continue;
    }
    for (const auto& [strategy, value] : hars) {
      auto& d = out.by_strategy[strategy];
      d.values.push_back(value);
      d.histogram[static_cast<int>(std::floor(value))]++;
    }
  }
  for (auto& [strategy, d] : out.by_strategy) {
    double sum = 0.0;
    for (double v : d.values) sum += v;
    d.mean = d.values.empty() ? 0.0 : sum / static_cast<double>(d.values.size());
  }
  return out;
}

inline nlohmann::json to_json(const StrategyComparison& c) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [strategy, d] : c.by_strategy) {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [bin, count] : d.histogram) hist[std::to_string(bin)] = count;
    double max = 0.0;
    for (double v : d.values) max = std::max(max, v);
    out[std::string(to_string(strategy))] = {
        {"queries", d.values.size()}, {"mean_har", d.mean}, {"max_har", max}, {"histogram", hist}};
  }
  out["skipped"] = c.skipped;
  return out;
}

// ---------------------------------------------------------------------------
// Dataset evaluation

struct EvalQuery {
  std::string text;
  std::string best;
  std::vector<std::string> extended;
};

inline std::vector<EvalQuery> read_eval_dataset(const std::string& path) {
  std::vector<EvalQuery> out;
  detail::for_each_json_line(path, [&](const nlohmann::json& j) {
    EvalQuery q{j.at("query").get<std::string>(), j.at("best").get<std::string>(),
                j.value("extended", std::vector<std::string>{})};
    for (const auto& e : q.extended)
      if (fqn::same_method(e, q.best)) throw Error(ErrorCode::FormatError, "best API listed as extended");
    out.push_back(std::move(q));
  });
  return out;
}

struct MetricsReport {
  double mrr = 0.0;
  double map = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct EvalOptions {
  DialogueOptions dialogue;
  std::size_t max_rounds = 3;
  std::size_t top = 0;  // 0 keeps full lists
};

struct QueryOutcome {
  std::string query;
  std::string best;
  std::vector<std::vector<std::string>> recommended;  // per round, results then extensions
  std::string error;                                   // set when the query could not start a dialogue
};

struct EvalReport {
  std::vector<MetricsReport> by_round;  // index r-1 for r answered rounds
  std::vector<QueryOutcome> queries;
};

/// For r = 1..max_rounds: a fresh session per query, r simulated answers,
/// then results followed by their extensions form the recommended list.
inline EvalReport run_evaluation(const KnowledgeGraph& graph, const Retriever& retriever,
                                 const std::vector<EvalQuery>& dataset, const EvalOptions& options = {}) {
  EvalReport report;
  report.queries.resize(dataset.size());
  for (std::size_t r = 1; r <= options.max_rounds; ++r) {
    std::vector<std::vector<std::string>> lists, truths;
    double p = 0.0, rc = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& q = dataset[i];
      auto& outcome = report.queries[i];
      outcome.query = q.text;
      outcome.best = q.best;
      std::vector<std::string> recommended;
      try {
        auto session = start_session(q.text, graph, retriever, options.dialogue);
        auto results = simulate_user(session, q.best, r);
        for (auto api : results) recommended.push_back(graph.label(api));
        if (!results.empty())
          for (const auto& ext : extend(results, graph)) recommended.push_back(graph.label(ext.api));
      } catch (const Error& e) {
        outcome.error = e.what();
      }
      if (options.top && recommended.size() > options.top) recommended.resize(options.top);
      std::vector<std::string> truth = q.extended;
      truth.insert(truth.begin(), q.best);
      p += precision(recommended, truth);
      rc += recall(recommended, truth);
      outcome.recommended.push_back(recommended);
      lists.push_back(std::move(recommended));
      truths.push_back(std::move(truth));
    }
    double n = dataset.empty() ? 1.0 : static_cast<double>(dataset.size());
    report.by_round.push_back({mrr(lists, truths), map(lists, truths), p / n, rc / n});
  }
  return report;
}

inline nlohmann::json to_json(const EvalReport& report, const EvalOptions& options) {
  nlohmann::json rounds = nlohmann::json::array();
  for (std::size_t r = 0; r < report.by_round.size(); ++r) {
    const auto& m = report.by_round[r];
    rounds.push_back(
        {{"round", r + 1}, {"mrr", m.mrr}, {"map", m.map}, {"precision", m.precision}, {"recall", m.recall}});
  }
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& q : report.queries) {
    nlohmann::json entry = {{"query", q.query}, {"best", q.best}, {"recommended_by_round", q.recommended}};
    if (!q.error.empty()) entry["error"] = q.error;
    queries.push_back(entry);
  }
  return {{"strategy", std::string(to_string(options.dialogue.strategy))},
          {"top", options.top},
          {"rounds", rounds},
          {"queries", queries}};
}

}  // namespace apiclarify
