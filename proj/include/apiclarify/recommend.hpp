#pragma once

// Result extension through semantic relations, and keyword explanations
// drawn from the answered decision path.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dialogue.hpp"
#include "kg.hpp"

namespace apiclarify {

/// Ranking position of a relation kind among extensions.
constexpr int extension_priority(SemanticRelationKind kind) {
  switch (kind) {
    case SemanticRelationKind::FunctionSimilarity: return 0;
    case SemanticRelationKind::FunctionReplace: return 1;
    case SemanticRelationKind::FunctionCollaboration: return 2;
    case SemanticRelationKind::FunctionOpposite: return 3;
    case SemanticRelationKind::LogicConstraint: return 4;
    case SemanticRelationKind::BehaviorDifference: return 5;
    case SemanticRelationKind::EfficiencyComparison: return 6;
  }
  return 7;
}

struct Extension {
  EntityId api;
  SemanticRelationKind kind;
  EntityId source;  // the result API it is related to
};

/// One-hop neighbors of the results, minus the results themselves, each API
/// once. Ordered by relation priority, then fqn.
inline std::vector<Extension> extend(const std::vector<EntityId>& results, const KnowledgeGraph& graph) {
  std::set<EntityId> in_results(results.begin(), results.end());
  std::vector<std::tuple<int, std::string, std::size_t, Extension>> found;
  for (std::size_t rank = 0; rank < results.size(); ++rank)
    for (const auto& [other, kind] : graph.semantic_neighbors(results[rank]))
      if (!in_results.count(other))
        found.emplace_back(extension_priority(kind), graph.label(other), rank, Extension{other, kind, results[rank]});
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
  });
  std::vector<Extension> out;
  std::set<EntityId> emitted;
  for (const auto& entry : found) {
    const auto& ext = std::get<3>(entry);
    if (emitted.insert(ext.api).second) out.push_back(ext);
  }
  return out;
}

enum class KeywordSource { DecisionPath, RelationLabel };

constexpr std::string_view to_string(KeywordSource s) {
  return s == KeywordSource::DecisionPath ? "DecisionPath" : "RelationLabel";
}

struct Keyword {
  std::string text;
  KeywordSource source;
  bool operator==(const Keyword&) const = default;
};

struct Explanation {
  EntityId api;
  std::string description;
  std::vector<Keyword> keywords;
  std::optional<SemanticRelationKind> relation;
  std::optional<EntityId> related_to;
};

namespace detail {

/// The action verb as written in the description, or the action label when
/// no description word has that lemma.
inline std::string action_surface(const std::string& description, const std::string& action) {
  for (const auto& word : tokenize(description)) {
    std::string w = text::to_lower(word);
    if (w == action || text::verb_lemma(w) == action) return w;
  }
  return action;
}

/// Action label of `api`'s ActHasEvent relation into the event named `event`.
inline std::optional<std::string> action_for_event(EntityId api, const std::string& event, const KnowledgeGraph& graph) {
  for (const auto& rel : graph.function_property(api))
    if (rel.kind == FunctionalRelationKind::ActHasEvent && graph.label(rel.object) == event)
      return graph.label(rel.subject);
  return std::nullopt;
}

inline std::vector<Keyword> path_keywords(EntityId path_api, const DialogueSession& s, const KnowledgeGraph& graph) {
  std::vector<Keyword> out;
  auto add = [&](const std::string& t) {
    Keyword k{t, KeywordSource::DecisionPath};
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  };
  for (const auto& entry : s.transcript) {
    const auto& node = s.tree.node(entry.node);
    const auto& edge = node.edges[entry.edge];
    if (!edge.value) continue;
    const auto& col = s.tree.table().columns()[node.column];
    if (col.kind == FunctionalRelationKind::ActHasEvent) {
      if (auto action = action_for_event(path_api, *edge.value, graph))
        add(action_surface(graph.description(path_api), *action));
      else
        add(*edge.value);
    } else if (is_object_constraint(col.kind)) {
      add(*edge.value);
      add(col.subject);
    } else {
      add(*edge.value);
    }
  }
  return out;
}

}  // namespace detail

/// Explanation for a result API (no relation) or an extended API (relation
/// and source given).
inline Explanation explain(EntityId api, const DialogueSession& session, const KnowledgeGraph& graph,
                           std::optional<SemanticRelationKind> relation = std::nullopt,
                           std::optional<EntityId> source = std::nullopt) {
  bool is_result = std::find(session.results.begin(), session.results.end(), api) != session.results.end();
  Explanation out;
  out.api = api;
  if (relation) {
    if (!source) throw Error(ErrorCode::InvalidArgument, "extended API needs its source result");
    bool listed = false;
    for (const auto& e : extend(session.results, graph)) listed |= e.api == api && e.source == *source;
    if (!listed) throw Error(ErrorCode::UnknownApi, graph.is_api(api) ? graph.label(api) : "unknown id");
    out.relation = relation;
    out.related_to = source;
    out.description = graph.description(api);
    out.keywords = detail::path_keywords(*source, session, graph);
    out.keywords.push_back({std::string(display_name(*relation)), KeywordSource::RelationLabel});
    return out;
  }
  if (!is_result) throw Error(ErrorCode::UnknownApi, graph.is_api(api) ? graph.label(api) : "unknown id");
  out.description = graph.description(api);
  out.keywords = detail::path_keywords(api, session, graph);
  return out;
}

struct Recommendation {
  std::string query;
  std::size_t rounds = 0;
  std::vector<Explanation> results;
  std::vector<Explanation> extensions;
};

/// Extends and explains the results of a finished session.
inline Recommendation recommend(const DialogueSession& session, const KnowledgeGraph& graph) {
  if (session.state != SessionState::Finished)
    throw Error(ErrorCode::InvalidArgument, "session has not finished");
  Recommendation rec;
  rec.query = session.query;
  rec.rounds = session.transcript.size();
  for (auto api : session.results) rec.results.push_back(explain(api, session, graph));
  for (const auto& ext : extend(session.results, graph))
    rec.extensions.push_back(explain(ext.api, session, graph, ext.kind, ext.source));
  return rec;
}

inline nlohmann::json keywords_json(const std::vector<Keyword>& keywords) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& k : keywords) out.push_back({{"text", k.text}, {"source", std::string(to_string(k.source))}});
  return out;
}

inline nlohmann::json to_json(const Recommendation& rec, const KnowledgeGraph& graph) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& e : rec.results)
    results.push_back(
        {{"fqn", graph.label(e.api)}, {"description", e.description}, {"keywords", keywords_json(e.keywords)}});
  nlohmann::json extensions = nlohmann::json::array();
  for (const auto& e : rec.extensions)
    extensions.push_back({{"fqn", graph.label(e.api)},
                          {"relation", std::string(display_name(*e.relation))},
                          {"description", e.description},
                          {"keywords", keywords_json(e.keywords)},
                          {"related_to", graph.label(*e.related_to)}});
  return {{"query", rec.query}, {"rounds", rec.rounds}, {"results", results}, {"extensions", extensions}};
}

}  // namespace apiclarify
