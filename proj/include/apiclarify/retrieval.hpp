#pragma once

// Candidate retrieval and query-subgraph construction.
//
// The lexical retriever scores APIs by tf-idf cosine over stemmed terms from
// the normalized description and the identifier words of the fqn. Any other
// ranking source (for example a fixed candidate file) can stand in through
// the Retriever interface.

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "annotate.hpp"
#include "error.hpp"
#include "fqn.hpp"
#include "kg.hpp"
#include "text.hpp"

namespace apiclarify {

struct ScoredApi {
  EntityId api;
  double score = 0.0;
  bool expanded = false;  // added through a shared event, not retrieved
};

inline const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a",    "an",   "the",  "of",   "to",   "in",   "on",  "for",  "and", "or",  "is",  "are",  "be",
      "this", "that", "it",   "its",  "with", "by",   "as",  "at",   "from", "how", "do",  "does", "i",
      "my",   "me",   "we",   "you",  "can",  "which", "method", "java", "what", "when", "if", "into", "using"};
  return words;
}

/// Lowercased, stemmed content terms. Identifier-like words are split on
/// camelCase and dots first.
inline std::vector<std::string> index_terms(std::string_view input) {
  std::vector<std::string> out;
  for (const auto& word : text::identifier_words(input)) {
    std::string w = text::to_lower(word);
    if (w.size() < 2 || stopwords().count(w)) continue;
    out.push_back(text::stem(w));
  }
  return out;
}

class Retriever {
 public:
  virtual ~Retriever() = default;
  /// At most `n` APIs, best first.
  virtual std::vector<ScoredApi> search(std::string_view query, std::size_t n) const = 0;
};

class LexicalIndex : public Retriever {
 public:
  explicit LexicalIndex(const KnowledgeGraph& graph) : graph_(&graph) {
    for (auto api : graph.apis()) {
      const std::string& name = graph.label(api);
      std::string doc = normalize_description(graph.description(api)) + " " + fqn::simple_class_name(fqn::class_name(name)) +
                        " " + fqn::method_name(name);
      std::map<std::string, double> tf;
      for (const auto& t : index_terms(doc)) tf[t] += 1.0;
      for (const auto& [t, c] : tf) df_[t] += 1;
      docs_.push_back({api, std::move(tf), 0.0});
    }
    for (auto& d : docs_) {
      double norm = 0.0;
      for (auto& [t, w] : d.weights) {
        w *= idf(t);
        norm += w * w;
      }
      d.norm = std::sqrt(norm);
    }
  }

  bool empty() const { return docs_.empty(); }
  std::size_t size() const { return docs_.size(); }

  /// Smoothed inverse document frequency.
  double idf(const std::string& term) const {
    auto it = df_.find(term);
    double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((1.0 + static_cast<double>(docs_.size())) / (1.0 + df)) + 1.0;
  }

  std::vector<ScoredApi> search(std::string_view query, std::size_t n) const override {
    if (docs_.empty()) throw Error(ErrorCode::EmptyIndex, "retrieval index holds no APIs");
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
    std::map<std::string, double> q;
    for (const auto& t : index_terms(query)) q[t] += 1.0;
    double q_norm = 0.0;
    for (auto& [t, w] : q) {
      w *= idf(t);
      q_norm += w * w;
    }
    q_norm = std::sqrt(q_norm);

    std::set<EntityId> named = named_apis(query);
    std::vector<ScoredApi> scored;
    for (const auto& d : docs_) {
      double dot = 0.0;
      for (const auto& [t, w] : q)
        if (auto it = d.weights.find(t); it != d.weights.end()) dot += w * it->second;
      double score = (q_norm > 0 && d.norm > 0) ? dot / (q_norm * d.norm) : 0.0;
      // A method named in the query outranks every lexical match.
      if (named.count(d.api)) score += 1.0;
      if (score > 0.0) scored.push_back({d.api, score, false});
    }
    std::sort(scored.begin(), scored.end(), [&](const ScoredApi& a, const ScoredApi& b) {
      if (a.score != b.score) return a.score > b.score;
      return graph_->label(a.api) < graph_->label(b.api);
    });
    if (scored.size() > n) scored.resize(n);
    return scored;
  }

 private:
  struct Doc {
    EntityId api;
    std::map<std::string, double> weights;
    double norm;
  };

  // Dotted words such as "File.getAbsolutePath" or "java.io.File.getPath()"
  // select every parameter-list variant of the named method.
  std::set<EntityId> named_apis(std::string_view query) const {
    std::set<EntityId> out;
    for (auto word : text::split(text::collapse_whitespace(query), ' ')) {
      while (!word.empty() && std::string_view(",;:?!").find(word.back()) != std::string_view::npos) word.pop_back();
      if (word.find('.') == std::string::npos) continue;
      std::string bare = fqn::strip_params(word);
      for (auto api : graph_->find_api_variants(bare)) out.insert(api);
      for (auto api : graph_->apis()) {
        std::string name = fqn::strip_params(graph_->label(api));
        if (text::ends_with(name, "." + bare)) out.insert(api);
      }
    }
    return out;
  }

  const KnowledgeGraph* graph_;
  std::vector<Doc> docs_;
  std::map<std::string, std::size_t> df_;
};

/// Fixed ranked list (one fqn per line, best first). Ignores the query.
class CandidateFileRetriever : public Retriever {
 public:
  CandidateFileRetriever(const KnowledgeGraph& graph, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path);
    std::string line;
    std::set<EntityId> seen;
    while (std::getline(in, line)) {
      line = text::collapse_whitespace(line);
      if (line.empty()) continue;
      std::vector<EntityId> hits;
      if (auto exact = graph.find_api(line)) hits.push_back(*exact);
      else hits = graph.find_api_variants(line);
      for (auto api : hits)
        if (seen.insert(api).second) ranked_.push_back(api);
    }
  }

  std::vector<ScoredApi> search(std::string_view, std::size_t n) const override {
    if (ranked_.empty()) throw Error(ErrorCode::EmptyIndex, "candidate file lists no known API");
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
    std::vector<ScoredApi> out;
    for (std::size_t i = 0; i < ranked_.size() && i < n; ++i)
      out.push_back({ranked_[i], 1.0 / static_cast<double>(i + 1), false});
    return out;
  }

 private:
  std::vector<EntityId> ranked_;
};

inline std::vector<ScoredApi> search_candidates(std::string_view query, std::size_t n, const Retriever& index) {
  return index.search(query, n);
}

/// Appends every API that shares an event with a candidate. Added APIs come
/// after the candidates in fqn order, scored with the best score of the
/// candidates they share an event with.
inline std::vector<ScoredApi> expand_by_shared_events(const std::vector<ScoredApi>& candidates,
                                                      const KnowledgeGraph& graph) {
  std::vector<ScoredApi> out = candidates;
  std::set<EntityId> present;
  for (const auto& c : candidates) present.insert(c.api);
  std::map<std::string, ScoredApi> added;
  for (const auto& c : candidates) {
    for (const auto& rel : graph.function_property(c.api)) {
      if (rel.kind != FunctionalRelationKind::ApiHasEvent) continue;
      for (auto other : graph.apis_with_event(rel.object)) {
        if (present.count(other)) continue;
        auto [it, inserted] = added.try_emplace(graph.label(other), ScoredApi{other, c.score, true});
        if (!inserted) it->second.score = std::max(it->second.score, c.score);
      }
    }
  }
  for (const auto& [name, s] : added) out.push_back(s);
  return out;
}

struct Subgraph {
  std::vector<EntityId> api_ids;  // in candidate order
  std::vector<FunctionalRelation> relations;
};

inline Subgraph build_subgraph(const std::vector<EntityId>& candidates, const KnowledgeGraph& graph) {
  if (candidates.empty()) throw Error(ErrorCode::EmptySubgraph, "no candidate APIs");
  Subgraph out;
  std::set<EntityId> seen;
  for (auto api : candidates) {
    if (!graph.is_api(api)) throw Error(ErrorCode::UnknownEndpoint, "candidate is not a stored API");
    if (!seen.insert(api).second) continue;
    out.api_ids.push_back(api);
    for (const auto& rel : graph.function_property(api))
      if (rel.kind != FunctionalRelationKind::ApiHasEvent) out.relations.push_back(rel);
  }
  return out;
}

}  // namespace apiclarify
