#pragma once

// From method-description pairs to a knowledge graph: rule-based extraction
// over annotated sentences, simple-name triple resolution, and the build
// pipeline that ties them together.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "annotate.hpp"
#include "error.hpp"
#include "fqn.hpp"
#include "kg.hpp"

namespace apiclarify {

struct MethodDescriptionPair {
  std::string fqn;
  std::string description;
};

struct ExtractionResult {
  std::vector<Entity> entities;  // record-local ids; id 0 is the Api entity
  std::vector<FunctionalRelation> relations;
  bool rejected = false;
  std::string reason;
};

/// "Has Status" for ADJ/VERB/NUM/ADV modifiers, "Has Type" otherwise.
inline FunctionalRelationKind modifier_relation(std::string_view pos) {
  if (pos == "ADJ" || pos == "VERB" || pos == "NUM" || pos == "ADV") return FunctionalRelationKind::HasStatus;
  return FunctionalRelationKind::HasType;
}

/// The object part of an event label. Without a preposition object, a
/// trailing representation noun is dropped ("path string" -> "path").
inline std::string event_object(const std::string& direct_object, bool has_preposition_object) {
  if (has_preposition_object) return direct_object;
  auto words = text::split(direct_object, ' ');
  if (words.size() >= 2 && lexicon::representation_nouns().count(words.back())) {
    words.pop_back();
    return text::join(words, " ");
  }
  return direct_object;
}

inline ExtractionResult extract(const std::string& api_fqn, const AnnotatedSentence& sentence) {
  sentence.validate();
  ExtractionResult out;
  auto reject = [&](std::string why) {
    out.entities.clear();
    out.relations.clear();
    out.rejected = true;
    out.reason = std::move(why);
    return out;
  };

  auto first_span = [&](SyntacticRole role) -> const FunctionalSpan* {
    for (const auto& s : sentence.functional_spans)
      if (s.role == role) return &s;
    return nullptr;
  };
  auto phrase = [&](const FunctionalSpan* s) { return text::normalize_label(sentence.span_text(s->start, s->end)); };

  const auto* verb = first_span(SyntacticRole::Verb);
  const auto* dobj = first_span(SyntacticRole::DirectObject);
  const auto* prep = first_span(SyntacticRole::Preposition);
  const auto* pobj = first_span(SyntacticRole::PrepositionObject);
  if (!verb) return reject("NoEvent: no verb");
  if (!dobj && !pobj) return reject("NoEvent: no direct or preposition object");

  std::uint32_t next_id = 0;
  auto add_entity = [&](EntityKind kind, std::string label) {
    EntityId id{next_id++};
    out.entities.push_back({id, kind, std::move(label)});
    return id;
  };
  EntityId api = add_entity(EntityKind::Api, text::collapse_whitespace(api_fqn));

  std::string action_label = text::verb_lemma(text::normalize_label(sentence.span_text(verb->start, verb->end)));
  std::string event_label = action_label;
  std::optional<std::string> do_label, po_label;
  if (dobj) do_label = phrase(dobj);
  if (pobj) po_label = phrase(pobj);
  if (do_label) event_label += " " + event_object(*do_label, po_label.has_value());
  if (po_label) {
    if (prep) event_label += " " + phrase(prep);
    event_label += " " + *po_label;
  }

  EntityId event = add_entity(EntityKind::Event, event_label);
  EntityId action = add_entity(EntityKind::Action, action_label);
  auto relate = [&](EntityId s, FunctionalRelationKind k, EntityId o) { out.relations.push_back({s, k, o, api}); };
  relate(api, FunctionalRelationKind::ApiHasEvent, event);
  relate(action, FunctionalRelationKind::ActHasEvent, event);

  std::optional<EntityId> do_id, po_id;
  if (do_label) {
    do_id = add_entity(EntityKind::Object, *do_label);
    relate(event, FunctionalRelationKind::HasDirectObject, *do_id);
  }
  if (po_label) {
    po_id = add_entity(EntityKind::Object, *po_label);
    relate(event, FunctionalRelationKind::HasPrepositionObject, *po_id);
  }

  for (const auto& s : sentence.functional_spans) {
    std::optional<EntityId> owner;
    if (s.role == SyntacticRole::DirectObjectModifier) owner = do_id;
    if (s.role == SyntacticRole::PrepositionObjectModifier) owner = po_id;
    if (!owner) continue;
    auto constraint = add_entity(EntityKind::ObjectConstraint, text::normalize_label(sentence.span_text(s.start, s.end)));
    relate(*owner, modifier_relation(sentence.tokens[s.end - 1].pos), constraint);
  }
  for (const auto& c : sentence.constraint_spans) {
    auto constraint = add_entity(EntityKind::EventConstraint, text::normalize_label(sentence.span_text(c.start, c.end)));
    relate(event, relation_for(c.role), constraint);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simple-name triple resolution

struct SimpleNameTriple {
  std::string left;
  SemanticRelationKind kind = SemanticRelationKind::FunctionSimilarity;
  std::string right;
};

struct ResolvedTriple {
  std::string left;  // full fqn with parameter list
  SemanticRelationKind kind;
  std::string right;
  auto operator<=>(const ResolvedTriple&) const = default;
};

struct ResolveOutcome {
  std::vector<ResolvedTriple> triples;
  std::string reason;  // why nothing resolved, when `triples` is empty
};

namespace detail {

struct SimpleName {
  std::string qualifier;  // "InputStream", "java.io.InputStream", or ""
  std::string method;
  bool zero_arg_marker = false;
};

inline std::optional<SimpleName> parse_simple_name(std::string_view raw) {
  std::string s = text::collapse_whitespace(raw);
  if (!fqn::has_param_list(s)) return std::nullopt;
  SimpleName out;
  out.zero_arg_marker = fqn::params(s).empty();
  out.method = fqn::method_name(s);
  out.qualifier = fqn::class_name(s);
  if (out.method.empty()) return std::nullopt;
  return out;
}

class FqnDictionary {
 public:
  explicit FqnDictionary(const std::vector<std::string>& fqns) {
    for (const auto& f : fqns) {
      std::string cls = fqn::class_name(f);
      methods_[cls][fqn::method_name(f)].insert(f);
      by_simple_[fqn::simple_class_name(cls)].insert(cls);
      by_method_[fqn::method_name(f)].insert(cls);
    }
  }

  /// Classes a qualifier can denote, among those declaring `method`.
  std::set<std::string> classes_for(const SimpleName& name) const {
    std::set<std::string> out;
    if (name.qualifier.empty()) {
      if (auto it = by_method_.find(name.method); it != by_method_.end()) out = it->second;
      return out;
    }
    if (methods_.count(name.qualifier)) {
      if (declares(name.qualifier, name.method)) out.insert(name.qualifier);
      return out;
    }
    if (auto it = by_simple_.find(name.qualifier); it != by_simple_.end())
      for (const auto& cls : it->second)
        if (declares(cls, name.method)) out.insert(cls);
    return out;
  }

  bool declares(const std::string& cls, const std::string& method) const {
    auto it = methods_.find(cls);
    return it != methods_.end() && it->second.count(method) > 0;
  }

  /// Zero-argument overload for a "()" marker when it exists, otherwise the
  /// lexicographically first overload.
  std::string overload(const std::string& cls, const SimpleName& name) const {
    const auto& variants = methods_.at(cls).at(name.method);
    if (name.zero_arg_marker)
      for (const auto& v : variants)
        if (fqn::params(v).empty()) return v;
    return *variants.begin();
  }

 private:
  std::map<std::string, std::map<std::string, std::set<std::string>>> methods_;
  std::map<std::string, std::set<std::string>> by_simple_;
  std::map<std::string, std::set<std::string>> by_method_;
};

inline ResolveOutcome resolve_with(const SimpleNameTriple& triple, const FqnDictionary& dict) {
  ResolveOutcome out;
  auto left = parse_simple_name(triple.left);
  auto right = parse_simple_name(triple.right);
  if (!left || !right) {
    out.reason = "name without parentheses marker";
    return out;
  }
  auto lc = dict.classes_for(*left);
  auto rc = dict.classes_for(*right);
  bool lq = !left->qualifier.empty();
  bool rq = !right->qualifier.empty();
  auto emit = [&](const std::string& l_cls, const std::string& r_cls) {
    out.triples.push_back({dict.overload(l_cls, *left), triple.kind, dict.overload(r_cls, *right)});
  };
  if (lc.empty() || rc.empty()) {
    out.reason = "method not in dictionary";
    return out;
  }
  if (lq && rq) {
    if (lc.size() != 1 || rc.size() != 1) {
      out.reason = "class name is ambiguous across packages";
      return out;
    }
    emit(*lc.begin(), *rc.begin());
  } else if (!lq && !rq) {
    for (const auto& cls : lc)
      if (rc.count(cls)) emit(cls, cls);
    if (out.triples.empty()) out.reason = "no class declares both methods";
  } else {
    const auto& qualified = lq ? lc : rc;
    if (qualified.size() != 1) {
      out.reason = "class name is ambiguous across packages";
      return out;
    }
    const std::string& cls = *qualified.begin();
    if (!dict.declares(cls, lq ? right->method : left->method)) {
      out.reason = "unqualified method not declared by the qualified class";
      return out;
    }
    emit(cls, cls);
  }
  std::erase_if(out.triples, [](const ResolvedTriple& t) { return t.left == t.right; });
  if (out.triples.empty() && out.reason.empty()) out.reason = "triple resolves to a self relation";
  return out;
}

}  // namespace detail

inline ResolveOutcome resolve_fqn(const SimpleNameTriple& triple, const std::vector<std::string>& dictionary) {
  return detail::resolve_with(triple, detail::FqnDictionary(dictionary));
}

// ---------------------------------------------------------------------------
// Build pipeline

struct BuildStats {
  std::size_t api_entities = 0;
  std::size_t other_entities = 0;
  std::size_t functional_relations = 0;
  std::size_t semantic_relations = 0;
  std::size_t rejected_pairs = 0;
  std::size_t dropped_triples = 0;
  std::vector<std::string> log;  // one line per rejected pair or dropped triple
};

struct BuildResult {
  KnowledgeGraph graph;
  BuildStats stats;
};

using AnnotationMap = std::map<std::string, AnnotatedSentence>;

inline BuildResult build_graph(const std::vector<MethodDescriptionPair>& pairs, const AnnotationMap& annotations,
                               const std::vector<SimpleNameTriple>& triples) {
  BuildResult out;
  auto& graph = out.graph;
  auto& stats = out.stats;
  auto reject = [&](const std::string& fqn_text, const std::string& why) {
    ++stats.rejected_pairs;
    stats.log.push_back("rejected " + fqn_text + ": " + why);
  };

  for (const auto& pair : pairs) {
    std::string fqn_text = text::collapse_whitespace(pair.fqn);
    try {
      if (!fqn::has_param_list(fqn_text)) {
        reject(fqn_text, "fqn lacks a parameter list");
        continue;
      }
      std::string sentence = normalize_description(pair.description);
      if (sentence.empty()) {
        reject(fqn_text, "empty description");
        continue;
      }
      auto ann = annotations.find(fqn_text);
      AnnotatedSentence annotated = ann != annotations.end() ? ann->second : annotate(sentence);
      auto result = extract(fqn_text, annotated);
      if (result.rejected) {
        reject(fqn_text, result.reason);
        continue;
      }
      graph.add_api({fqn_text, pair.description, result.entities, result.relations});
    } catch (const Error& e) {
      reject(fqn_text, e.what());
    }
  }

  std::vector<std::string> dictionary;
  for (auto api : graph.apis()) dictionary.push_back(graph.label(api));
  detail::FqnDictionary dict(dictionary);
  for (const auto& triple : triples) {
    auto resolved = detail::resolve_with(triple, dict);
    if (resolved.triples.empty()) {
      ++stats.dropped_triples;
      stats.log.push_back("dropped " + triple.left + " " + std::string(to_string(triple.kind)) + " " + triple.right +
                          ": " + resolved.reason);
      continue;
    }
    for (const auto& t : resolved.triples)
      graph.add_semantic_relation({*graph.find_api(t.left), t.kind, *graph.find_api(t.right)});
  }

  stats.api_entities = graph.api_count();
  stats.other_entities = graph.entity_count() - graph.api_count();
  stats.functional_relations = graph.functional_relation_count();
  stats.semantic_relations = graph.semantic_relations().size();
  return out;
}

// ---------------------------------------------------------------------------
// Line-delimited JSON inputs

namespace detail {

template <typename F>
void for_each_json_line(const std::string& path, F&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::collapse_whitespace(line).empty()) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::FormatError, path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::FormatError, path + ":" + std::to_string(line_no) + ": " + e.detail());
    }
  }
}

}  // namespace detail

inline std::vector<MethodDescriptionPair> read_pairs(const std::string& path) {
  std::vector<MethodDescriptionPair> out;
  detail::for_each_json_line(path, [&](const nlohmann::json& j) {
    out.push_back({j.at("fqn").get<std::string>(), j.at("description").get<std::string>()});
  });
  return out;
}

inline AnnotatedSentence annotation_from_json(const nlohmann::json& j) {
  AnnotatedSentence s;
  for (const auto& t : j.at("tokens")) s.tokens.push_back({t.at("surface").get<std::string>(), t.at("pos").get<std::string>()});
  for (const auto& f : j.at("functional_spans")) {
    auto role = parse_syntactic_role(f.at("role").get<std::string>());
    if (!role) throw Error(ErrorCode::FormatError, "unknown syntactic role " + f.at("role").get<std::string>());
    s.functional_spans.push_back({*role, f.at("start").get<std::size_t>(), f.at("end").get<std::size_t>()});
  }
  for (const auto& c : j.value("constraint_spans", nlohmann::json::array())) {
    // Roles outside the nine event constraints are not used.
    if (auto role = parse_constraint_role(c.at("role").get<std::string>()))
      s.constraint_spans.push_back({*role, c.at("start").get<std::size_t>(), c.at("end").get<std::size_t>()});
  }
  s.validate();
  return s;
}

inline AnnotationMap read_annotations(const std::string& path) {
  AnnotationMap out;
  detail::for_each_json_line(path, [&](const nlohmann::json& j) {
    out[text::collapse_whitespace(j.at("fqn").get<std::string>())] = annotation_from_json(j);
  });
  return out;
}

inline std::vector<SimpleNameTriple> read_triples(const std::string& path) {
  std::vector<SimpleNameTriple> out;
  detail::for_each_json_line(path, [&](const nlohmann::json& j) {
    auto kind = parse_semantic_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::FormatError, "unknown relation kind " + j.at("kind").get<std::string>());
    out.push_back({j.at("left").get<std::string>(), *kind, j.at("right").get<std::string>()});
  });
  return out;
}

}  // namespace apiclarify
