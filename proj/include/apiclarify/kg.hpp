#pragma once

// Typed storage for the API behavior knowledge graph: API entities, the
// entities extracted from their descriptions, per-API FUNCTION properties
// holding the functional relations, and cross-API semantic relations.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fqn.hpp"
#include "text.hpp"

namespace apiclarify {

enum class EntityKind { Api, Event, Action, Object, ObjectConstraint, EventConstraint };

inline constexpr std::array<EntityKind, 6> kAllEntityKinds = {
    EntityKind::Api,    EntityKind::Event,           EntityKind::Action,
    EntityKind::Object, EntityKind::ObjectConstraint, EntityKind::EventConstraint};

constexpr std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Api: return "Api";
    case EntityKind::Event: return "Event";
    case EntityKind::Action: return "Action";
    case EntityKind::Object: return "Object";
    case EntityKind::ObjectConstraint: return "ObjectConstraint";
    case EntityKind::EventConstraint: return "EventConstraint";
  }
  return "";
}

inline std::optional<EntityKind> parse_entity_kind(std::string_view name) {
  for (auto kind : kAllEntityKinds)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

struct EntityId {
  std::uint32_t value = 0;
  friend auto operator<=>(const EntityId&, const EntityId&) = default;
};

struct Entity {
  EntityId id;
  EntityKind kind = EntityKind::Api;
  std::string label;
};

enum class FunctionalRelationKind {
  ApiHasEvent,
  ActHasEvent,
  HasDirectObject,
  HasPrepositionObject,
  HasStatus,
  HasType,
  HasLocation,
  HasDirection,
  HasManner,
  HasExtent,
  HasTemporal,
  HasGoal,
  HasPurpose,
  HasResult,
  HasCondition,
};

inline constexpr std::array<FunctionalRelationKind, 15> kAllFunctionalRelationKinds = {
    FunctionalRelationKind::ApiHasEvent,  FunctionalRelationKind::ActHasEvent,
    FunctionalRelationKind::HasDirectObject, FunctionalRelationKind::HasPrepositionObject,
    FunctionalRelationKind::HasStatus,    FunctionalRelationKind::HasType,
    FunctionalRelationKind::HasLocation,  FunctionalRelationKind::HasDirection,
    FunctionalRelationKind::HasManner,    FunctionalRelationKind::HasExtent,
    FunctionalRelationKind::HasTemporal,  FunctionalRelationKind::HasGoal,
    FunctionalRelationKind::HasPurpose,   FunctionalRelationKind::HasResult,
    FunctionalRelationKind::HasCondition};

constexpr std::string_view to_string(FunctionalRelationKind kind) {
  switch (kind) {
    case FunctionalRelationKind::ApiHasEvent: return "ApiHasEvent";
    case FunctionalRelationKind::ActHasEvent: return "ActHasEvent";
    case FunctionalRelationKind::HasDirectObject: return "HasDirectObject";
    case FunctionalRelationKind::HasPrepositionObject: return "HasPrepositionObject";
    case FunctionalRelationKind::HasStatus: return "HasStatus";
    case FunctionalRelationKind::HasType: return "HasType";
    case FunctionalRelationKind::HasLocation: return "HasLocation";
    case FunctionalRelationKind::HasDirection: return "HasDirection";
    case FunctionalRelationKind::HasManner: return "HasManner";
    case FunctionalRelationKind::HasExtent: return "HasExtent";
    case FunctionalRelationKind::HasTemporal: return "HasTemporal";
    case FunctionalRelationKind::HasGoal: return "HasGoal";
    case FunctionalRelationKind::HasPurpose: return "HasPurpose";
    case FunctionalRelationKind::HasResult: return "HasResult";
    case FunctionalRelationKind::HasCondition: return "HasCondition";
  }
  return "";
}

/// Human-readable relation name used in aspect column names ("Has Status").
/// ActHasEvent columns are always named "action#Has Event".
constexpr std::string_view display_name(FunctionalRelationKind kind) {
  switch (kind) {
    case FunctionalRelationKind::ApiHasEvent: return "API Has Event";
    case FunctionalRelationKind::ActHasEvent: return "Has Event";
    case FunctionalRelationKind::HasDirectObject: return "Has Direct Object";
    case FunctionalRelationKind::HasPrepositionObject: return "Has Preposition Object";
    case FunctionalRelationKind::HasStatus: return "Has Status";
    case FunctionalRelationKind::HasType: return "Has Type";
    case FunctionalRelationKind::HasLocation: return "Has Location";
    case FunctionalRelationKind::HasDirection: return "Has Direction";
    case FunctionalRelationKind::HasManner: return "Has Manner";
    case FunctionalRelationKind::HasExtent: return "Has Extent";
    case FunctionalRelationKind::HasTemporal: return "Has Temporal";
    case FunctionalRelationKind::HasGoal: return "Has Goal";
    case FunctionalRelationKind::HasPurpose: return "Has Purpose";
    case FunctionalRelationKind::HasResult: return "Has Result";
    case FunctionalRelationKind::HasCondition: return "Has Condition";
  }
  return "";
}

inline std::optional<FunctionalRelationKind> parse_functional_kind(std::string_view name) {
  for (auto kind : kAllFunctionalRelationKinds)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

constexpr bool is_object_constraint(FunctionalRelationKind kind) {
  return kind == FunctionalRelationKind::HasStatus || kind == FunctionalRelationKind::HasType;
}

constexpr bool is_event_constraint(FunctionalRelationKind kind) {
  return kind >= FunctionalRelationKind::HasLocation;
}

/// Expected (subject kind, object kind) for each functional relation.
constexpr std::pair<EntityKind, EntityKind> endpoint_kinds(FunctionalRelationKind kind) {
  switch (kind) {
    case FunctionalRelationKind::ApiHasEvent: return {EntityKind::Api, EntityKind::Event};
    case FunctionalRelationKind::ActHasEvent: return {EntityKind::Action, EntityKind::Event};
    case FunctionalRelationKind::HasDirectObject:
    case FunctionalRelationKind::HasPrepositionObject: return {EntityKind::Event, EntityKind::Object};
    case FunctionalRelationKind::HasStatus:
    case FunctionalRelationKind::HasType: return {EntityKind::Object, EntityKind::ObjectConstraint};
    default: return {EntityKind::Event, EntityKind::EventConstraint};
  }
}

struct FunctionalRelation {
  EntityId subject;
  FunctionalRelationKind kind = FunctionalRelationKind::ApiHasEvent;
  EntityId object;
  EntityId source_api;
  friend bool operator==(const FunctionalRelation&, const FunctionalRelation&) = default;
};

enum class SemanticRelationKind {
  FunctionSimilarity,
  FunctionOpposite,
  FunctionReplace,
  FunctionCollaboration,
  LogicConstraint,
  BehaviorDifference,
  EfficiencyComparison,
};

inline constexpr std::array<SemanticRelationKind, 7> kAllSemanticRelationKinds = {
    SemanticRelationKind::FunctionSimilarity, SemanticRelationKind::FunctionOpposite,
    SemanticRelationKind::FunctionReplace,    SemanticRelationKind::FunctionCollaboration,
    SemanticRelationKind::LogicConstraint,    SemanticRelationKind::BehaviorDifference,
    SemanticRelationKind::EfficiencyComparison};

constexpr std::string_view to_string(SemanticRelationKind kind) {
  switch (kind) {
    case SemanticRelationKind::FunctionSimilarity: return "FunctionSimilarity";
    case SemanticRelationKind::FunctionOpposite: return "FunctionOpposite";
    case SemanticRelationKind::FunctionReplace: return "FunctionReplace";
    case SemanticRelationKind::FunctionCollaboration: return "FunctionCollaboration";
    case SemanticRelationKind::LogicConstraint: return "LogicConstraint";
    case SemanticRelationKind::BehaviorDifference: return "BehaviorDifference";
    case SemanticRelationKind::EfficiencyComparison: return "EfficiencyComparison";
  }
  return "";
}

constexpr std::string_view display_name(SemanticRelationKind kind) {
  switch (kind) {
    case SemanticRelationKind::FunctionSimilarity: return "Function Similarity";
    case SemanticRelationKind::FunctionOpposite: return "Function Opposite";
    case SemanticRelationKind::FunctionReplace: return "Function Replace";
    case SemanticRelationKind::FunctionCollaboration: return "Function Collaboration";
    case SemanticRelationKind::LogicConstraint: return "Logic Constraint";
    case SemanticRelationKind::BehaviorDifference: return "Behavior Difference";
    case SemanticRelationKind::EfficiencyComparison: return "Efficiency Comparison";
  }
  return "";
}

/// Accepts both "FunctionSimilarity" and "Function Similarity".
inline std::optional<SemanticRelationKind> parse_semantic_kind(std::string_view name) {
  for (auto kind : kAllSemanticRelationKinds)
    if (to_string(kind) == name || display_name(kind) == name) return kind;
  return std::nullopt;
}

struct SemanticRelation {
  EntityId left;
  SemanticRelationKind kind = SemanticRelationKind::FunctionSimilarity;
  EntityId right;
  friend auto operator<=>(const SemanticRelation&, const SemanticRelation&) = default;
};

/// Input to KnowledgeGraph::add_api. Entity ids inside a record are local to
/// the record; relations may also point at ids already stored in the graph.
/// The Api entity itself may be listed (its label must equal `fqn`).
struct ApiRecord {
  std::string fqn;
  std::string description;
  std::vector<Entity> entities;
  std::vector<FunctionalRelation> relations;
};

class KnowledgeGraph;
void store_graph(const KnowledgeGraph& graph, const std::string& directory);
KnowledgeGraph load_graph(const std::string& directory);

class KnowledgeGraph {
 public:
  EntityId add_api(const ApiRecord& record);
  bool add_semantic_relation(const SemanticRelation& triple);

  /// Neighbors are looked up undirected; order is relation kind, then label.
  std::vector<std::pair<EntityId, SemanticRelationKind>> semantic_neighbors(
      EntityId api, const std::optional<std::set<SemanticRelationKind>>& kinds = std::nullopt) const;

  const Entity& entity(EntityId id) const {
    if (id.value >= entities_.size()) throw Error(ErrorCode::UnknownEndpoint, "entity " + std::to_string(id.value));
    return entities_[id.value];
  }
  bool contains(EntityId id) const { return id.value < entities_.size(); }
  bool is_api(EntityId id) const { return contains(id) && entities_[id.value].kind == EntityKind::Api; }

  std::optional<EntityId> find_entity(EntityKind kind, std::string_view label) const {
    auto it = by_label_.find({kind, std::string(label)});
    if (it == by_label_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<EntityId> find_api(std::string_view fqn_text) const {
    return find_entity(EntityKind::Api, text::collapse_whitespace(fqn_text));
  }
  /// All parameter-list variants of a method ("a.b.C.m" -> every "a.b.C.m(...)").
  std::vector<EntityId> find_api_variants(std::string_view name) const {
    std::vector<EntityId> out;
    auto it = by_method_.find(fqn::strip_params(name));
    if (it != by_method_.end()) out = it->second;
    return out;
  }

  const std::vector<FunctionalRelation>& function_property(EntityId api) const {
    auto it = function_property_.find(api);
    if (it == function_property_.end()) throw Error(ErrorCode::UnknownEndpoint, "no API with id " + std::to_string(api.value));
    return it->second;
  }
  const std::string& description(EntityId api) const {
    auto it = descriptions_.find(api);
    if (it == descriptions_.end()) throw Error(ErrorCode::UnknownEndpoint, "no API with id " + std::to_string(api.value));
    return it->second;
  }
  const std::string& label(EntityId id) const { return entity(id).label; }

  /// Api entity ids ordered by fqn.
  std::vector<EntityId> apis() const {
    std::vector<EntityId> out;
    for (const auto& [key, id] : by_label_)
      if (key.first == EntityKind::Api) out.push_back(id);
    return out;
  }
  /// APIs whose FUNCTION property contains ApiHasEvent -> event.
  std::vector<EntityId> apis_with_event(EntityId event) const {
    auto it = event_apis_.find(event);
    return it == event_apis_.end() ? std::vector<EntityId>{} : std::vector<EntityId>(it->second.begin(), it->second.end());
  }

  const std::vector<Entity>& entities() const { return entities_; }
  const std::set<SemanticRelation>& semantic_relations() const { return semantic_; }
  std::size_t api_count() const { return function_property_.size(); }
  std::size_t entity_count() const { return entities_.size(); }
  std::size_t functional_relation_count() const {
    std::size_t n = 0;
    for (const auto& [api, rels] : function_property_) n += rels.size();
    return n;
  }
  bool empty() const { return entities_.empty(); }

  /// Full scan of the referential-integrity and FUNCTION-property invariants.
  /// Returns a description of the first violation, or nullopt.
  std::optional<std::string> check_invariants() const;

 private:
  friend KnowledgeGraph load_graph(const std::string& directory);

  EntityId intern(EntityKind kind, const std::string& label);
  void check_relation(const FunctionalRelation& rel) const;

  std::vector<Entity> entities_;
  std::map<std::pair<EntityKind, std::string>, EntityId> by_label_;
  std::map<std::string, std::vector<EntityId>> by_method_;
  std::map<EntityId, std::vector<FunctionalRelation>> function_property_;
  std::map<EntityId, std::string> descriptions_;
  std::map<EntityId, std::set<EntityId>> event_apis_;
  std::set<SemanticRelation> semantic_;
};

inline EntityId KnowledgeGraph::intern(EntityKind kind, const std::string& label) {
  auto key = std::make_pair(kind, label);
  if (auto it = by_label_.find(key); it != by_label_.end()) return it->second;
  EntityId id{static_cast<std::uint32_t>(entities_.size())};
  entities_.push_back({id, kind, label});
  by_label_.emplace(std::move(key), id);
  if (kind == EntityKind::Api) by_method_[fqn::strip_params(label)].push_back(id);
  return id;
}

inline void KnowledgeGraph::check_relation(const FunctionalRelation& rel) const {
  auto [subject_kind, object_kind] = endpoint_kinds(rel.kind);
  if (!contains(rel.subject) || !contains(rel.object) || !is_api(rel.source_api))
    throw Error(ErrorCode::UnknownEndpoint, std::string("dangling endpoint in ") + std::string(to_string(rel.kind)));
  if (entity(rel.subject).kind != subject_kind || entity(rel.object).kind != object_kind)
    throw Error(ErrorCode::InvalidArgument,
                std::string("endpoint kinds do not fit ") + std::string(to_string(rel.kind)));
}

inline EntityId KnowledgeGraph::add_api(const ApiRecord& record) {
  std::string fqn_text = text::collapse_whitespace(record.fqn);
  if (fqn_text.empty() || !fqn::has_param_list(fqn_text))
    throw Error(ErrorCode::InvalidArgument, "API label needs a method name and parameter list: '" + record.fqn + "'");
  bool has_event = false;
  for (const auto& rel : record.relations) has_event |= rel.kind == FunctionalRelationKind::ApiHasEvent;
  if (!has_event) throw Error(ErrorCode::RejectedNoEvent, fqn_text);

  if (auto existing = find_api(fqn_text)) {
    if (descriptions_.at(*existing) == record.description) return *existing;
    throw Error(ErrorCode::DuplicateConflict, fqn_text + " already stored with a different description");
  }

  // Resolve record-local ids before touching the graph so a bad record
  // leaves no trace.
  std::map<std::uint32_t, const Entity*> local;
  for (const auto& e : record.entities) {
    if (text::collapse_whitespace(e.label).empty()) throw Error(ErrorCode::InvalidArgument, "empty entity label");
    if (e.kind == EntityKind::Api && text::collapse_whitespace(e.label) != fqn_text)
      throw Error(ErrorCode::InvalidArgument, "record lists a foreign Api entity: " + e.label);
    local[e.id.value] = &e;
  }
  auto kind_of = [&](EntityId id) -> std::optional<EntityKind> {
    if (auto it = local.find(id.value); it != local.end()) return it->second->kind;
    if (contains(id)) return entity(id).kind;
    return std::nullopt;
  };
  for (const auto& rel : record.relations) {
    auto [subject_kind, object_kind] = endpoint_kinds(rel.kind);
    auto s = kind_of(rel.subject);
    auto o = kind_of(rel.object);
    if (rel.kind == FunctionalRelationKind::ApiHasEvent && !s) s = EntityKind::Api;
    if (!s || !o) throw Error(ErrorCode::UnknownEndpoint, "relation endpoint missing in record for " + fqn_text);
    if (*s != subject_kind || *o != object_kind)
      throw Error(ErrorCode::InvalidArgument,
                  std::string("endpoint kinds do not fit ") + std::string(to_string(rel.kind)));
  }

  EntityId api = intern(EntityKind::Api, fqn_text);
  auto global = [&](EntityId id, bool subject_of_api_relation) -> EntityId {
    if (auto it = local.find(id.value); it != local.end()) {
      const Entity& e = *it->second;
      if (e.kind == EntityKind::Api) return api;
      return intern(e.kind, text::normalize_label(e.label));
    }
    if (subject_of_api_relation && !contains(id)) return api;
    return id;
  };
  auto& property = function_property_[api];
  for (const auto& rel : record.relations) {
    bool api_subject = rel.kind == FunctionalRelationKind::ApiHasEvent;
    FunctionalRelation stored{api_subject ? api : global(rel.subject, false), rel.kind, global(rel.object, false), api};
    if (std::find(property.begin(), property.end(), stored) != property.end()) continue;
    property.push_back(stored);
    if (rel.kind == FunctionalRelationKind::ApiHasEvent) event_apis_[stored.object].insert(api);
  }
  descriptions_[api] = record.description;
  return api;
}

inline bool KnowledgeGraph::add_semantic_relation(const SemanticRelation& triple) {
  if (!is_api(triple.left) || !is_api(triple.right))
    throw Error(ErrorCode::UnknownEndpoint, "semantic relation endpoints must be stored APIs");
  if (triple.left == triple.right) throw Error(ErrorCode::InvalidArgument, "semantic relation needs two distinct APIs");
  return semantic_.insert(triple).second;
}

inline std::vector<std::pair<EntityId, SemanticRelationKind>> KnowledgeGraph::semantic_neighbors(
    EntityId api, const std::optional<std::set<SemanticRelationKind>>& kinds) const {
  if (!is_api(api)) throw Error(ErrorCode::UnknownEndpoint, "no API with id " + std::to_string(api.value));
  std::set<std::tuple<SemanticRelationKind, std::string, std::uint32_t>> ordered;
  for (const auto& t : semantic_) {
    if (kinds && !kinds->count(t.kind)) continue;
    if (t.left == api) ordered.emplace(t.kind, label(t.right), t.right.value);
    if (t.right == api) ordered.emplace(t.kind, label(t.left), t.left.value);
  }
  std::vector<std::pair<EntityId, SemanticRelationKind>> out;
  for (const auto& [kind, name, id] : ordered) out.emplace_back(EntityId{id}, kind);
  return out;
}

inline std::optional<std::string> KnowledgeGraph::check_invariants() const {
  for (const auto& [api, rels] : function_property_) {
    if (!is_api(api)) return "FUNCTION property attached to a non-API entity";
    bool has_event = false;
    for (const auto& rel : rels) {
      try {
        check_relation(rel);
      } catch (const Error& e) {
        return std::string(e.what());
      }
      if (rel.source_api != api) return "relation stored under a foreign API";
      has_event |= rel.kind == FunctionalRelationKind::ApiHasEvent;
    }
    if (!has_event) return "API without ApiHasEvent: " + label(api);
  }
  for (const auto& e : entities_)
    if (e.kind == EntityKind::Api && !function_property_.count(e.id)) return "API without FUNCTION property: " + e.label;
  for (const auto& t : semantic_)
    if (!is_api(t.left) || !is_api(t.right) || t.left == t.right) return "bad semantic relation";
  return std::nullopt;
}

/// Label-level comparison: equal when both graphs hold the same entities,
/// relations, triples and descriptions regardless of id assignment.
inline bool structurally_equal(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  auto canon = [](const KnowledgeGraph& g) {
    using Key = std::tuple<std::string, std::string, std::string>;
    std::multiset<Key> entities, relations, triples, descriptions;
    for (const auto& e : g.entities()) entities.emplace(std::string(to_string(e.kind)), e.label, "");
    for (auto api : g.apis()) {
      descriptions.emplace(g.label(api), g.description(api), "");
      for (const auto& rel : g.function_property(api))
        relations.emplace(g.label(api),
                          std::string(to_string(g.entity(rel.subject).kind)) + ":" + g.label(rel.subject) + "|" +
                              std::string(to_string(rel.kind)),
                          std::string(to_string(g.entity(rel.object).kind)) + ":" + g.label(rel.object));
    }
    for (const auto& t : g.semantic_relations())
      triples.emplace(g.label(t.left), std::string(to_string(t.kind)), g.label(t.right));
    return std::make_tuple(entities, relations, triples, descriptions);
  };
  return canon(a) == canon(b);
}

}  // namespace apiclarify
