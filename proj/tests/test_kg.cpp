#include <gtest/gtest.h>

#include <fstream>

#include "test_support.hpp"

using namespace apiclarify;
using namespace apiclarify::testing;

namespace {

/// Record with one event "verb object" and its action/object entities.
ApiRecord simple_record(const std::string& fqn_text, const std::string& description, const std::string& verb,
                        const std::string& object) {
  ApiRecord r;
  r.fqn = fqn_text;
  r.description = description;
  r.entities = {{EntityId{0}, EntityKind::Api, fqn_text},
                {EntityId{1}, EntityKind::Event, verb + " " + object},
                {EntityId{2}, EntityKind::Action, verb},
                {EntityId{3}, EntityKind::Object, object}};
  r.relations = {{EntityId{0}, FunctionalRelationKind::ApiHasEvent, EntityId{1}, EntityId{0}},
                 {EntityId{2}, FunctionalRelationKind::ActHasEvent, EntityId{1}, EntityId{0}},
                 {EntityId{1}, FunctionalRelationKind::HasDirectObject, EntityId{3}, EntityId{0}}};
  return r;
}

KnowledgeGraph two_api_graph() {
  KnowledgeGraph g;
  g.add_api(simple_record("java.lang.String.format(java.lang.String, java.lang.Object...)", "Returns a string.",
                          "return", "string"));
  g.add_api(simple_record("java.text.DateFormat.format(java.util.Date)", "Formats a Date.", "format", "date"));
  return g;
}

}  // namespace

TEST(EntityKinds, ExactlySixKindsFifteenFunctionalSevenSemantic) {
  EXPECT_EQ(kAllEntityKinds.size(), 6u);
  EXPECT_EQ(kAllFunctionalRelationKinds.size(), 15u);
  EXPECT_EQ(kAllSemanticRelationKinds.size(), 7u);
  for (auto k : kAllEntityKinds) EXPECT_EQ(parse_entity_kind(to_string(k)), k);
  for (auto k : kAllFunctionalRelationKinds) EXPECT_EQ(parse_functional_kind(to_string(k)), k);
  for (auto k : kAllSemanticRelationKinds) {
    EXPECT_EQ(parse_semantic_kind(to_string(k)), k);
    EXPECT_EQ(parse_semantic_kind(display_name(k)), k);
  }
  EXPECT_FALSE(parse_entity_kind("Class").has_value());
}

TEST(AddApi, PathsGetRecordCreatesApiWithEvent) {
  KnowledgeGraph g;
  auto id = g.add_api(simple_record(kPathsGet, "Converts a path string to a Path.", "convert", "path string"));
  EXPECT_TRUE(g.is_api(id));
  EXPECT_EQ(g.label(id), kPathsGet);
  EXPECT_EQ(g.description(id), "Converts a path string to a Path.");
  auto event = g.find_entity(EntityKind::Event, "convert path string");
  ASSERT_TRUE(event);
  EXPECT_EQ(g.apis_with_event(*event), std::vector<EntityId>{id});
  EXPECT_FALSE(g.check_invariants());
}

TEST(AddApi, EmptyRelationsAreRejected) {
  KnowledgeGraph g;
  ApiRecord r{kPathsGet, "Converts.", {}, {}};
  try {
    g.add_api(r);
    FAIL() << "expected RejectedNoEvent";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RejectedNoEvent);
  }
  EXPECT_TRUE(g.empty());
}

TEST(AddApi, IdenticalRecordIsIdempotent) {
  KnowledgeGraph g;
  auto rec = simple_record(kAbsolutePath, "Returns the absolute path string.", "return", "path");
  auto first = g.add_api(rec);
  auto entities = g.entity_count();
  auto relations = g.functional_relation_count();
  EXPECT_EQ(g.add_api(rec), first);
  EXPECT_EQ(g.entity_count(), entities);
  EXPECT_EQ(g.functional_relation_count(), relations);
}

TEST(AddApi, ConflictingDescriptionIsDuplicateConflict) {
  KnowledgeGraph g;
  g.add_api(simple_record(kAbsolutePath, "one", "return", "path"));
  try {
    g.add_api(simple_record(kAbsolutePath, "two", "return", "path"));
    FAIL() << "expected DuplicateConflict";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateConflict);
  }
}

TEST(AddApi, ApiLabelNeedsParameterList) {
  KnowledgeGraph g;
  EXPECT_THROW(g.add_api(simple_record("java.io.File.getAbsolutePath", "d", "return", "path")), Error);
}

TEST(AddApi, EndpointKindsMustFitRelation) {
  KnowledgeGraph g;
  auto rec = simple_record(kAbsolutePath, "d", "return", "path");
  // HasStatus must go Object -> ObjectConstraint, not Event -> Object.
  rec.relations.push_back({EntityId{1}, FunctionalRelationKind::HasStatus, EntityId{3}, EntityId{0}});
  EXPECT_THROW(g.add_api(rec), Error);
  EXPECT_TRUE(g.empty());
}

TEST(AddApi, SharedEntitiesAreStoredOnce) {
  KnowledgeGraph g;
  g.add_api(simple_record(kAbsolutePath, "a", "return", "path"));
  g.add_api(simple_record(kCanonicalPath, "b", "return", "path"));
  auto event = g.find_entity(EntityKind::Event, "return path");
  ASSERT_TRUE(event);
  EXPECT_EQ(g.apis_with_event(*event).size(), 2u);
  EXPECT_EQ(g.entity_count(), 5u);  // two APIs + event + action + object
}

TEST(SemanticRelations, InsertReportsNovelty) {
  KnowledgeGraph g;
  auto a = g.add_api(simple_record(kAbsolutePath, "a", "return", "path"));
  auto c = g.add_api(simple_record(kCanonicalPath, "b", "return", "path"));
  EXPECT_TRUE(g.add_semantic_relation({a, SemanticRelationKind::FunctionSimilarity, c}));
  EXPECT_FALSE(g.add_semantic_relation({a, SemanticRelationKind::FunctionSimilarity, c}));
  EXPECT_EQ(g.semantic_relations().size(), 1u);
}

TEST(SemanticRelations, MissingEndpointIsUnknownEndpoint) {
  KnowledgeGraph g;
  auto a = g.add_api(simple_record(kAbsolutePath, "a", "return", "path"));
  try {
    g.add_semantic_relation({a, SemanticRelationKind::FunctionSimilarity, EntityId{999}});
    FAIL() << "expected UnknownEndpoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownEndpoint);
  }
  // A non-API entity is not a valid endpoint either.
  EXPECT_THROW(g.add_semantic_relation({a, SemanticRelationKind::FunctionSimilarity, EntityId{1}}), Error);
  EXPECT_THROW(g.add_semantic_relation({a, SemanticRelationKind::FunctionSimilarity, a}), Error);
}

TEST(SemanticNeighbors, Fig1OrderIsKindThenLabel) {
  const auto& g = fig1_graph();
  auto n = g.semantic_neighbors(api(g, kAbsolutePath));
  ASSERT_EQ(n.size(), 4u);
  EXPECT_EQ(g.label(n[0].first), kCanonicalPath);
  EXPECT_EQ(n[0].second, SemanticRelationKind::FunctionSimilarity);
  EXPECT_EQ(g.label(n[1].first), kToAbsolutePath);
  EXPECT_EQ(n[1].second, SemanticRelationKind::FunctionSimilarity);
  EXPECT_EQ(g.label(n[2].first), kFileSystemGetPath);
  EXPECT_EQ(n[2].second, SemanticRelationKind::FunctionCollaboration);
  EXPECT_EQ(g.label(n[3].first), kPathsGet);
  EXPECT_EQ(n[3].second, SemanticRelationKind::FunctionCollaboration);
}

TEST(SemanticNeighbors, ApiWithoutTriplesHasNone) {
  const auto& g = fig1_graph();
  EXPECT_TRUE(g.semantic_neighbors(api(g, kGetDefault)).empty());
  EXPECT_THROW(g.semantic_neighbors(EntityId{12345}), Error);
}

TEST(SemanticNeighbors, KindFilter) {
  auto g = two_api_graph();
  auto fmt = *g.find_api("java.lang.String.format(java.lang.String, java.lang.Object...)");
  auto date = *g.find_api("java.text.DateFormat.format(java.util.Date)");
  g.add_semantic_relation({fmt, SemanticRelationKind::EfficiencyComparison, date});
  auto n = g.semantic_neighbors(fmt, std::set{SemanticRelationKind::EfficiencyComparison});
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n[0].first, date);
  EXPECT_EQ(n[0].second, SemanticRelationKind::EfficiencyComparison);
  EXPECT_TRUE(g.semantic_neighbors(fmt, std::set{SemanticRelationKind::FunctionOpposite}).empty());
}

TEST(SemanticNeighbors, MembershipIsSymmetric) {
  const auto& g = desk_graph();
  for (auto a : g.apis())
    for (const auto& [b, kind] : g.semantic_neighbors(a)) {
      auto back = g.semantic_neighbors(b, std::set{kind});
      EXPECT_TRUE(std::any_of(back.begin(), back.end(), [&](const auto& p) { return p.first == a; }))
          << g.label(a) << " / " << g.label(b);
    }
}

TEST(Invariants, BuiltGraphsPassFullScan) {
  EXPECT_FALSE(fig1_graph().check_invariants());
  EXPECT_FALSE(desk_graph().check_invariants());
  // Every relation is reachable from exactly the API that owns it.
  const auto& g = desk_graph();
  for (auto a : g.apis())
    for (const auto& rel : g.function_property(a)) EXPECT_EQ(rel.source_api, a);
}

TEST(Storage, RoundTripPreservesStructure) {
  for (const auto* g : {&fig1_graph(), &desk_graph()}) {
    auto dir = scratch_dir("kg");
    store_graph(*g, dir.string());
    auto loaded = load_graph(dir.string());
    EXPECT_TRUE(structurally_equal(*g, loaded));
    EXPECT_EQ(loaded.api_count(), g->api_count());
    EXPECT_EQ(loaded.semantic_relations().size(), g->semantic_relations().size());
    std::filesystem::remove_all(dir);
  }
}

TEST(Storage, EmptyGraphRoundTrip) {
  auto dir = scratch_dir("empty");
  store_graph(KnowledgeGraph{}, dir.string());
  auto loaded = load_graph(dir.string());
  EXPECT_TRUE(loaded.empty());
  EXPECT_EQ(loaded.api_count(), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Storage, DanglingEndpointIsFormatErrorWithPosition) {
  auto dir = scratch_dir("dangling");
  store_graph(fig1_graph(), dir.string());
  {
    std::ofstream out(dir / "function_properties.tsv", std::ios::app);
    out << "0\t0\tApiHasEvent\t4242\n";
  }
  try {
    load_graph(dir.string());
    FAIL() << "expected FormatError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FormatError);
    EXPECT_NE(e.detail().find("function_properties.tsv:"), std::string::npos) << e.detail();
    EXPECT_NE(e.detail().find("dangling"), std::string::npos) << e.detail();
  }
  std::filesystem::remove_all(dir);
}

TEST(Storage, UnknownKindAndBadArityAreFormatErrors) {
  auto dir = scratch_dir("badkind");
  store_graph(fig1_graph(), dir.string());
  {
    std::ofstream out(dir / "entities.tsv", std::ios::app);
    out << "900\tClass\tjava.io.File\n";
  }
  EXPECT_THROW(load_graph(dir.string()), Error);
  store_graph(fig1_graph(), dir.string());
  {
    std::ofstream out(dir / "semantic_relations.tsv", std::ios::app);
    out << "only-one-field\n";
  }
  EXPECT_THROW(load_graph(dir.string()), Error);
  std::filesystem::remove_all(dir);
}

TEST(Storage, FieldsWithTabsAndNewlinesSurvive) {
  KnowledgeGraph g;
  g.add_api(simple_record(kAbsolutePath, "line one\nline\ttwo \\ end", "return", "path"));
  auto dir = scratch_dir("escape");
  store_graph(g, dir.string());
  auto loaded = load_graph(dir.string());
  EXPECT_EQ(loaded.description(*loaded.find_api(kAbsolutePath)), "line one\nline\ttwo \\ end");
  std::filesystem::remove_all(dir);
}

TEST(Lookup, ParameterInsensitiveVariants) {
  const auto& g = desk_graph();
  EXPECT_EQ(g.find_api_variants("java.nio.file.Paths.get").size(), 1u);
  EXPECT_EQ(g.find_api_variants("java.nio.file.Paths.get(whatever)").size(), 1u);
  EXPECT_TRUE(g.find_api_variants("java.nio.file.Paths.nothing").empty());
}
