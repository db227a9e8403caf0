#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace apiclarify;
using namespace apiclarify::testing;

namespace {

DialogueSession answered_fig1(const std::vector<std::string>& labels) {
  static const LexicalIndex index(fig1_graph());
  auto s = start_session(kFig1Query, fig1_graph(), index);
  for (const auto& label : labels) {
    auto q = next_question(s);
    auto it = std::find_if(q.options.begin(), q.options.end(), [&](const auto& o) { return o.label == label; });
    if (it == q.options.end()) throw std::runtime_error("no option " + label);
    apply_selection(s, it->id);
  }
  if (s.state != SessionState::Finished) stop(s);
  return s;
}

std::vector<std::string> keyword_texts(const Explanation& e, KeywordSource source) {
  std::vector<std::string> out;
  for (const auto& k : e.keywords)
    if (k.source == source) out.push_back(k.text);
  return out;
}

}  // namespace

TEST(Extend, Fig1ResultGetsTwoSimilarAndTwoCollaborating) {
  const auto& g = fig1_graph();
  auto ext = extend({api(g, kAbsolutePath)}, g);
  ASSERT_EQ(ext.size(), 4u);
  EXPECT_EQ(g.label(ext[0].api), kCanonicalPath);
  EXPECT_EQ(ext[0].kind, SemanticRelationKind::FunctionSimilarity);
  EXPECT_EQ(g.label(ext[1].api), kToAbsolutePath);
  EXPECT_EQ(ext[1].kind, SemanticRelationKind::FunctionSimilarity);
  EXPECT_EQ(g.label(ext[2].api), kFileSystemGetPath);
  EXPECT_EQ(ext[2].kind, SemanticRelationKind::FunctionCollaboration);
  EXPECT_EQ(g.label(ext[3].api), kPathsGet);
  for (const auto& e : ext) EXPECT_EQ(g.label(e.source), kAbsolutePath);
}

TEST(Extend, StreamCollectReachesDistinct) {
  const auto& g = desk_graph();
  auto ext = extend({api(g, "java.util.stream.Stream.collect(java.util.stream.Collector)")}, g);
  bool found = false;
  for (const auto& e : ext) found |= g.label(e.api) == "java.util.stream.Stream.distinct()";
  EXPECT_TRUE(found);
}

TEST(Extend, NoTriplesNoExtensions) {
  const auto& g = fig1_graph();
  EXPECT_TRUE(extend({api(g, kGetDefault)}, g).empty());
}

TEST(Extend, DisjointFromResultsAndDuplicateFree) {
  const auto& g = fig1_graph();
  std::vector<EntityId> results = {api(g, kAbsolutePath), api(g, kCanonicalPath)};
  auto ext = extend(results, g);
  std::set<EntityId> seen;
  for (const auto& e : ext) {
    EXPECT_TRUE(std::find(results.begin(), results.end(), e.api) == results.end());
    EXPECT_TRUE(seen.insert(e.api).second);
  }
  EXPECT_EQ(ext.size(), 3u);
  // Same input, same output.
  auto again = extend(results, g);
  ASSERT_EQ(again.size(), ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) EXPECT_EQ(again[i].api, ext[i].api);
}

TEST(Extend, PriorityOrdersKinds) {
  EXPECT_LT(extension_priority(SemanticRelationKind::FunctionSimilarity),
            extension_priority(SemanticRelationKind::FunctionReplace));
  EXPECT_LT(extension_priority(SemanticRelationKind::FunctionReplace),
            extension_priority(SemanticRelationKind::FunctionCollaboration));
  EXPECT_LT(extension_priority(SemanticRelationKind::FunctionCollaboration),
            extension_priority(SemanticRelationKind::FunctionOpposite));
  EXPECT_LT(extension_priority(SemanticRelationKind::BehaviorDifference),
            extension_priority(SemanticRelationKind::EfficiencyComparison));
}

TEST(Explain, Fig1ResultKeywords) {
  const auto& g = fig1_graph();
  auto s = answered_fig1({"return path", "absolute"});
  auto e = explain(api(g, kAbsolutePath), s, g);
  auto kw = keyword_texts(e, KeywordSource::DecisionPath);
  EXPECT_EQ(std::set<std::string>(kw.begin(), kw.end()), (std::set<std::string>{"returns", "absolute", "path string"}));
  EXPECT_TRUE(keyword_texts(e, KeywordSource::RelationLabel).empty());
  EXPECT_EQ(e.description, g.description(api(g, kAbsolutePath)));
  // Each path keyword occurs in the description.
  auto lower = text::to_lower(e.description);
  for (const auto& k : kw) EXPECT_NE(lower.find(k), std::string::npos) << k;
}

TEST(Explain, ExtendedApiCarriesRelationLabel) {
  const auto& g = fig1_graph();
  auto s = answered_fig1({"return path", "absolute"});
  auto e = explain(api(g, kToAbsolutePath), s, g, SemanticRelationKind::FunctionSimilarity, api(g, kAbsolutePath));
  EXPECT_EQ(keyword_texts(e, KeywordSource::RelationLabel), std::vector<std::string>{"Function Similarity"});
  auto kw = keyword_texts(e, KeywordSource::DecisionPath);
  EXPECT_EQ(std::set<std::string>(kw.begin(), kw.end()), (std::set<std::string>{"returns", "absolute", "path string"}));
  EXPECT_EQ(e.related_to, api(g, kAbsolutePath));
}

TEST(Explain, ImmediateStopHasNoPathKeywords) {
  const auto& g = fig1_graph();
  auto s = answered_fig1({});
  auto e = explain(s.results.front(), s, g);
  EXPECT_TRUE(e.keywords.empty());
}

TEST(Explain, NullEdgeAddsNothing) {
  const auto& g = fig1_graph();
  auto s = answered_fig1({"return path", std::string(kNullOptionLabel)});
  auto e = explain(api(g, kToAbsolutePath), s, g);
  EXPECT_EQ(keyword_texts(e, KeywordSource::DecisionPath), std::vector<std::string>{"returns"});
}

TEST(Explain, UnrelatedApiIsUnknownApi) {
  const auto& g = fig1_graph();
  auto s = answered_fig1({"return path", "absolute"});
  try {
    explain(api(g, kGetDefault), s, g);
    FAIL() << "expected UnknownApi";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownApi);
  }
  EXPECT_THROW(explain(api(g, kGetDefault), s, g, SemanticRelationKind::FunctionSimilarity, api(g, kAbsolutePath)),
               Error);
}

TEST(Recommend, Fig1RecordShape) {
  const auto& g = fig1_graph();
  auto s = answered_fig1({"return path", "absolute"});
  auto rec = recommend(s, g);
  EXPECT_EQ(rec.rounds, 2u);
  ASSERT_EQ(rec.results.size(), 1u);
  EXPECT_EQ(rec.extensions.size(), 4u);
  auto j = to_json(rec, g);
  EXPECT_EQ(j["query"], kFig1Query);
  EXPECT_EQ(j["rounds"], 2);
  EXPECT_EQ(j["results"][0]["fqn"], kAbsolutePath);
  EXPECT_EQ(j["results"][0]["keywords"][0]["source"], "DecisionPath");
  EXPECT_EQ(j["extensions"][0]["relation"], "Function Similarity");
  EXPECT_EQ(j["extensions"][0]["related_to"], kAbsolutePath);
  EXPECT_EQ(j["extensions"][3]["relation"], "Function Collaboration");
}

TEST(Recommend, UnfinishedSessionIsRejected) {
  static const LexicalIndex index(fig1_graph());
  auto s = start_session(kFig1Query, fig1_graph(), index);
  EXPECT_THROW(recommend(s, fig1_graph()), Error);
}
