#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <apiclarify/apiclarify.hpp>

namespace apiclarify::testing {

inline std::string data_path(const std::string& relative) { return std::string(APICLARIFY_DATA_DIR) + "/" + relative; }

inline std::string test_data_path(const std::string& relative) {
  return std::string(APICLARIFY_TEST_DATA_DIR) + "/" + relative;
}

inline BuildResult build_corpus(const std::string& name) {
  auto dir = data_path(name);
  std::vector<SimpleNameTriple> triples;
  if (std::filesystem::exists(dir + "/triples.jsonl")) triples = read_triples(dir + "/triples.jsonl");
  return build_graph(read_pairs(dir + "/pairs.jsonl"), {}, triples);
}

inline const KnowledgeGraph& fig1_graph() {
  static const KnowledgeGraph graph = build_corpus("fig1").graph;
  return graph;
}

inline const KnowledgeGraph& desk_graph() {
  static const KnowledgeGraph graph = build_corpus("desk").graph;
  return graph;
}

inline EntityId api(const KnowledgeGraph& g, const std::string& fqn_text) {
  auto id = g.find_api(fqn_text);
  if (!id) throw Error(ErrorCode::UnknownApi, fqn_text);
  return *id;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng{std::random_device{}()};
  auto dir = std::filesystem::temp_directory_path() / ("apiclarify_" + tag + "_" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir;
}

inline const std::string kAbsolutePath = "java.io.File.getAbsolutePath()";
inline const std::string kCanonicalPath = "java.io.File.getCanonicalPath()";
inline const std::string kToAbsolutePath = "java.nio.file.Path.toAbsolutePath()";
inline const std::string kPathsGet = "java.nio.file.Paths.get(java.lang.String, java.lang.String...)";
inline const std::string kFileSystemGetPath = "java.nio.file.FileSystem.getPath(java.lang.String, java.lang.String...)";
inline const std::string kGetDefault = "java.nio.file.FileSystems.getDefault()";
inline const std::string kFig1Query = "get the current working directory";

}  // namespace apiclarify::testing
