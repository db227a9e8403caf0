#pragma once

// Portable on-disk form of a KnowledgeGraph: four tab-separated files in one
// directory, one record per line, UTF-8.
//
//   entities.tsv            id  kind  label
//   function_properties.tsv api_id  subject_id  kind  object_id
//   semantic_relations.tsv  left_fqn  kind  right_fqn
//   descriptions.tsv        api_id  text
//
// Tabs, newlines and backslashes inside fields are written as \t, \n, \\.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "kg.hpp"

namespace apiclarify {

namespace detail {

inline std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    char next = s[++i];
    switch (next) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: out.push_back(next);
    }
  }
  return out;
}

struct TsvReader {
  std::string path;
  std::ifstream in;
  std::size_t line_no = 0;

  explicit TsvReader(const std::filesystem::path& p) : path(p.string()), in(p) {
    if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path);
  }

  /// Next non-empty record split into exactly `arity` fields.
  bool next(std::vector<std::string>& fields, std::size_t arity) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      fields = text::split(line, '\t');
      if (fields.size() != arity) fail("expected " + std::to_string(arity) + " fields");
      for (auto& f : fields) f = unescape_field(f);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::FormatError, path + ":" + std::to_string(line_no) + ": " + what);
  }

  std::uint32_t parse_id(const std::string& field) const {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(field, &used);
      if (used != field.size()) fail("bad id '" + field + "'");
      return static_cast<std::uint32_t>(v);
    } catch (const std::logic_error&) {
      fail("bad id '" + field + "'");
    }
  }
};

}  // namespace detail

inline void store_graph(const KnowledgeGraph& graph, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto open = [&](const char* name) {
    std::ofstream out(fs::path(directory) / name, std::ios::trunc);
    if (!out) throw Error(ErrorCode::FormatError, "cannot write " + (fs::path(directory) / name).string());
    return out;
  };
  using detail::escape_field;
  auto entities = open("entities.tsv");
  for (const auto& e : graph.entities())
    entities << e.id.value << '\t' << to_string(e.kind) << '\t' << escape_field(e.label) << '\n';
  auto properties = open("function_properties.tsv");
  auto descriptions = open("descriptions.tsv");
  for (auto api : graph.apis()) {
    for (const auto& rel : graph.function_property(api))
      properties << api.value << '\t' << rel.subject.value << '\t' << to_string(rel.kind) << '\t' << rel.object.value
                 << '\n';
    descriptions << api.value << '\t' << escape_field(graph.description(api)) << '\n';
  }
  auto semantic = open("semantic_relations.tsv");
  for (const auto& t : graph.semantic_relations())
    semantic << escape_field(graph.label(t.left)) << '\t' << to_string(t.kind) << '\t'
             << escape_field(graph.label(t.right)) << '\n';
}

inline KnowledgeGraph load_graph(const std::string& directory) {
  namespace fs = std::filesystem;
  fs::path dir(directory);
  if (!fs::is_directory(dir)) throw Error(ErrorCode::FormatError, "not a graph directory: " + directory);
  KnowledgeGraph g;
  std::map<std::uint32_t, EntityId> remap;
  std::vector<std::string> f;

  detail::TsvReader entities(dir / "entities.tsv");
  while (entities.next(f, 3)) {
    auto file_id = entities.parse_id(f[0]);
    auto kind = parse_entity_kind(f[1]);
    if (!kind) entities.fail("unknown entity kind '" + f[1] + "'");
    if (f[2].empty()) entities.fail("empty label");
    if (remap.count(file_id)) entities.fail("duplicate id " + f[0]);
    if (g.find_entity(*kind, f[2])) entities.fail("duplicate entity '" + f[2] + "'");
    if (*kind == EntityKind::Api && !fqn::has_param_list(f[2])) entities.fail("API label without parameter list");
    remap[file_id] = g.intern(*kind, f[2]);
  }

  detail::TsvReader properties(dir / "function_properties.tsv");
  while (properties.next(f, 4)) {
    auto resolve = [&](const std::string& field) {
      auto it = remap.find(properties.parse_id(field));
      if (it == remap.end()) properties.fail("dangling entity id " + field);
      return it->second;
    };
    auto kind = parse_functional_kind(f[2]);
    if (!kind) properties.fail("unknown relation kind '" + f[2] + "'");
    FunctionalRelation rel{resolve(f[1]), *kind, resolve(f[3]), resolve(f[0])};
    try {
      g.check_relation(rel);
    } catch (const Error& e) {
      properties.fail(e.detail());
    }
    g.function_property_[rel.source_api].push_back(rel);
    if (*kind == FunctionalRelationKind::ApiHasEvent) g.event_apis_[rel.object].insert(rel.source_api);
  }

  detail::TsvReader descriptions(dir / "descriptions.tsv");
  while (descriptions.next(f, 2)) {
    auto it = remap.find(descriptions.parse_id(f[0]));
    if (it == remap.end() || !g.is_api(it->second)) descriptions.fail("description for unknown API " + f[0]);
    g.descriptions_[it->second] = f[1];
  }

  detail::TsvReader semantic(dir / "semantic_relations.tsv");
  while (semantic.next(f, 3)) {
    auto left = g.find_api(f[0]);
    auto right = g.find_api(f[2]);
    auto kind = parse_semantic_kind(f[1]);
    if (!left || !right) semantic.fail("unknown API in triple");
    if (!kind) semantic.fail("unknown semantic relation '" + f[1] + "'");
    if (*left == *right) semantic.fail("self relation");
    g.semantic_.insert({*left, *kind, *right});
  }

  for (auto api : g.apis()) {
    if (!g.descriptions_.count(api)) throw Error(ErrorCode::FormatError, "missing description for " + g.label(api));
    g.function_property_[api];
  }
  if (auto violation = g.check_invariants()) throw Error(ErrorCode::FormatError, *violation);
  return g;
}

}  // namespace apiclarify
