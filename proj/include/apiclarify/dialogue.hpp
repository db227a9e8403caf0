#pragma once

// Clarification dialogue: attribute table, decision-tree induction (ID3 /
// C4.5), templated questions, and the answer/prune/stop session loop.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "kg.hpp"
#include "retrieval.hpp"

namespace apiclarify {

inline constexpr std::string_view kActionColumn = "action#Has Event";
inline constexpr std::string_view kNullOptionLabel = "other / not applicable";

struct Column {
  std::string name;  // "e1#Relation Name"
  FunctionalRelationKind kind = FunctionalRelationKind::ActHasEvent;
  std::string subject;  // e1 label; empty for the action column
};

/// APIs x aspects. A cell is the set of e2 labels the row's API relates to
/// under the column's aspect; an empty set is null.
class AttributeTable {
 public:
  struct Row {
    EntityId api;
    std::string name;  // fqn, or any label for hand-built tables
    double weight = 1.0;
    std::string signature;  // equal signatures mean identical functionality
  };

  AttributeTable() = default;

  /// Direct construction, mainly for tests: cells[r][c] is a set of values.
  AttributeTable(std::vector<Row> rows, std::vector<Column> columns,
                 std::vector<std::vector<std::set<std::string>>> cells)
      : rows_(std::move(rows)), columns_(std::move(columns)), cells_(std::move(cells)) {
    if (cells_.size() != rows_.size()) throw Error(ErrorCode::InvalidArgument, "cell rows do not match rows");
    std::set<std::string> names;
    for (const auto& c : columns_)
      if (!names.insert(c.name).second) throw Error(ErrorCode::InvalidArgument, "duplicate column " + c.name);
    for (auto& r : cells_)
      if (r.size() != columns_.size()) throw Error(ErrorCode::InvalidArgument, "cell columns do not match columns");
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (rows_[i].signature.empty()) rows_[i].signature = cell_signature(i);
  }

  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::set<std::string>& cell(std::size_t row, std::size_t column) const { return cells_.at(row).at(column); }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return columns_.size(); }

  std::size_t column_index(std::string_view aspect) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
      if (columns_[c].name == aspect) return c;
    throw Error(ErrorCode::UnknownAspect, std::string(aspect));
  }

  std::vector<std::size_t> all_rows() const {
    std::vector<std::size_t> out(rows_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }

  friend AttributeTable build_attribute_table(const Subgraph& subgraph, const KnowledgeGraph& graph,
                                              const std::map<EntityId, double>& weights);

 private:
  std::string cell_signature(std::size_t row) const {
    std::string sig;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      sig += columns_[c].name + "=";
      for (const auto& v : cells_[row][c]) sig += v + ",";
      sig += ";";
    }
    return sig;
  }

  std::vector<Row> rows_;
  std::vector<Column> columns_;
  std::vector<std::vector<std::set<std::string>>> cells_;
};

/// True for the relation kinds that become aspect columns.
constexpr bool is_aspect_kind(FunctionalRelationKind kind) {
  return kind == FunctionalRelationKind::ActHasEvent || is_object_constraint(kind) || is_event_constraint(kind);
}

/// Rows follow subgraph order; columns are sorted by name. Row weights
/// default to 1.
inline AttributeTable build_attribute_table(const Subgraph& subgraph, const KnowledgeGraph& graph,
                                            const std::map<EntityId, double>& weights = {}) {
  if (subgraph.api_ids.empty()) throw Error(ErrorCode::EmptySubgraph, "subgraph holds no APIs");
  std::map<std::string, Column> columns;
  std::map<EntityId, std::map<std::string, std::set<std::string>>> values;
  std::map<EntityId, std::multiset<std::pair<std::string, std::string>>> signatures;
  for (const auto& rel : subgraph.relations) {
    signatures[rel.source_api].emplace(std::string(to_string(rel.kind)), graph.label(rel.object));
    if (!is_aspect_kind(rel.kind)) continue;
    Column col;
    col.kind = rel.kind;
    if (rel.kind == FunctionalRelationKind::ActHasEvent) {
      col.name = std::string(kActionColumn);
    } else {
      col.subject = graph.label(rel.subject);
      col.name = col.subject + "#" + std::string(display_name(rel.kind));
    }
    columns.try_emplace(col.name, col);
    values[rel.source_api][col.name].insert(graph.label(rel.object));
  }

  AttributeTable table;
  for (const auto& [name, col] : columns) table.columns_.push_back(col);
  for (auto api : subgraph.api_ids) {
    AttributeTable::Row row;
    row.api = api;
    row.name = graph.label(api);
    if (auto w = weights.find(api); w != weights.end()) row.weight = w->second;
    for (const auto& [kind, label] : signatures[api]) row.signature += kind + "=" + label + ";";
    table.rows_.push_back(row);
    std::vector<std::set<std::string>> cells;
    for (const auto& col : table.columns_) cells.push_back(values[api][col.name]);
    table.cells_.push_back(std::move(cells));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Information measures (log base 2)

/// Entropy of a labelled multiset, by relative frequency.
inline double entropy(const std::vector<std::string>& apis) {
  if (apis.empty()) throw Error(ErrorCode::EmptyInput, "entropy of an empty multiset");
  std::map<std::string, double> counts;
  for (const auto& a : apis) counts[a] += 1.0;
  double n = static_cast<double>(apis.size());
  double h = 0.0;
  for (const auto& [a, c] : counts) {
    double p = c / n;
    h -= p * std::log2(p);
  }
  return h;
}

/// Entropy of a distribution given by non-negative weights.
inline double weighted_entropy(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (weights.empty() || total <= 0.0) throw Error(ErrorCode::EmptyInput, "entropy of an empty multiset");
  double h = 0.0;
  for (double w : weights)
    if (w > 0.0) {
      double p = w / total;
      h -= p * std::log2(p);
    }
  return h;
}

struct ValueGroup {
  std::optional<std::string> value;  // nullopt is the null group
  std::vector<std::size_t> rows;
};

/// Groups `rows` by their value in `column`. Values are taken in
/// lexicographic order with the null group last; a row with several values
/// joins the first group it matches. Empty groups are omitted.
inline std::vector<ValueGroup> group_rows(const AttributeTable& table, const std::vector<std::size_t>& rows,
                                          std::size_t column) {
  std::set<std::string> values;
  for (auto r : rows)
    for (const auto& v : table.cell(r, column)) values.insert(v);
  std::vector<ValueGroup> groups;
  for (const auto& v : values) groups.push_back({v, {}});
  ValueGroup null_group{std::nullopt, {}};
  for (auto r : rows) {
    const auto& cell = table.cell(r, column);
    if (cell.empty()) {
      null_group.rows.push_back(r);
      continue;
    }
    for (auto& g : groups)
      if (cell.count(*g.value)) {
        g.rows.push_back(r);
        break;
      }
  }
  groups.push_back(std::move(null_group));
  std::erase_if(groups, [](const ValueGroup& g) { return g.rows.empty(); });
  return groups;
}

namespace detail {

inline double rows_weight(const AttributeTable& table, const std::vector<std::size_t>& rows) {
  double w = 0.0;
  for (auto r : rows) w += table.rows()[r].weight;
  return w;
}

inline double rows_entropy(const AttributeTable& table, const std::vector<std::size_t>& rows) {
  std::vector<double> w;
  for (auto r : rows) w.push_back(table.rows()[r].weight);
  return weighted_entropy(w);
}

inline double gain_on(const AttributeTable& table, const std::vector<std::size_t>& rows, std::size_t column) {
  double total = rows_weight(table, rows);
  double expected = 0.0;
  for (const auto& g : group_rows(table, rows, column))
    expected += rows_weight(table, g.rows) / total * rows_entropy(table, g.rows);
  return std::max(0.0, rows_entropy(table, rows) - expected);
}

inline double split_info_on(const AttributeTable& table, const std::vector<std::size_t>& rows, std::size_t column) {
  double total = rows_weight(table, rows);
  double s = 0.0;
  for (const auto& g : group_rows(table, rows, column)) {
    double p = rows_weight(table, g.rows) / total;
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace detail

inline double information_gain(const AttributeTable& table, std::string_view aspect) {
  auto c = table.column_index(aspect);
  if (table.row_count() == 0) throw Error(ErrorCode::EmptyInput, "table has no rows");
  return detail::gain_on(table, table.all_rows(), c);
}

inline double split_information(const AttributeTable& table, std::string_view aspect) {
  auto c = table.column_index(aspect);
  if (table.row_count() == 0) throw Error(ErrorCode::EmptyInput, "table has no rows");
  return detail::split_info_on(table, table.all_rows(), c);
}

/// Gain divided by split information; nullopt when the split information is
/// zero, which excludes the aspect from C4.5 selection.
inline std::optional<double> gain_ratio(const AttributeTable& table, std::string_view aspect) {
  double split = split_information(table, aspect);
  if (split <= 0.0) return std::nullopt;
  return information_gain(table, aspect) / split;
}

// ---------------------------------------------------------------------------
// Decision tree

enum class TreeStrategy { ID3, C45 };

constexpr std::string_view to_string(TreeStrategy s) { return s == TreeStrategy::ID3 ? "id3" : "c45"; }

inline std::optional<TreeStrategy> parse_strategy(std::string_view name) {
  std::string n = text::to_lower(name);
  if (n == "id3") return TreeStrategy::ID3;
  if (n == "c45" || n == "c4.5") return TreeStrategy::C45;
  return std::nullopt;
}

struct TreeEdge {
  std::optional<std::string> value;
  std::size_t child = 0;
};

struct TreeNode {
  bool leaf = true;
  std::size_t column = 0;  // valid for internal nodes
  std::vector<TreeEdge> edges;
  std::vector<std::size_t> rows;  // every table row in this sub-tree
  std::size_t depth = 0;          // internal nodes above this one
};

class DecisionTree {
 public:
  const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const { return nodes_.size(); }
  static constexpr std::size_t root() { return 0; }
  const AttributeTable& table() const { return table_; }

  std::vector<std::size_t> leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].leaf) out.push_back(i);
    return out;
  }

  /// Aspect name at an internal node.
  const std::string& aspect(std::size_t i) const { return table_.columns().at(node(i).column).name; }

  friend DecisionTree build_tree(const AttributeTable& table, TreeStrategy strategy);

 private:
  std::size_t grow(const std::vector<std::size_t>& rows, std::vector<std::size_t> available, std::size_t depth,
                   TreeStrategy strategy);

  AttributeTable table_;
  std::vector<TreeNode> nodes_;
};

namespace detail {

inline constexpr double kTieEpsilon = 1e-12;

/// Column chosen at a node, or nullopt when the rows must form a leaf.
inline std::optional<std::size_t> select_column(const AttributeTable& table, const std::vector<std::size_t>& rows,
                                                const std::vector<std::size_t>& available, TreeStrategy strategy) {
  std::optional<std::size_t> best;
  double best_score = 0.0;
  // `available` is in column-name order, so the first maximum wins ties.
  for (auto c : available) {
    if (group_rows(table, rows, c).size() < 2) continue;
    double score = gain_on(table, rows, c);
    if (strategy == TreeStrategy::C45) {
      double split = split_info_on(table, rows, c);
      if (split <= 0.0) continue;
      score /= split;
    }
    if (!best || score > best_score + kTieEpsilon) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

}  // namespace detail

inline std::size_t DecisionTree::grow(const std::vector<std::size_t>& rows, std::vector<std::size_t> available,
                                      std::size_t depth, TreeStrategy strategy) {
  std::size_t index = nodes_.size();
  nodes_.push_back({});
  nodes_[index].rows = rows;
  nodes_[index].depth = depth;

  bool identical = std::all_of(rows.begin(), rows.end(), [&](std::size_t r) {
    return table_.rows()[r].signature == table_.rows()[rows.front()].signature;
  });
  if (rows.size() <= 1 || identical || available.empty()) return index;
  auto chosen = detail::select_column(table_, rows, available, strategy);
  if (!chosen) return index;

  std::erase(available, *chosen);
  auto groups = group_rows(table_, rows, *chosen);
  nodes_[index].leaf = false;
  nodes_[index].column = *chosen;
  for (const auto& g : groups) {
    std::size_t child = grow(g.rows, available, depth + 1, strategy);
    nodes_[index].edges.push_back({g.value, child});
  }
  return index;
}

inline DecisionTree build_tree(const AttributeTable& table, TreeStrategy strategy = TreeStrategy::ID3) {
  if (table.row_count() == 0) throw Error(ErrorCode::EmptyInput, "table has no rows");
  DecisionTree tree;
  tree.table_ = table;
  std::vector<std::size_t> available(table.column_count());
  for (std::size_t c = 0; c < available.size(); ++c) available[c] = c;
  std::sort(available.begin(), available.end(),
            [&](std::size_t a, std::size_t b) { return table.columns()[a].name < table.columns()[b].name; });
  tree.grow(table.all_rows(), available, 0, strategy);
  return tree;
}

struct LeafDepth {
  std::size_t apis = 0;
  std::size_t depth = 0;
};

/// Leaf-size-weighted mean leaf depth.
inline double har(const std::vector<LeafDepth>& leaves) {
  double weighted = 0.0;
  double apis = 0.0;
  for (const auto& l : leaves) {
    weighted += static_cast<double>(l.apis * l.depth);
    apis += static_cast<double>(l.apis);
  }
  return apis > 0 ? weighted / apis : 0.0;
}

inline double har(const DecisionTree& tree) {
  std::vector<LeafDepth> leaves;
  for (auto leaf : tree.leaves()) leaves.push_back({tree.node(leaf).rows.size(), tree.node(leaf).depth});
  return har(leaves);
}

inline nlohmann::json tree_to_json(const DecisionTree& tree, std::size_t node = DecisionTree::root()) {
  const auto& n = tree.node(node);
  if (n.leaf) {
    nlohmann::json apis = nlohmann::json::array();
    for (auto r : n.rows) apis.push_back(tree.table().rows()[r].name);
    return {{"leaf", apis}};
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : n.edges)
    edges.push_back({{"value", e.value ? nlohmann::json(*e.value) : nlohmann::json(nullptr)},
                     {"child", tree_to_json(tree, e.child)}});
  return {{"aspect", tree.aspect(node)}, {"edges", edges}};
}

// ---------------------------------------------------------------------------
// Questions and sessions

/// Question text for an aspect. `subject` is the object label for object
/// constraints and the event label for event constraints.
inline std::string question_text(FunctionalRelationKind kind, const std::string& subject) {
  using K = FunctionalRelationKind;
  switch (kind) {
    case K::ActHasEvent: return "What do you want to do?";
    case K::HasStatus: return "What kind of the " + subject + " do you want?";
    case K::HasType: return "Which type of the " + subject + " do you want?";
    case K::HasLocation: return "Where the " + subject + " will be done?";
    case K::HasDirection: return "Where is the direction of " + subject + "?";
    case K::HasManner: return "How would you prefer to " + subject + "?";
    case K::HasExtent: return "How far would you want to " + subject + "?";
    case K::HasTemporal: return "When do you have to " + subject + "?";
    case K::HasGoal: return "Which object do you want to serve by " + subject + "?";
    case K::HasPurpose: return "Which purpose do you want to satisfy by " + subject + "?";
    case K::HasResult: return "What is the form of the results of " + subject + "?";
    case K::HasCondition: return "Under which condition can " + subject + "?";
    default: throw Error(ErrorCode::UnknownAspect, "no question template for " + std::string(to_string(kind)));
  }
}

struct QuestionOption {
  std::string id;     // "r<round>.<k>"
  std::string label;  // edge value, or the null label
  std::size_t api_count = 0;
  bool is_null = false;
};

struct ClarificationQuestion {
  std::string text;
  std::string aspect;
  std::vector<QuestionOption> options;
};

struct TranscriptEntry {
  ClarificationQuestion question;
  std::string option_id;
  std::string option_label;
  std::size_t node = 0;  // tree node the question was asked at
  std::size_t edge = 0;  // edge taken
};

enum class SessionState { AwaitingAnswer, Finished };

constexpr std::string_view to_string(SessionState s) {
  return s == SessionState::AwaitingAnswer ? "AwaitingAnswer" : "Finished";
}

struct DialogueOptions {
  TreeStrategy strategy = TreeStrategy::ID3;
  std::size_t n = 10;
  bool expand_shared_events = true;
  bool weight_by_score = false;
};

struct DialogueSession {
  std::string id;
  std::string query;
  DialogueOptions options;
  std::vector<ScoredApi> candidates;  // retrieval order, expansions last
  DecisionTree tree;
  std::size_t current = DecisionTree::root();
  std::vector<TranscriptEntry> transcript;
  SessionState state = SessionState::AwaitingAnswer;
  std::vector<EntityId> results;  // set once Finished
};

namespace detail {

inline std::vector<EntityId> ranked_subtree_apis(const DialogueSession& s, std::size_t node) {
  std::set<EntityId> members;
  for (auto r : s.tree.node(node).rows) members.insert(s.tree.table().rows()[r].api);
  std::vector<EntityId> out;
  for (const auto& c : s.candidates)
    if (members.count(c.api)) out.push_back(c.api);
  return out;
}

inline void finish(DialogueSession& s) {
  if (s.state == SessionState::Finished && !s.results.empty()) return;
  s.results = ranked_subtree_apis(s, s.current);
  s.state = SessionState::Finished;
}

}  // namespace detail

/// Session over a fixed candidate list (already ranked and expanded).
inline DialogueSession start_session_with(std::string query, std::vector<ScoredApi> candidates,
                                          const KnowledgeGraph& graph, const DialogueOptions& options = {}) {
  if (candidates.empty()) throw Error(ErrorCode::NoCandidates, query);
  DialogueSession s;
  s.query = std::move(query);
  s.options = options;
  s.candidates = std::move(candidates);
  std::vector<EntityId> ids;
  std::map<EntityId, double> weights;
  for (const auto& c : s.candidates) {
    ids.push_back(c.api);
    if (options.weight_by_score) weights[c.api] = c.score > 0 ? c.score : 1e-9;
  }
  s.tree = build_tree(build_attribute_table(build_subgraph(ids, graph), graph, weights), options.strategy);
  if (s.tree.node(DecisionTree::root()).leaf) detail::finish(s);
  return s;
}

/// Retrieval, expansion, subgraph, table and tree for a query.
inline DialogueSession start_session(std::string query, const KnowledgeGraph& graph, const Retriever& retriever,
                                     const DialogueOptions& options = {}) {
  if (text::collapse_whitespace(query).empty()) throw Error(ErrorCode::BlankQuery, "query is blank");
  auto candidates = search_candidates(query, options.n, retriever);
  if (candidates.empty()) throw Error(ErrorCode::NoCandidates, query);
  if (options.expand_shared_events) candidates = expand_by_shared_events(candidates, graph);
  return start_session_with(std::move(query), std::move(candidates), graph, options);
}

inline ClarificationQuestion next_question(const DialogueSession& s) {
  if (s.state == SessionState::Finished) throw Error(ErrorCode::SessionFinished, "session already finished");
  const auto& node = s.tree.node(s.current);
  const auto& col = s.tree.table().columns()[node.column];
  ClarificationQuestion q;
  q.aspect = col.name;
  q.text = question_text(col.kind, col.subject);
  std::size_t round = s.transcript.size() + 1;
  for (std::size_t k = 0; k < node.edges.size(); ++k) {
    const auto& e = node.edges[k];
    q.options.push_back({"r" + std::to_string(round) + "." + std::to_string(k + 1),
                         e.value ? *e.value : std::string(kNullOptionLabel), s.tree.node(e.child).rows.size(),
                         !e.value.has_value()});
  }
  return q;
}

inline DialogueSession& apply_selection(DialogueSession& s, std::string_view option_id) {
  auto q = next_question(s);
  for (std::size_t k = 0; k < q.options.size(); ++k) {
    if (q.options[k].id != option_id) continue;
    std::size_t child = s.tree.node(s.current).edges[k].child;
    s.transcript.push_back({q, q.options[k].id, q.options[k].label, s.current, k});
    s.current = child;
    if (s.tree.node(child).leaf) detail::finish(s);
    return s;
  }
  throw Error(ErrorCode::UnknownOption, std::string(option_id));
}

/// Ends the dialogue; the result is every API left in the current sub-tree,
/// in candidate order. Idempotent.
inline std::vector<EntityId> stop(DialogueSession& s) {
  detail::finish(s);
  return s.results;
}

/// True when the sub-tree below `node` contains `api`.
inline bool subtree_contains(const DialogueSession& s, std::size_t node, EntityId api) {
  for (auto r : s.tree.node(node).rows)
    if (s.tree.table().rows()[r].api == api) return true;
  return false;
}

}  // namespace apiclarify
