#pragma once

// Independent reference implementations used to cross-check the library.
// Nothing here calls into the tree-induction or metric code under test.

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <apiclarify/apiclarify.hpp>

namespace apiclarify::oracle {

/// Random table with up to `max_rows` rows, `max_cols` columns and
/// `symbols` distinct values per column plus null. Some cells hold two values.
inline AttributeTable random_table(std::mt19937& rng, std::size_t max_rows = 8, std::size_t max_cols = 6,
                                   std::size_t symbols = 4) {
  std::uniform_int_distribution<std::size_t> nrows(1, max_rows), ncols(1, max_cols), sym(0, symbols);
  std::uniform_int_distribution<int> pct(0, 99);
  std::size_t rows = nrows(rng), cols = ncols(rng);
  std::vector<Column> columns;
  for (std::size_t c = 0; c < cols; ++c) {
    Column col;
    col.kind = c == 0 ? FunctionalRelationKind::ActHasEvent : FunctionalRelationKind::HasStatus;
    col.subject = c == 0 ? "" : "o" + std::to_string(c);
    col.name = c == 0 ? std::string(kActionColumn) : col.subject + "#Has Status";
    columns.push_back(col);
  }
  // Shuffle so column order is not name order.
  std::shuffle(columns.begin(), columns.end(), rng);
  std::vector<AttributeTable::Row> out_rows;
  std::vector<std::vector<std::set<std::string>>> cells;
  for (std::size_t r = 0; r < rows; ++r) {
    out_rows.push_back({EntityId{static_cast<std::uint32_t>(r)}, "api" + std::to_string(r), 1.0, ""});
    std::vector<std::set<std::string>> row;
    for (std::size_t c = 0; c < cols; ++c) {
      std::set<std::string> cell;
      auto v = sym(rng);
      if (v > 0) cell.insert("v" + std::to_string(v));
      if (v > 0 && pct(rng) < 10) cell.insert("v" + std::to_string(sym(rng) % symbols + 1));
      row.push_back(cell);
    }
    cells.push_back(row);
  }
  return AttributeTable(out_rows, columns, cells);
}

/// Group key a row takes for a column: its smallest value, or null.
inline std::optional<std::string> key(const AttributeTable& t, std::size_t row, std::size_t col) {
  const auto& cell = t.cell(row, col);
  if (cell.empty()) return std::nullopt;
  return *cell.begin();
}

inline double plogp_sum(const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w;
  double h = 0;
  for (double w : weights)
    if (w > 0) h -= (w / total) * std::log2(w / total);
  return h;
}

struct Scores {
  double gain = 0;
  double split = 0;
  std::size_t groups = 0;
};

/// Gain and split information of `col` over `rows`, evaluated directly.
inline Scores scores(const AttributeTable& t, const std::vector<std::size_t>& rows, std::size_t col) {
  std::map<std::optional<std::string>, std::vector<double>> groups;
  std::vector<double> all;
  for (auto r : rows) {
    groups[key(t, r, col)].push_back(t.rows()[r].weight);
    all.push_back(t.rows()[r].weight);
  }
  double total = 0;
  for (double w : all) total += w;
  double expected = 0;
  std::vector<double> group_weights;
  for (const auto& [k, ws] : groups) {
    double gw = 0;
    for (double w : ws) gw += w;
    expected += gw / total * plogp_sum(ws);
    group_weights.push_back(gw);
  }
  return {plogp_sum(all) - expected, plogp_sum(group_weights), groups.size()};
}

/// Brute-force split choice: scan every available column, keep the best by
/// the strategy's criterion; equal scores go to the smaller column name.
inline std::optional<std::size_t> choose(const AttributeTable& t, const std::vector<std::size_t>& rows,
                                         const std::set<std::size_t>& available, TreeStrategy strategy) {
  std::optional<std::size_t> best;
  double best_score = -1;
  for (auto c : available) {
    auto s = scores(t, rows, c);
    if (s.groups < 2) continue;
    if (strategy == TreeStrategy::C45 && s.split <= 0) continue;
    double v = strategy == TreeStrategy::ID3 ? s.gain : s.gain / s.split;
    bool better = !best || v > best_score + 1e-12 ||
                  (std::abs(v - best_score) <= 1e-12 && t.columns()[c].name < t.columns()[*best].name);
    if (better) {
      best = c;
      best_score = v;
    }
  }
  return best;
}

/// Walks `tree` and checks every node against the brute-force choice, the
/// partition property and path non-repetition. Returns the first problem.
inline std::optional<std::string> check_tree(const DecisionTree& tree, TreeStrategy strategy) {
  const auto& t = tree.table();
  std::set<std::size_t> all_cols;
  for (std::size_t c = 0; c < t.column_count(); ++c) all_cols.insert(c);
  std::vector<int> seen(t.row_count(), 0);
  std::optional<std::string> problem;

  auto walk = [&](auto&& self, std::size_t node, std::set<std::size_t> available) -> void {
    if (problem) return;
    const auto& n = tree.node(node);
    bool identical = true;
    for (auto r : n.rows) identical &= t.rows()[r].signature == t.rows()[n.rows.front()].signature;
    std::optional<std::size_t> want;
    if (n.rows.size() > 1 && !identical && !available.empty()) want = choose(t, n.rows, available, strategy);
    if (n.leaf) {
      if (want) problem = "node " + std::to_string(node) + " is a leaf but column " + t.columns()[*want].name + " splits it";
      for (auto r : n.rows) ++seen[r];
      return;
    }
    if (!want || *want != n.column) {
      problem = "node " + std::to_string(node) + " split on " + t.columns()[n.column].name + ", expected " +
                (want ? t.columns()[*want].name : std::string("a leaf"));
      return;
    }
    if (!available.count(n.column)) {
      problem = "column repeated on a path";
      return;
    }
    available.erase(n.column);
    std::size_t child_rows = 0;
    for (const auto& e : n.edges) {
      const auto& child = tree.node(e.child);
      child_rows += child.rows.size();
      if (child.depth != n.depth + 1) problem = "bad depth";
      for (auto r : child.rows)
        if (key(t, r, n.column) != e.value) problem = "row on the wrong edge";
      self(self, e.child, available);
    }
    if (child_rows != n.rows.size()) problem = "children do not partition their parent";
  };
  walk(walk, DecisionTree::root(), all_cols);
  if (problem) return problem;
  for (std::size_t r = 0; r < seen.size(); ++r)
    if (seen[r] != 1) return "row " + std::to_string(r) + " appears in " + std::to_string(seen[r]) + " leaves";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Retrieval metrics, straight from their definitions.

inline std::vector<std::string> dedup_names(const std::vector<std::string>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) {
    auto s = fqn::strip_params(x);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

inline bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

inline double precision(const std::vector<std::string>& rec, const std::vector<std::string>& truth) {
  auto r = dedup_names(rec), g = dedup_names(truth);
  if (r.empty()) return 0;
  double hits = 0;
  for (const auto& x : r) hits += contains(g, x);
  return hits / static_cast<double>(r.size());
}

inline double recall(const std::vector<std::string>& rec, const std::vector<std::string>& truth) {
  auto r = dedup_names(rec), g = dedup_names(truth);
  if (g.empty()) return 0;
  double hits = 0;
  for (const auto& x : g) hits += contains(r, x);
  return hits / static_cast<double>(g.size());
}

inline double reciprocal_rank(const std::vector<std::string>& rec, const std::vector<std::string>& truth) {
  auto r = dedup_names(rec), g = dedup_names(truth);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (contains(g, r[i])) return 1.0 / static_cast<double>(i + 1);
  return 0;
}

inline double average_precision(const std::vector<std::string>& rec, const std::vector<std::string>& truth) {
  auto r = dedup_names(rec), g = dedup_names(truth);
  double sum = 0, hits = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!contains(g, r[i])) continue;
    hits += 1;
    sum += hits / static_cast<double>(i + 1);
  }
  return hits > 0 ? sum / hits : 0;
}

}  // namespace apiclarify::oracle
