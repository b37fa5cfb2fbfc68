// Transitive closure of CONTAINS relation graphs and containment-cycle
// detection. Closure is per document; CONTAINS is the only relation type, so
// composition is plain transitivity.

#ifndef CTE_CLOSURE_HPP
#define CTE_CLOSURE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cte/annotation.hpp"

namespace cte {

// Directed graph over entity ids; an edge (a, b) asserts a CONTAINS b.
struct RelationGraph {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;

  bool operator==(const RelationGraph&) const = default;

  void add_edge(const std::string& from, const std::string& to) {
    if (from == to)
      throw Error("self-loop " + from + " CONTAINS " + from + " is not representable");
    nodes.insert(from);
    nodes.insert(to);
    edges.emplace(from, to);
  }

  static RelationGraph from_document(const Document& doc) {
    RelationGraph g;
    for (const TimexEntity& t : doc.timexes) g.nodes.insert(t.id);
    for (const EventEntity& e : doc.events) g.nodes.insert(e.id);
    for (const ContainerRelation& r : doc.relations) g.add_edge(r.source, r.target);
    return g;
  }
};

struct ConsistencyResult {
  bool consistent = true;
  // Present iff inconsistent: node sequence v0, v1, ..., vk-1 such that every
  // vi CONTAINS v(i+1 mod k) edge exists. Length >= 2.
  std::optional<std::vector<std::string>> witness_cycle;
};

class InconsistencyError : public Error {
 public:
  InconsistencyError(const std::string& what, ConsistencyResult result)
      : Error(what), result_(std::move(result)) {}
  const ConsistencyResult& result() const { return result_; }

 private:
  ConsistencyResult result_;
};

namespace detail {

// Dense-index view of a RelationGraph; ids sorted so traversal order (and
// therefore every witness or closure result) is deterministic.
struct IndexedGraph {
  std::vector<std::string> ids;
  std::map<std::string, int> index;
  std::vector<std::vector<int>> adj;

  explicit IndexedGraph(const RelationGraph& g) {
    ids.assign(g.nodes.begin(), g.nodes.end());
    for (int i = 0; i < static_cast<int>(ids.size()); ++i) index[ids[i]] = i;
    adj.resize(ids.size());
    for (const auto& [from, to] : g.edges) adj[index.at(from)].push_back(index.at(to));
    for (auto& succ : adj) std::sort(succ.begin(), succ.end());
  }
};

// Reachability sets via DFS from every node. Quadratic, fine at per-document
// scale (tens of relations per note).
inline std::vector<std::vector<bool>> reachability(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  std::vector<int> work;
  for (int s = 0; s < n; ++s) {
    work.assign(adj[s].begin(), adj[s].end());
    while (!work.empty()) {
      const int v = work.back();
      work.pop_back();
      if (reach[s][v]) continue;
      reach[s][v] = true;
      for (int w : adj[v])
        if (!reach[s][w]) work.push_back(w);
    }
  }
  return reach;
}

}  // namespace detail

// Detects directed cycles. When inconsistent, returns one concrete cycle
// whose edges all exist in the graph; deterministic for a given graph.
inline ConsistencyResult check_consistency(const RelationGraph& graph) {
  const detail::IndexedGraph ig(graph);
  const int n = static_cast<int>(ig.ids.size());

  // Colors: 0 unvisited, 1 on current DFS path, 2 done.
  std::vector<int> color(n, 0), parent(n, -1);
  struct Frame {
    int vertex;
    std::size_t next_child;
  };
  std::vector<Frame> frames;

  for (int root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    frames.push_back({root, 0});
    color[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next_child < ig.adj[f.vertex].size()) {
        const int child = ig.adj[f.vertex][f.next_child++];
        if (color[child] == 0) {
          color[child] = 1;
          parent[child] = f.vertex;
          frames.push_back({child, 0});
        } else if (color[child] == 1) {
          // Back edge: walk the path child -> ... -> f.vertex.
          std::vector<std::string> cycle;
          for (int v = f.vertex; v != child; v = parent[v]) cycle.push_back(ig.ids[v]);
          cycle.push_back(ig.ids[child]);
          std::reverse(cycle.begin(), cycle.end());
          return {false, std::move(cycle)};
        }
      } else {
        color[f.vertex] = 2;
        frames.pop_back();
      }
    }
  }
  return {true, std::nullopt};
}

// Transitive closure: the unique smallest edge superset closed under
// a CONTAINS b and b CONTAINS c implying a CONTAINS c. Input edges are
// preserved. Throws InconsistencyError (with a cycle witness) if the graph
// has a directed cycle, since closing it would assert self-containment.
inline RelationGraph close_contains(const RelationGraph& graph) {
  ConsistencyResult consistency = check_consistency(graph);
  if (!consistency.consistent) {
    std::string path;
    for (const std::string& id : *consistency.witness_cycle) {
      if (!path.empty()) path += " -> ";
      path += id;
    }
    throw InconsistencyError("CONTAINS graph has a cycle: " + path, std::move(consistency));
  }

  const detail::IndexedGraph ig(graph);
  const auto reach = detail::reachability(ig.adj);

  RelationGraph out;
  out.nodes = graph.nodes;
  for (std::size_t s = 0; s < reach.size(); ++s)
    for (std::size_t t = 0; t < reach.size(); ++t)
      if (reach[s][t]) out.edges.emplace(ig.ids[s], ig.ids[t]);
  return out;
}

// Closure for possibly-cyclic system output: the reachability relation minus
// the diagonal, i.e. the closure of the strongly-connected-component
// condensation expanded back to entity pairs. Self-containments are never
// emitted; input edges between distinct entities are preserved. Equals
// close_contains exactly on consistent graphs.
inline RelationGraph close_contains_condensed(const RelationGraph& graph) {
  const detail::IndexedGraph ig(graph);
  const auto reach = detail::reachability(ig.adj);

  RelationGraph out;
  out.nodes = graph.nodes;
  for (std::size_t s = 0; s < reach.size(); ++s)
    for (std::size_t t = 0; t < reach.size(); ++t)
      if (s != t && reach[s][t]) out.edges.emplace(ig.ids[s], ig.ids[t]);
  return out;
}

}  // namespace cte

#endif  // CTE_CLOSURE_HPP
