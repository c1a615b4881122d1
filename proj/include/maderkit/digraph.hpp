#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maderkit/vertex_set.hpp"

namespace maderkit {

struct Arc {
  int tail = 0;
  int head = 0;
  auto operator<=>(const Arc&) const = default;
};

struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// A dipath (or, for cycles, the cyclic vertex order without repeating the
/// first vertex) as a vertex sequence in traversal order.
using Dipath = std::vector<int>;

/// Raised for malformed digraph input: loops, out-of-range endpoints,
/// unparsable text.
class DigraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Loop-free digraph on vertices 0..order-1 with bitset adjacency rows.
/// Digons are allowed, parallel arcs are not.
class Digraph {
 public:
  static constexpr int kMaxOrder = 64;

  Digraph() = default;
  explicit Digraph(int order);

  int order() const noexcept { return order_; }
  VertexSet vertices() const noexcept { return VertexSet::range(order_); }
  std::size_t arc_count() const noexcept;

  bool has_arc(int tail, int head) const { return (out_[tail] >> head) & 1U; }
  VertexSet out_neighbors(int v) const { return VertexSet(out_[v]); }
  VertexSet in_neighbors(int v) const { return VertexSet(in_[v]); }
  int out_degree(int v) const { return out_neighbors(v).size(); }
  int in_degree(int v) const { return in_neighbors(v).size(); }

  /// Arcs in (tail, head) lexicographic order.
  std::vector<Arc> arcs() const;

  /// Throws DigraphError on loops or out-of-range endpoints; adding an
  /// existing arc is a no-op.
  void add_arc(int tail, int head);
  void remove_arc(int tail, int head);

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  int order_ = 0;
  std::vector<std::uint64_t> out_;
  std::vector<std::uint64_t> in_;
};

Digraph make_digraph(int order, std::span<const Arc> arcs);
Digraph make_digraph(int order, std::initializer_list<Arc> arcs);

Digraph reverse(const Digraph& d);
/// Each undirected edge becomes a digon.
Digraph biorient(int order, std::span<const Edge> edges);
Digraph biorient(int order, std::initializer_list<Edge> edges);

Digraph complete_biorientation(int n);
Digraph directed_cycle(int n);
Digraph directed_path(int n);
/// Disjoint union; vertices of `b` are shifted by a.order().
Digraph disjoint_union(const Digraph& a, const Digraph& b);
/// Relabels vertex v as perm[v].
Digraph permute(const Digraph& d, std::span<const int> perm);

/// Simple undirected graph with bitset adjacency.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(int order);

  int order() const noexcept { return order_; }
  bool has_edge(int u, int v) const { return (adj_[u] >> v) & 1U; }
  VertexSet neighbors(int v) const { return VertexSet(adj_[v]); }
  int degree(int v) const { return neighbors(v).size(); }
  std::size_t edge_count() const noexcept;
  std::vector<Edge> edges() const;
  void add_edge(int u, int v);

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

 private:
  int order_ = 0;
  std::vector<std::uint64_t> adj_;
};

UndirectedGraph underlying_graph(const Digraph& d);

struct InducedSubdigraph {
  Digraph graph;
  /// New index -> index in the parent digraph.
  std::vector<int> to_parent;
  /// Parent index -> new index, or -1 when the vertex was dropped.
  std::vector<int> from_parent;
};

/// D[X], vertices renumbered in ascending parent order.
InducedSubdigraph induced(const Digraph& d, VertexSet x);
Digraph delete_vertex(const Digraph& d, int v);

struct StrongComponents {
  /// Component id per vertex; ids follow a topological order of the
  /// condensation (arcs between components go from lower to higher id).
  std::vector<int> component_of;
  std::vector<VertexSet> components;

  std::size_t count() const { return components.size(); }
};

StrongComponents strong_components(const Digraph& d);
/// Strong components of D[within]; vertices outside `within` get id -1.
StrongComponents strong_components(const Digraph& d, VertexSet within);

/// The empty digraph counts as strongly connected.
bool is_strongly_connected(const Digraph& d);
bool is_strongly_connected(const Digraph& d, VertexSet within);

/// Menger-style test: every non-adjacent ordered pair needs k internally
/// disjoint dipaths.
bool is_k_strongly_connected(const Digraph& d, int k);
/// Literal test over all deletion sets of size < k.
bool is_k_strongly_connected_brute(const Digraph& d, int k);

/// Vertices reachable from `sources` by dipaths inside `allowed`
/// (sources outside `allowed` are ignored).
VertexSet reachable(const Digraph& d, VertexSet sources, VertexSet allowed);
VertexSet reaching(const Digraph& d, VertexSet targets, VertexSet allowed);

/// Vertices lying on some dicycle of D[within].
VertexSet on_some_dicycle(const Digraph& d, VertexSet within);
bool is_acyclic(const Digraph& d, VertexSet within);

/// Shortest (X,Y)-dipath that avoids `forbidden` and whose interior avoids
/// X and Y. When X and Y share an allowed vertex the single-vertex path on
/// the smallest such vertex is returned. Ties between shortest paths go to
/// the lexicographically smallest vertex sequence.
std::optional<Dipath> shortest_dipath(const Digraph& d, VertexSet from, VertexSet to,
                                      VertexSet forbidden = {});

/// Shortest dicycle through v inside D[within] (v first), if any.
std::optional<Dipath> find_dicycle_through(const Digraph& d, int v);
std::optional<Dipath> find_dicycle_through(const Digraph& d, int v, VertexSet within);

/// Consecutive vertices adjacent and all vertices distinct.
bool is_dipath(const Digraph& d, const Dipath& path);
/// Cyclic closure also checked; at least two vertices.
bool is_dicycle(const Digraph& d, const Dipath& cycle);

int min_out_degree(const Digraph& d);
int min_in_degree(const Digraph& d);

/// Text format: "n m" then m lines "u v". Lines starting with '#' are
/// ignored.
Digraph parse_digraph(std::istream& in);
Digraph parse_digraph(const std::string& text);
Digraph read_digraph_file(const std::string& path);
std::string to_text(const Digraph& d);

}  // namespace maderkit
