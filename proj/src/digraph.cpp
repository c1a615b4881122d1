#include "maderkit/digraph.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <sstream>

namespace maderkit {

namespace {

std::string arc_str(int tail, int head) {
  return "(" + std::to_string(tail) + "," + std::to_string(head) + ")";
}

}  // namespace

Digraph::Digraph(int order) : order_(order) {
  if (order < 0 || order > kMaxOrder) {
    throw DigraphError("digraph order " + std::to_string(order) + " outside [0, 64]");
  }
  out_.assign(static_cast<std::size_t>(order), 0);
  in_.assign(static_cast<std::size_t>(order), 0);
}

std::size_t Digraph::arc_count() const noexcept {
  std::size_t m = 0;
  for (auto row : out_) m += static_cast<std::size_t>(std::popcount(row));
  return m;
}

std::vector<Arc> Digraph::arcs() const {
  std::vector<Arc> out;
  out.reserve(arc_count());
  for (int u = 0; u < order_; ++u) {
    for (int v : out_neighbors(u)) out.push_back({u, v});
  }
  return out;
}

void Digraph::add_arc(int tail, int head) {
  if (tail < 0 || head < 0 || tail >= order_ || head >= order_) {
    throw DigraphError("arc " + arc_str(tail, head) + " has an endpoint out of range");
  }
  if (tail == head) throw DigraphError("loop " + arc_str(tail, head));
  out_[tail] |= std::uint64_t{1} << head;
  in_[head] |= std::uint64_t{1} << tail;
}

void Digraph::remove_arc(int tail, int head) {
  out_[tail] &= ~(std::uint64_t{1} << head);
  in_[head] &= ~(std::uint64_t{1} << tail);
}

Digraph make_digraph(int order, std::span<const Arc> arcs) {
  Digraph d(order);
  for (const Arc& a : arcs) d.add_arc(a.tail, a.head);
  return d;
}

Digraph make_digraph(int order, std::initializer_list<Arc> arcs) {
  return make_digraph(order, std::span<const Arc>(arcs.begin(), arcs.size()));
}

Digraph reverse(const Digraph& d) {
  Digraph r(d.order());
  for (const Arc& a : d.arcs()) r.add_arc(a.head, a.tail);
  return r;
}

Digraph biorient(int order, std::span<const Edge> edges) {
  Digraph d(order);
  for (const Edge& e : edges) {
    d.add_arc(e.u, e.v);
    d.add_arc(e.v, e.u);
  }
  return d;
}

Digraph biorient(int order, std::initializer_list<Edge> edges) {
  return biorient(order, std::span<const Edge>(edges.begin(), edges.size()));
}

Digraph complete_biorientation(int n) {
  Digraph d(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) d.add_arc(u, v);
  return d;
}

Digraph directed_cycle(int n) {
  Digraph d(n);
  for (int i = 0; i < n && n >= 2; ++i) d.add_arc(i, (i + 1) % n);
  return d;
}

Digraph directed_path(int n) {
  Digraph d(n);
  for (int i = 0; i + 1 < n; ++i) d.add_arc(i, i + 1);
  return d;
}

Digraph disjoint_union(const Digraph& a, const Digraph& b) {
  Digraph d(a.order() + b.order());
  for (const Arc& x : a.arcs()) d.add_arc(x.tail, x.head);
  for (const Arc& x : b.arcs()) d.add_arc(x.tail + a.order(), x.head + a.order());
  return d;
}

Digraph permute(const Digraph& d, std::span<const int> perm) {
  Digraph p(d.order());
  for (const Arc& a : d.arcs()) p.add_arc(perm[a.tail], perm[a.head]);
  return p;
}

UndirectedGraph::UndirectedGraph(int order) : order_(order) {
  if (order < 0 || order > Digraph::kMaxOrder) {
    throw DigraphError("graph order " + std::to_string(order) + " outside [0, 64]");
  }
  adj_.assign(static_cast<std::size_t>(order), 0);
}

std::size_t UndirectedGraph::edge_count() const noexcept {
  std::size_t m = 0;
  for (auto row : adj_) m += static_cast<std::size_t>(std::popcount(row));
  return m / 2;
}

std::vector<Edge> UndirectedGraph::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < order_; ++u)
    for (int v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

void UndirectedGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= order_ || v >= order_ || u == v) {
    throw DigraphError("bad edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
  }
  adj_[u] |= std::uint64_t{1} << v;
  adj_[v] |= std::uint64_t{1} << u;
}

UndirectedGraph underlying_graph(const Digraph& d) {
  UndirectedGraph g(d.order());
  for (const Arc& a : d.arcs()) g.add_edge(a.tail, a.head);
  return g;
}

InducedSubdigraph induced(const Digraph& d, VertexSet x) {
  if (!x.subset_of(d.vertices())) throw DigraphError("induced: vertex set out of range");
  InducedSubdigraph sub;
  sub.from_parent.assign(static_cast<std::size_t>(d.order()), -1);
  for (int v : x) {
    sub.from_parent[v] = static_cast<int>(sub.to_parent.size());
    sub.to_parent.push_back(v);
  }
  sub.graph = Digraph(static_cast<int>(sub.to_parent.size()));
  for (int v : x)
    for (int w : d.out_neighbors(v) & x) sub.graph.add_arc(sub.from_parent[v], sub.from_parent[w]);
  return sub;
}

Digraph delete_vertex(const Digraph& d, int v) {
  return induced(d, d.vertices() - VertexSet::single(v)).graph;
}

VertexSet reachable(const Digraph& d, VertexSet sources, VertexSet allowed) {
  VertexSet seen = sources & allowed;
  VertexSet frontier = seen;
  while (!frontier.empty()) {
    VertexSet next;
    for (int v : frontier) next |= d.out_neighbors(v);
    next = (next & allowed) - seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

VertexSet reaching(const Digraph& d, VertexSet targets, VertexSet allowed) {
  VertexSet seen = targets & allowed;
  VertexSet frontier = seen;
  while (!frontier.empty()) {
    VertexSet next;
    for (int v : frontier) next |= d.in_neighbors(v);
    next = (next & allowed) - seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

StrongComponents strong_components(const Digraph& d, VertexSet within) {
  // Tarjan; order <= 64 keeps the recursion shallow.
  const int n = d.order();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<int> stack;
  VertexSet on_stack;
  int counter = 0;
  std::vector<VertexSet> reverse_topo;

  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (int w : d.out_neighbors(v) & within) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.contains(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      VertexSet comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.insert(w);
      } while (w != v);
      reverse_topo.push_back(comp);
    }
  };
  for (int v : within & d.vertices())
    if (index[v] < 0) visit(v);

  StrongComponents sc;
  sc.components.assign(reverse_topo.rbegin(), reverse_topo.rend());
  sc.component_of.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < sc.components.size(); ++c)
    for (int v : sc.components[c]) sc.component_of[v] = static_cast<int>(c);
  return sc;
}

StrongComponents strong_components(const Digraph& d) { return strong_components(d, d.vertices()); }

bool is_strongly_connected(const Digraph& d, VertexSet within) {
  within &= d.vertices();
  if (within.empty()) return true;
  VertexSet root = VertexSet::single(within.first());
  return reachable(d, root, within) == within && reaching(d, root, within) == within;
}

bool is_strongly_connected(const Digraph& d) { return is_strongly_connected(d, d.vertices()); }

namespace {

// Max number of internally disjoint s->t dipaths, stopping once `cap` is
// reached. Vertex splitting: node 2v is v_in, 2v+1 is v_out.
int disjoint_dipaths(const Digraph& d, int s, int t, int cap) {
  const int n = d.order();
  const int nodes = 2 * n;
  std::vector<std::vector<int>> cap_m(nodes, std::vector<int>(nodes, 0));
  for (int v = 0; v < n; ++v) cap_m[2 * v][2 * v + 1] = (v == s || v == t) ? cap : 1;
  for (const Arc& a : d.arcs()) cap_m[2 * a.tail + 1][2 * a.head] = 1;
  const int source = 2 * s + 1;
  const int sink = 2 * t;
  int flow = 0;
  while (flow < cap) {
    std::vector<int> parent(nodes, -1);
    parent[source] = source;
    std::vector<int> queue{source};
    for (std::size_t qi = 0; qi < queue.size() && parent[sink] < 0; ++qi) {
      int x = queue[qi];
      for (int y = 0; y < nodes; ++y) {
        if (parent[y] < 0 && cap_m[x][y] > 0) {
          parent[y] = x;
          queue.push_back(y);
        }
      }
    }
    if (parent[sink] < 0) break;
    for (int y = sink; y != source; y = parent[y]) {
      cap_m[parent[y]][y] -= 1;
      cap_m[y][parent[y]] += 1;
    }
    ++flow;
  }
  return flow;
}

}  // namespace

bool is_k_strongly_connected(const Digraph& d, int k) {
  if (k < 1) throw std::invalid_argument("is_k_strongly_connected: k must be >= 1");
  const int n = d.order();
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || d.has_arc(u, v)) continue;
      if (disjoint_dipaths(d, u, v, k) < k) return false;
    }
  }
  return true;
}

bool is_k_strongly_connected_brute(const Digraph& d, int k) {
  if (k < 1) throw std::invalid_argument("is_k_strongly_connected: k must be >= 1");
  const int n = d.order();
  if (n > 20) throw std::invalid_argument("is_k_strongly_connected_brute: order too large");
  const std::uint64_t full = VertexSet::range(n).bits();
  for (std::uint64_t s = 0; s <= full; ++s) {
    if (std::popcount(s) >= k) continue;
    if (!is_strongly_connected(d, VertexSet(full & ~s))) return false;
  }
  return true;
}

VertexSet on_some_dicycle(const Digraph& d, VertexSet within) {
  VertexSet out;
  for (VertexSet comp : strong_components(d, within).components)
    if (comp.size() >= 2) out |= comp;
  return out;
}

bool is_acyclic(const Digraph& d, VertexSet within) {
  VertexSet left = within & d.vertices();
  // Kahn: repeatedly strip sources of D[left].
  bool progress = true;
  while (!left.empty() && progress) {
    progress = false;
    for (int v : left) {
      if (!d.in_neighbors(v).intersects(left)) {
        left.erase(v);
        progress = true;
      }
    }
  }
  return left.empty();
}

std::optional<Dipath> shortest_dipath(const Digraph& d, VertexSet from, VertexSet to,
                                      VertexSet forbidden) {
  const VertexSet all = d.vertices();
  from = (from & all) - forbidden;
  to = (to & all) - forbidden;
  if (from.empty() || to.empty()) return std::nullopt;
  if (from.intersects(to)) return Dipath{(from & to).first()};
  const VertexSet interior = all - forbidden - from - to;
  std::vector<int> parent(static_cast<std::size_t>(d.order()), -1);
  std::vector<int> queue = from.to_vector();
  VertexSet seen = from;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int w = queue[qi];
    for (int y : d.out_neighbors(w)) {
      if (to.contains(y)) {
        Dipath path{y};
        for (int z = w; z >= 0; z = parent[z]) path.push_back(z);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (interior.contains(y) && !seen.contains(y)) {
        seen.insert(y);
        parent[y] = w;
        queue.push_back(y);
      }
    }
  }
  return std::nullopt;
}

std::optional<Dipath> find_dicycle_through(const Digraph& d, int v, VertexSet within) {
  if (!within.contains(v)) return std::nullopt;
  std::vector<int> parent(static_cast<std::size_t>(d.order()), -1);
  std::vector<int> queue{v};
  VertexSet seen = VertexSet::single(v);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int w = queue[qi];
    if (w != v && d.has_arc(w, v)) {
      Dipath cycle;
      for (int z = w; z >= 0; z = parent[z]) cycle.push_back(z);
      std::reverse(cycle.begin(), cycle.end());
      return cycle;
    }
    for (int y : (d.out_neighbors(w) & within) - seen) {
      seen.insert(y);
      parent[y] = w;
      queue.push_back(y);
    }
  }
  return std::nullopt;
}

std::optional<Dipath> find_dicycle_through(const Digraph& d, int v) {
  return find_dicycle_through(d, v, d.vertices());
}

bool is_dipath(const Digraph& d, const Dipath& path) {
  if (path.empty()) return false;
  VertexSet seen;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const int v = path[i];
    if (v < 0 || v >= d.order() || seen.contains(v)) return false;
    seen.insert(v);
    if (i > 0 && !d.has_arc(path[i - 1], v)) return false;
  }
  return true;
}

bool is_dicycle(const Digraph& d, const Dipath& cycle) {
  return cycle.size() >= 2 && is_dipath(d, cycle) && d.has_arc(cycle.back(), cycle.front());
}

int min_out_degree(const Digraph& d) {
  int best = d.order() == 0 ? 0 : d.order();
  for (int v = 0; v < d.order(); ++v) best = std::min(best, d.out_degree(v));
  return best;
}

int min_in_degree(const Digraph& d) {
  int best = d.order() == 0 ? 0 : d.order();
  for (int v = 0; v < d.order(); ++v) best = std::min(best, d.in_degree(v));
  return best;
}

Digraph parse_digraph(std::istream& in) {
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw DigraphError("digraph text: missing header line \"n m\"");
  std::istringstream header(lines[0]);
  long long n = -1, m = -1;
  std::string extra;
  if (!(header >> n >> m) || (header >> extra) || n < 0 || m < 0) {
    throw DigraphError("digraph text: bad header \"" + lines[0] + "\"");
  }
  if (static_cast<long long>(lines.size()) - 1 != m) {
    throw DigraphError("digraph text: header announces " + std::to_string(m) + " arcs, found " +
                       std::to_string(lines.size() - 1));
  }
  Digraph d(static_cast<int>(n));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || (row >> extra)) {
      throw DigraphError("digraph text: bad arc line \"" + lines[i] + "\"");
    }
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw DigraphError("arc " + arc_str(static_cast<int>(u), static_cast<int>(v)) +
                         " has an endpoint out of range");
    }
    d.add_arc(static_cast<int>(u), static_cast<int>(v));
  }
  return d;
}

Digraph parse_digraph(const std::string& text) {
  std::istringstream in(text);
  return parse_digraph(in);
}

Digraph read_digraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DigraphError("cannot open digraph file " + path);
  return parse_digraph(in);
}

std::string to_text(const Digraph& d) {
  std::string out = std::to_string(d.order()) + " " + std::to_string(d.arc_count()) + "\n";
  for (const Arc& a : d.arcs()) out += std::to_string(a.tail) + " " + std::to_string(a.head) + "\n";
  return out;
}

}  // namespace maderkit
