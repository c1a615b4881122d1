#include "maderkit/witness.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <sstream>

#include "json.hpp"

namespace maderkit {

namespace {

using nlohmann::json;

VertexSet set_of(const Dipath& p) { return VertexSet::of(p); }

int index_of(const Dipath& p, int v) {
  const auto it = std::find(p.begin(), p.end(), v);
  return it == p.end() ? -1 : static_cast<int>(it - p.begin());
}

Dipath slice(const Dipath& p, int from, int to) {
  return Dipath(p.begin() + from, p.begin() + to + 1);
}

Dipath reversed(const Dipath& p) { return Dipath(p.rbegin(), p.rend()); }

// p ends where q starts.
Dipath join(Dipath p, const Dipath& q) {
  p.insert(p.end(), q.begin() + 1, q.end());
  return p;
}

// Along cycle c from a to b, both included.
Dipath arc_of_cycle(const Dipath& c, int a, int b) {
  const int n = static_cast<int>(c.size());
  int i = index_of(c, a);
  Dipath out{a};
  while (c[i] != b) {
    i = (i + 1) % n;
    out.push_back(c[i]);
  }
  return out;
}

// Closed walk whose last vertex repeats the first.
Dipath close_cycle(Dipath walk) {
  walk.pop_back();
  return walk;
}

Dipath map_path(const Dipath& p, const std::vector<int>& to_parent) {
  Dipath out;
  out.reserve(p.size());
  for (int v : p) out.push_back(to_parent[v]);
  return out;
}

SubdivisionEmbedding lift(const SubdivisionEmbedding& e, const std::vector<int>& to_parent) {
  SubdivisionEmbedding out;
  for (int b : e.branch) out.branch.push_back(to_parent[b]);
  for (const auto& [arc, path] : e.routes) out.routes[arc] = map_path(path, to_parent);
  return out;
}

std::string set_json(VertexSet s) { return json(s.to_vector()).dump(); }

// ---------------------------------------------------------------------------
// Partition certifier

void check_partition_inputs(const Digraph& d, int x, const AcyclicColoring& c3) {
  if (x < 0 || x >= d.order()) throw std::invalid_argument("deleted vertex out of range");
  if (static_cast<int>(c3.color.size()) != d.order()) throw std::invalid_argument("colouring size mismatch");
  const VertexSet rest = d.vertices() - VertexSet::single(x);
  if (!is_strongly_connected(d, rest)) throw std::invalid_argument("D - x is not strongly connected");
  for (int i = 1; i <= 3; ++i) {
    VertexSet cls;
    for (int v : rest) {
      if (c3.color[v] < 1 || c3.color[v] > 3) throw std::invalid_argument("colour out of 1..3");
      if (c3.color[v] == i) cls.insert(v);
    }
    if (!is_acyclic(d, cls)) throw std::invalid_argument("colour class induces a dicycle");
  }
}

}  // namespace

HPartition h_partition(const Digraph& d, int x, const AcyclicColoring& c3) {
  check_partition_inputs(d, x, c3);
  HPartition p;
  p.x = x;
  const VertexSet xs = VertexSet::single(x);
  for (int v : d.vertices() - xs) {
    if (c3.color[v] == 1) p.v1.insert(v);
    if (c3.color[v] == 2) p.v2.insert(v);
    if (c3.color[v] == 3) p.v3.insert(v);
  }
  auto strong_with_x = [&](VertexSet cls) {
    const VertexSet allowed = cls | xs;
    return (reachable(d, xs, allowed) & reaching(d, xs, allowed)) - xs;
  };
  p.b1 = strong_with_x(p.v1);
  p.b2 = strong_with_x(p.v2);
  const VertexSet r1 = reachable(d, p.b1, d.vertices() - xs - p.b2);
  const VertexSet r2 = reachable(d, p.b2, d.vertices() - xs - p.b1);
  p.b1_1 = (r1 & p.v1) - p.b1;
  p.b1_2 = (r2 & p.v2) - p.b2;
  p.a1 = r1 & p.v3;
  p.a2 = r2 & p.v3;
  p.b2_1 = p.v1 - p.b1_1 - p.b1;
  p.b2_2 = p.v2 - p.b1_2 - p.b2;
  p.e = p.v3 - p.a1 - p.a2;
  p.p1 = p.b2 | p.b1_2 | p.a1 | p.e;
  p.p2 = p.b1 | p.b1_1 | p.a2;
  p.p3 = xs | p.b2_2;
  p.t0 = p.b2_1 & on_some_dicycle(d, p.b2_1 | p.p3);
  p.t1 = p.t0 - on_some_dicycle(d, p.t0 | p.e);
  p.t2 = p.t0 - p.t1;
  p.t3 = p.b2_1 - p.t0;
  p.q1 = p.p1 | p.t1;
  p.q2 = p.p2 | p.t2;
  p.q3 = p.p3 | p.t3;
  return p;
}

AcyclicColoring recolor(const HPartition& p, int order) {
  AcyclicColoring c{3, std::vector<int>(static_cast<std::size_t>(order), 0)};
  for (int v : p.q3) c.color[v] = 3;
  for (int v : p.q2) c.color[v] = 2;
  for (int v : p.q1) c.color[v] = 1;
  return c;
}

Digraph h_pattern(HPattern k) { return k == HPattern::kH1 ? pattern_h1() : pattern_h2(); }

namespace {

std::string partition_dump(const Digraph& d, const HPartition& p) {
  std::ostringstream out;
  out << to_text(d) << "# x " << p.x << "\n";
  auto line = [&](const char* name, VertexSet s) { out << "# " << name << " " << set_json(s) << "\n"; };
  line("V1", p.v1);
  line("V2", p.v2);
  line("V3", p.v3);
  line("B1", p.b1);
  line("B2", p.b2);
  line("A1", p.a1);
  line("A2", p.a2);
  line("T0", p.t0);
  return out.str();
}

// First property that fails on this partition.
std::string diagnose(const Digraph& d, const HPartition& p) {
  if (p.a1.intersects(p.a2)) return "A1 and A2 intersect";
  if (!is_acyclic(d, p.p1)) return "D[V'_1] has a dicycle";
  if (!is_acyclic(d, p.p2)) return "D[V'_2] has a dicycle";
  if (!is_acyclic(d, p.p3)) return "D[V'_3] has a dicycle";
  for (int v : p.t0) {
    if (!reachable(d, VertexSet::single(v), p.t0 | p.b2_2).intersects(p.b2_2))
      return "a T_0 vertex does not reach B^2_2 inside T_0 and B^2_2";
  }
  if (!is_acyclic(d, p.q3)) return "tilde V_3 has a dicycle";
  if (!is_acyclic(d, p.q1)) return "tilde V_1 has a dicycle";
  if (!is_acyclic(d, p.q2)) return "tilde V_2 has a dicycle";
  return "recoloured classes are acyclic";
}

// Dicycle through x and u inside D[within] as two dipaths x->u and u->x.
std::optional<std::pair<Dipath, Dipath>> cycle_via(const Digraph& d, int x, int u, VertexSet within) {
  const VertexSet forbidden = d.vertices() - within;
  auto there = shortest_dipath(d, VertexSet::single(x), VertexSet::single(u), forbidden);
  auto back = shortest_dipath(d, VertexSet::single(u), VertexSet::single(x), forbidden);
  if (!there || !back) return std::nullopt;
  Dipath cyc = *there;
  cyc.insert(cyc.end(), back->begin() + 1, back->end() - 1);
  if (!is_dicycle(d, cyc)) return std::nullopt;
  return std::make_pair(*there, *back);
}

struct Extraction {
  std::optional<SubdivisionEmbedding> embedding;
  bool p2_missing = false;
};

Extraction extract(const Digraph& d, const HPartition& p, int v, HPattern k, Trace& trace) {
  Extraction out;
  const VertexSet xs = VertexSet::single(p.x);
  const VertexSet vs = VertexSet::single(v);
  auto p1 = shortest_dipath(d, p.b1, vs, xs | p.b2);
  if (!p1) return out;
  const int u = p1->front();
  std::optional<Dipath> p2 = k == HPattern::kH1 ? shortest_dipath(d, vs, p.b2, xs | p.b1)
                                                : shortest_dipath(d, p.b2, vs, xs | p.b1);
  if (!p2) {
    out.p2_missing = true;
    return out;
  }
  const int w = k == HPattern::kH1 ? p2->back() : p2->front();
  auto cu = cycle_via(d, p.x, u, xs | p.b1);
  auto cw = cycle_via(d, p.x, w, xs | p.b2);
  if (!cu || !cw) return out;
  // Truncate both dipaths at the first vertex of P1 on P2.
  const VertexSet on_p2 = set_of(*p2);
  int cut = 0;
  while (!on_p2.contains((*p1)[cut])) ++cut;
  const int c = (*p1)[cut];
  const int at = index_of(*p2, c);
  if (cut + 1 != static_cast<int>(p1->size())) {
    trace.push_back(json{{"step", "cleanup"}, {"meet", c}}.dump());
  }
  SubdivisionEmbedding e;
  e.branch = {p.x, u, c, w};
  e.routes[{0, 1}] = cu->first;
  e.routes[{1, 0}] = cu->second;
  e.routes[{0, 3}] = cw->first;
  e.routes[{3, 0}] = cw->second;
  e.routes[{1, 2}] = slice(*p1, 0, cut);
  if (k == HPattern::kH1) {
    e.routes[{2, 3}] = slice(*p2, at, static_cast<int>(p2->size()) - 1);
  } else {
    e.routes[{3, 2}] = slice(*p2, 0, at);
  }
  const EmbeddingCheck check = verify_embedding(d, h_pattern(k), e);
  if (!check) {
    trace.push_back(json{{"step", "cleanup-failed"}, {"clause", check.clause}}.dump());
    return out;
  }
  out.embedding = std::move(e);
  return out;
}

}  // namespace

CertifyOutcome certify_h(const Digraph& d, HPattern k) {
  CertifyOutcome out;
  out.trace.push_back(
      json{{"step", "start"}, {"order", d.order()}, {"pattern", k == HPattern::kH1 ? "H1" : "H2"}}.dump());
  const DichromaticResult chi = dichromatic_number(d);
  if (chi.chi <= 3) {
    AcyclicColoring c = chi.witness;
    c.k = 3;
    out.trace.push_back(json{{"step", "coloring"}, {"chi", chi.chi}}.dump());
    out.certificate = std::move(c);
    return out;
  }
  const CriticalCore core = dicritical_subdigraph(d, 4);
  const Digraph& d0 = core.graph;
  out.trace.push_back(json{{"step", "core"}, {"order", d0.order()}, {"arcs", d0.arc_count()}}.dump());

  int retries = 0;
  int p2_fallbacks = 0;
  for (int x = 0; x < d0.order(); ++x) {
    const VertexSet rest = d0.vertices() - VertexSet::single(x);
    if (!is_strongly_connected(d0, rest)) continue;
    const InducedSubdigraph sub = induced(d0, rest);
    const auto base = acyclic_coloring_at_most(sub.graph, 3);
    if (!base) {
      throw InternalInconsistency("core minus a vertex is not 3-colourable", to_text(d0));
    }
    // Retry family: the six orders of the colour classes.
    std::array<int, 3> perm{1, 2, 3};
    do {
      AcyclicColoring c3{3, std::vector<int>(static_cast<std::size_t>(d0.order()), 0)};
      for (int i = 0; i < sub.graph.order(); ++i) c3.color[sub.to_parent[i]] = perm[base->color[i] - 1];
      const HPartition p = h_partition(d0, x, c3);
      out.trace.push_back(json{{"step", "partition"},
                               {"x", x},
                               {"B1", p.b1.size()},
                               {"B2", p.b2.size()},
                               {"A1", p.a1.size()},
                               {"A2", p.a2.size()},
                               {"E", p.e.size()},
                               {"T0", p.t0.size()}}
                              .dump());
      if (!p.a1.intersects(p.a2)) {
        const AcyclicColoring re = recolor(p, d0.order());
        const std::string why = diagnose(d0, p);
        throw InternalInconsistency(
            is_acyclic_coloring(d0, re) ? "recoloring gives an acyclic 3-colouring of a 4-dicritical digraph"
                                        : why,
            partition_dump(d0, p));
      }
      for (int v : p.a1 & p.a2) {
        Extraction ex = extract(d0, p, v, k, out.trace);
        if (ex.p2_missing) {
          ++p2_fallbacks;
          out.trace.push_back(json{{"step", "p2-fallback"}, {"x", x}, {"v", v}}.dump());
        }
        if (!ex.embedding) continue;
        SubdivisionEmbedding lifted = lift(*ex.embedding, core.to_parent);
        if (!verify_embedding(d, h_pattern(k), lifted)) {
          throw InternalInconsistency("lifted certificate fails verification", to_text(d));
        }
        out.trace.push_back(
            json{{"step", "subdivision"}, {"retries", retries}, {"p2_fallbacks", p2_fallbacks}}.dump());
        out.certificate = std::move(lifted);
        return out;
      }
      ++retries;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  throw InternalInconsistency("no certificate after " + std::to_string(retries) + " retries", to_text(d0));
}

// ---------------------------------------------------------------------------
// Ear witness

namespace {

// Part of a connecting dipath still to be truncated: `path` runs from the
// last fixed branch vertex z to the next anchor when `forward`, otherwise
// from the anchor to z.
struct Tail {
  Dipath path;
  bool forward = true;
  int z_end() const { return forward ? path.front() : path.back(); }
};

// Dicycle through a and b inside D[within].
std::optional<Dipath> cycle_through_both(const Digraph& g, int a, int b, VertexSet within) {
  std::optional<Dipath> found;
  Dipath path{a};
  VertexSet used = VertexSet::single(a);
  auto dfs = [&](auto&& self, int v) -> bool {
    if (v == b) {
      const VertexSet inner = within - used;
      auto back = shortest_dipath(g, VertexSet::single(b), VertexSet::single(a), g.vertices() - inner - VertexSet::single(a) - VertexSet::single(b));
      if (back) {
        Dipath cyc = path;
        cyc.insert(cyc.end(), back->begin() + 1, back->end() - 1);
        found = cyc;
        return true;
      }
      return false;
    }
    for (int y : (g.out_neighbors(v) & within) - used) {
      path.push_back(y);
      used.insert(y);
      if (self(self, y)) return true;
      used.erase(y);
      path.pop_back();
    }
    return false;
  };
  dfs(dfs, a);
  return found;
}

struct DigonResult {
  int zj = -1;
  int zj1 = -1;
  Dipath q_in;
  Dipath forward_route;
  Dipath back_route;
  Dipath tail;
  std::vector<std::string> labels;
};

// The digon pair {v_j, v_j+1}. `t` runs from z_{j-1} to x_j; `n` is the
// next connecting dipath, from x_{j+1} to x_{j+2} when n_forward, else
// reversed. Works in g as given; callers mirror backward tails.
class DigonStep {
 public:
  DigonStep(const Digraph& g, const Dipath& t, VertexSet x_set, const Dipath& n, bool n_forward)
      : g_(g), t_(t), x_(x_set), n_(n), n_forward_(n_forward), outside_(g.vertices() - x_set) {}

  DigonResult run() {
    const int xj = t_.back();
    const int anchor = n_forward_ ? n_.front() : n_.back();
    for (int a : t_) {
      if (!x_.contains(a)) continue;
      for (int b : by_distance(set_of(n_) & x_)) {
        if (auto c = cycle_through_both(g_, a, b, x_)) {
          result_.labels.push_back("direct");
          return direct(*c);
        }
      }
    }
    auto c1 = find_dicycle_through(g_, xj, x_);
    auto c2 = find_dicycle_through(g_, anchor, x_);
    if (!c1 || !c2) throw PreconditionViolated("no dicycle through an anchor inside its pair component");
    return cases(*c1, *c2);
  }

 private:
  int dist(int v) const {
    const int i = index_of(n_, v);
    return n_forward_ ? static_cast<int>(n_.size()) - 1 - i : i;
  }
  std::vector<int> by_distance(VertexSet s) const {
    std::vector<int> out = s.to_vector();
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) { return dist(a) < dist(b); });
    return out;
  }
  int closest(VertexSet s) const { return by_distance(s & set_of(n_)).front(); }
  // N between v and x_{j+2}, in traversal order.
  Dipath seg_n(int v) const {
    const int i = index_of(n_, v);
    return n_forward_ ? slice(n_, i, static_cast<int>(n_.size()) - 1) : slice(n_, 0, i);
  }
  Dipath t_prefix(int v) const { return slice(t_, 0, index_of(t_, v)); }
  int first_on_t(VertexSet s) const {
    for (int v : t_)
      if (s.contains(v)) return v;
    throw PreconditionViolated("truncation point missing on the incoming dipath");
  }
  void split(const Dipath& cycle) {
    result_.forward_route = arc_of_cycle(cycle, result_.zj, result_.zj1);
    result_.back_route = arc_of_cycle(cycle, result_.zj1, result_.zj);
  }
  Dipath tail_via(const Dipath& c2, int a, int z) const {
    return n_forward_ ? join(arc_of_cycle(c2, z, a), seg_n(a)) : join(seg_n(a), arc_of_cycle(c2, a, z));
  }

  DigonResult direct(const Dipath& c) {
    const VertexSet cs = set_of(c);
    result_.zj = first_on_t(cs);
    result_.zj1 = closest(cs);
    result_.q_in = t_prefix(result_.zj);
    split(c);
    result_.tail = seg_n(result_.zj1);
    return result_;
  }

  DigonResult case1(const Dipath& c1, const Dipath& c2, int a) {
    result_.labels.push_back("1");
    const VertexSet s1 = set_of(c1);
    const int m = static_cast<int>(c2.size());
    const int i = index_of(c2, a);
    int fu = (i + 1) % m;
    while (!s1.contains(c2[fu])) fu = (fu + 1) % m;
    int bv = (i - 1 + m) % m;
    while (!s1.contains(c2[bv])) bv = (bv - 1 + m) % m;
    const int u = c2[fu];
    const int v = c2[bv];
    result_.zj = first_on_t(s1);
    result_.q_in = t_prefix(result_.zj);
    result_.zj1 = n_forward_ ? v : u;
    result_.tail = tail_via(c2, a, result_.zj1);
    split(c1);
    return result_;
  }

  DigonResult cases(Dipath c1, Dipath c2) {
    const int xj = t_.back();
    for (std::size_t guard = 0; guard <= n_.size() + 2; ++guard) {
      const VertexSet s1 = set_of(c1);
      const VertexSet s2 = set_of(c2);
      if (!s2.intersects(set_of(n_))) throw PreconditionViolated("second dicycle misses the next dipath");
      const int a = closest(s2);
      if (s1.intersects(s2)) return case1(c1, c2, a);

      auto p1 = shortest_dipath(g_, s1, s2, outside_);
      auto p2 = shortest_dipath(g_, s2, s1, outside_);
      if (!p1 || !p2) throw PreconditionViolated("pair component not strongly connected");
      const int u = p1->front();
      const int v = p1->back();
      const int x = p2->front();
      const int y = p2->back();
      const int z3 = closest(set_of(*p1) | s2);
      const VertexSet before_w = (set_of(*p1) | s1) - VertexSet::single(v);
      int wi = 0;
      while (!before_w.contains((*p2)[wi])) ++wi;
      const int w = (*p2)[wi];
      const Dipath big = close_cycle(join(join(join(*p2, arc_of_cycle(c1, y, u)), *p1), arc_of_cycle(c2, v, x)));

      if (s2.contains(z3)) {
        if (w == y && set_of(arc_of_cycle(c1, y, u)).contains(xj)) {
          result_.labels.push_back("2.1>1");
          c1 = big;
          continue;
        }
        if (w == y && set_of(arc_of_cycle(c2, v, x)).contains(a)) {
          result_.labels.push_back("2.1>1");
          c2 = big;
          continue;
        }
        return case21(c1, c2, *p1, *p2, w, a, big);
      }

      result_.labels.push_back("2.2");
      const int iz = index_of(*p1, z3);
      if (w == y) {
        c2 = big;
        continue;
      }
      if (auto next = reduce22(c1, c2, *p1, *p2, iz)) {
        c2 = *next;
        continue;
      }
      auto fallback = find_dicycle_through(g_, z3, x_);
      if (!fallback) throw PreconditionViolated("no dicycle through the meeting vertex");
      result_.labels.push_back("2.2-fallback");
      c2 = *fallback;
    }
    throw PreconditionViolated("case reduction did not terminate");
  }

  // Sub-cases (a), (b), (c): a dicycle through P1[iz] built from C1, C2,
  // P1 and P2.
  std::optional<Dipath> reduce22(const Dipath& c1, const Dipath& c2, const Dipath& p1, const Dipath& p2,
                                 int iz) {
    const int u = p1.front();
    const int v = p1.back();
    const int x = p2.front();
    const int y = p2.back();
    const int last1 = static_cast<int>(p1.size()) - 1;
    const int last2 = static_cast<int>(p2.size()) - 1;
    std::vector<int> common;
    for (int q : p1)
      if (index_of(p2, q) >= 0) common.push_back(q);
    for (int u1 : common) {
      const int i1 = index_of(p1, u1);
      const int i2 = index_of(p2, u1);
      if (i1 < iz) continue;
      const Dipath cyc =
          close_cycle(join(join(arc_of_cycle(c1, y, u), slice(p1, 0, i1)), slice(p2, i2, last2)));
      if (is_dicycle(g_, cyc)) {
        result_.labels.push_back("2.2a");
        return cyc;
      }
    }
    for (int u1 : common) {
      const int i1 = index_of(p1, u1);
      const int i2 = index_of(p2, u1);
      if (i1 >= iz) continue;
      const Dipath cyc =
          close_cycle(join(join(slice(p2, 0, i2), slice(p1, i1, last1)), arc_of_cycle(c2, v, x)));
      if (is_dicycle(g_, cyc)) {
        result_.labels.push_back("2.2b");
        return cyc;
      }
    }
    for (int u1 : common) {
      for (int u2 : common) {
        const int a1 = index_of(p1, u1);
        const int a2 = index_of(p1, u2);
        const int b1 = index_of(p2, u1);
        const int b2 = index_of(p2, u2);
        if (!(a1 < iz && iz < a2 && b2 < b1)) continue;
        const Dipath cyc = close_cycle(join(slice(p1, a1, a2), slice(p2, b2, b1)));
        if (is_dicycle(g_, cyc)) {
          result_.labels.push_back("2.2c");
          return cyc;
        }
      }
    }
    return std::nullopt;
  }

  DigonResult case21(const Dipath& c1, const Dipath& c2, const Dipath& p1, const Dipath& p2, int w, int a,
                     const Dipath& big) {
    result_.labels.push_back("2.1");
    const int u = p1.front();
    const int v = p1.back();
    const int x = p2.front();
    const int y = p2.back();
    const int iw1 = index_of(p1, w);
    const int iw2 = index_of(p2, w);
    const VertexSet s1 = set_of(c1);
    const Dipath p2_to_w = slice(p2, 0, iw2);
    const Dipath c3 = w == y ? big
                             : close_cycle(join(join(p2_to_w, slice(p1, iw1, static_cast<int>(p1.size()) - 1)),
                                                arc_of_cycle(c2, v, x)));
    const VertexSet s3 = set_of(c3);
    const int z2 = first_on_t(s1 | set_of(p1) | set_of(p2_to_w));
    if (w != y) {
      if (s1.contains(z2)) {
        result_.zj = w;
        result_.q_in = join(join(t_prefix(z2), arc_of_cycle(c1, z2, u)), slice(p1, 0, iw1));
      } else if (index_of(p1, z2) >= 0 && index_of(p1, z2) <= iw1) {
        result_.zj = w;
        result_.q_in = join(t_prefix(z2), slice(p1, index_of(p1, z2), iw1));
      } else {
        result_.zj = z2;
        result_.q_in = t_prefix(z2);
      }
    } else if (!s3.contains(z2)) {
      result_.zj = y;
      result_.q_in = join(t_prefix(z2), arc_of_cycle(c1, z2, y));
    } else {
      result_.zj = z2;
      result_.q_in = t_prefix(z2);
    }
    const VertexSet r = set_of(p2_to_w) | set_of(arc_of_cycle(c2, v, x));
    const Dipath along = seg_n(a);
    VertexSet open = set_of(along);
    open.erase(along.front());
    open.erase(along.back());
    const VertexSet hit = open & r;
    if (hit.empty()) {
      if (s3.contains(a)) {
        result_.zj1 = a;
        result_.tail = seg_n(a);
      } else {
        result_.zj1 = n_forward_ ? x : v;
        result_.tail = tail_via(c2, a, result_.zj1);
      }
    } else {
      result_.zj1 = closest(hit);
      result_.tail = seg_n(result_.zj1);
    }
    split(c3);
    return result_;
  }

  const Digraph& g_;
  const Dipath& t_;
  VertexSet x_;
  const Dipath& n_;
  bool n_forward_;
  VertexSet outside_;
  DigonResult result_;
};

}  // namespace

EarWitness ear_witness(const Digraph& d, const Digraph& f, const EarStep& step, const SubdivisionFinder& finder,
                       int budget) {
  const GoodPath& q = step.q;
  const int k = q.k();
  if (step.end == EndArc::kFromVk) {
    const EarStep flipped{step.v0, GoodPath{reverse(q.q)}, EndArc::kToVk};
    const SubdivisionFinder flipped_finder = [&finder](const Digraph& g) -> std::optional<SubdivisionEmbedding> {
      auto e = finder(reverse(g));
      if (!e) return std::nullopt;
      return reverse_embedding(*e);
    };
    EarWitness r = ear_witness(reverse(d), reverse(f), flipped, flipped_finder, budget);
    r.embedding = reverse_embedding(r.embedding);
    r.pattern = ear_add(f, step.v0, q, step.end);
    r.trace.insert(r.trace.begin(), json{{"step", "reversed"}}.dump());
    return r;
  }

  EarWitness out;
  out.pattern = ear_add(f, step.v0, q, step.end);
  const int n = f.order();
  const int target = budget + k;
  if (dichromatic_number(d).chi < target) {
    throw PreconditionViolated("dichromatic number below budget + k");
  }

  // Vertex-minimal induced subdigraph with dichromatic number budget + k.
  VertexSet keep = d.vertices();
  for (int v = 0; v < d.order(); ++v) {
    const VertexSet trial = keep - VertexSet::single(v);
    if (!acyclic_coloring_at_most(induced(d, trial).graph, target - 1)) keep = trial;
  }
  const InducedSubdigraph host = induced(d, keep);
  const Digraph& g = host.graph;
  const int order = g.order();
  out.trace.push_back(json{{"step", "reduce"}, {"order", order}}.dump());

  // Split colouring: the largest k-colourable part whose complement is
  // budget-colourable.
  VertexSet w_set;
  bool split_found = false;
  auto try_split = [&](VertexSet ws) {
    if (!acyclic_coloring_at_most(induced(g, ws).graph, budget)) return false;
    if (!acyclic_coloring_at_most(induced(g, g.vertices() - ws).graph, k)) return false;
    w_set = ws;
    return true;
  };
  split_found = try_split({});
  const std::uint64_t limit = std::uint64_t{1} << order;
  for (int size = 1; size <= order && !split_found; ++size) {
    // subsets of the given size in increasing order (Gosper's hack)
    for (std::uint64_t mask = (std::uint64_t{1} << size) - 1; mask < limit;) {
      if (try_split(VertexSet(mask))) {
        split_found = true;
        break;
      }
      const std::uint64_t low = mask & (~mask + 1);
      const std::uint64_t ripple = mask + low;
      mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
  }
  if (!split_found) throw PreconditionViolated("no split colouring");
  const InducedSubdigraph d1 = induced(g, g.vertices() - w_set);
  const InducedSubdigraph d2 = induced(g, w_set);
  out.trace.push_back(json{{"step", "split"}, {"d1", d1.graph.order()}, {"d2", d2.graph.order()}}.dump());

  auto s_local = finder(d2.graph);
  if (!s_local) throw PreconditionViolated("the finder failed on the second part");
  const SubdivisionEmbedding s = lift(*s_local, d2.to_parent);
  const int x0 = s.branch[step.v0];

  const AcyclicColoring c = lex_minimal_coloring(g, d1, x0, k);
  AnchorChain chain;
  try {
    chain = anchor_chain(g, d1, c, x0, k);
  } catch (const NotLexMinimalError&) {
    throw PreconditionViolated("no anchor chain for the lex-minimal colouring");
  }
  const std::vector<int>& xs = chain.anchors;
  out.trace.push_back(json{{"step", "anchors"}, {"x0", x0}, {"anchors", xs}}.dump());
  auto x_of = [&](int i) { return i == k + 1 ? x0 : xs[i - 1]; };

  SubdivisionEmbedding e;
  e.branch.assign(static_cast<std::size_t>(n + k), -1);
  for (int v = 0; v < n; ++v) e.branch[v] = s.branch[v];
  e.routes = s.routes;
  auto pv = [&](int i) { return n + i - 1; };
  const Dipath& hat = chain.cycle;

  if (k == 1) {
    const int z1 = xs[0];
    e.branch[pv(1)] = z1;
    const int i = index_of(hat, z1);
    e.routes[{step.v0, pv(1)}] = slice(hat, 0, i);
    Dipath back = slice(hat, i, static_cast<int>(hat.size()) - 1);
    back.push_back(x0);
    e.routes[{pv(1), step.v0}] = back;
  } else {
    // Pair i joins v_i and v_{i+1}; pair k is the end arc read as the
    // dipath from x_{k+1} = x0 to x_k.
    std::vector<bool> digon(static_cast<std::size_t>(k) + 1, false);
    std::vector<bool> fwd(static_cast<std::size_t>(k) + 1, false);
    std::vector<Dipath> p(static_cast<std::size_t>(k) + 1);
    for (int i = 1; i < k; ++i) {
      digon[i] = q.q.has_arc(i - 1, i) && q.q.has_arc(i, i - 1);
      fwd[i] = q.q.has_arc(i - 1, i);
      if (digon[i]) continue;
      const VertexSet outside = g.vertices() - chain.components[i - 1];
      const int from = fwd[i] ? x_of(i) : x_of(i + 1);
      const int to = fwd[i] ? x_of(i + 1) : x_of(i);
      auto path = shortest_dipath(g, VertexSet::single(from), VertexSet::single(to), outside);
      if (!path) throw PreconditionViolated("anchors not joined inside their pair component");
      p[i] = *path;
    }
    p[k] = {x0, xs[k - 1]};
    auto pair_arc = [&](int i) {
      return fwd[i] ? Arc{pv(i), pv(i + 1)} : Arc{pv(i + 1), pv(i)};
    };

    // z_1: the last vertex of the hat cycle met along P_1.
    const VertexSet hat_set = set_of(hat);
    Tail tail;
    int z1 = -1;
    if (fwd[1]) {
      int i = static_cast<int>(p[1].size()) - 1;
      while (!hat_set.contains(p[1][i])) --i;
      z1 = p[1][i];
      tail = {slice(p[1], i, static_cast<int>(p[1].size()) - 1), true};
    } else {
      int i = 0;
      while (!hat_set.contains(p[1][i])) ++i;
      z1 = p[1][i];
      tail = {slice(p[1], 0, i), false};
    }
    e.branch[pv(1)] = z1;
    const int hz = index_of(hat, z1);
    e.routes[{step.v0, pv(1)}] = slice(hat, 0, hz);
    Dipath back = slice(hat, hz, static_cast<int>(hat.size()) - 1);
    back.push_back(x0);
    e.routes[{pv(1), step.v0}] = back;

    std::optional<Digraph> rev;
    int j = 2;
    while (j <= k) {
      if (!digon[j]) {
        const VertexSet next = set_of(p[j]);
        const int m = static_cast<int>(tail.path.size());
        int at = -1;
        if (tail.forward) {
          for (int i = 1; i < m && at < 0; ++i)
            if (next.contains(tail.path[i])) at = i;
        } else {
          for (int i = m - 2; i >= 0 && at < 0; --i)
            if (next.contains(tail.path[i])) at = i;
        }
        if (at < 0) throw PreconditionViolated("consecutive dipaths do not meet");
        const int zj = tail.path[at];
        e.branch[pv(j)] = zj;
        e.routes[pair_arc(j - 1)] = tail.forward ? slice(tail.path, 0, at) : slice(tail.path, at, m - 1);
        const int iz = index_of(p[j], zj);
        tail = fwd[j] ? Tail{slice(p[j], iz, static_cast<int>(p[j].size()) - 1), true}
                      : Tail{slice(p[j], 0, iz), false};
        out.trace.push_back(json{{"step", "pair"}, {"i", j}, {"case", "first-meet"}}.dump());
        ++j;
        continue;
      }
      const VertexSet x_set = chain.components[j - 1];
      DigonResult r;
      if (tail.forward) {
        r = DigonStep(g, tail.path, x_set, p[j + 1], fwd[j + 1]).run();
      } else {
        if (!rev) rev = reverse(g);
        const Dipath t = reversed(tail.path);
        const Dipath nn = reversed(p[j + 1]);
        r = DigonStep(*rev, t, x_set, nn, !fwd[j + 1]).run();
        r.q_in = reversed(r.q_in);
        std::swap(r.forward_route, r.back_route);
        r.forward_route = reversed(r.forward_route);
        r.back_route = reversed(r.back_route);
        r.tail = reversed(r.tail);
      }
      e.branch[pv(j)] = r.zj;
      e.branch[pv(j + 1)] = r.zj1;
      e.routes[pair_arc(j - 1)] = r.q_in;
      e.routes[{pv(j), pv(j + 1)}] = r.forward_route;
      e.routes[{pv(j + 1), pv(j)}] = r.back_route;
      tail = {r.tail, fwd[j + 1]};
      out.trace.push_back(json{{"step", "pair"}, {"i", j}, {"case", r.labels.back()}, {"labels", r.labels}}.dump());
      j += 2;
    }
    // The tail of the end pair runs from x0 to z_k.
    e.routes[{step.v0, pv(k)}] = tail.path;
  }

  const EmbeddingCheck check = verify_embedding(g, out.pattern, e);
  if (!check) {
    std::ostringstream dump;
    dump << to_text(g) << "# x0 " << x0 << " anchors " << json(xs).dump() << "\n";
    throw InternalInconsistency("assembled embedding fails: " + check.clause, dump.str());
  }
  out.embedding = lift(e, host.to_parent);
  out.trace.push_back(json{{"step", "assembled"}}.dump());
  return out;
}

EarWitness ear_witness(const Digraph& d, const Digraph& f, const EarStep& step) {
  const SubdivisionFinder finder = [f](const Digraph& g) { return contains_subdivision(g, f); };
  return ear_witness(d, f, step, finder, f.order());
}

}  // namespace maderkit
