#include "maderkit/coloring.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

namespace maderkit {

VertexSet AcyclicColoring::color_class(int i) const {
  VertexSet s;
  for (std::size_t v = 0; v < color.size(); ++v)
    if (color[v] == i) s.insert(static_cast<int>(v));
  return s;
}

std::vector<std::vector<int>> AcyclicColoring::classes() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
  for (std::size_t v = 0; v < color.size(); ++v)
    if (color[v] >= 1 && color[v] <= k) out[color[v] - 1].push_back(static_cast<int>(v));
  return out;
}

AcyclicColoring AcyclicColoring::from_classes(int order, int k,
                                              const std::vector<std::vector<int>>& classes) {
  if (static_cast<int>(classes.size()) > k) throw ColoringError("more classes than colours");
  AcyclicColoring c{k, std::vector<int>(static_cast<std::size_t>(order), 0)};
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (int v : classes[i]) {
      if (v < 0 || v >= order) throw ColoringError("class member out of range");
      if (c.color[v] != 0) throw ColoringError("vertex in two classes");
      c.color[v] = static_cast<int>(i) + 1;
    }
  }
  return c;
}

bool is_acyclic_coloring(const Digraph& d, const AcyclicColoring& c) {
  if (static_cast<int>(c.color.size()) != d.order()) throw ColoringError("partial assignment");
  for (int v = 0; v < d.order(); ++v) {
    if (c.color[v] < 1 || c.color[v] > c.k) {
      throw ColoringError("vertex " + std::to_string(v) + " has no colour in 1.." +
                          std::to_string(c.k));
    }
  }
  for (int i = 1; i <= c.k; ++i)
    if (!is_acyclic(d, c.color_class(i))) return false;
  return true;
}

namespace {

// Adding v to the acyclic class S closes a dicycle iff some out-neighbour
// of v in S reaches an in-neighbour of v inside S.
bool closes_dicycle(const Digraph& d, VertexSet cls, int v) {
  const VertexSet outs = d.out_neighbors(v) & cls;
  if (outs.empty()) return false;
  const VertexSet ins = d.in_neighbors(v) & cls;
  if (ins.empty()) return false;
  if (outs.intersects(ins)) return true;
  return reachable(d, outs, cls).intersects(ins);
}

std::vector<int> degree_order(const Digraph& d) {
  std::vector<int> order(static_cast<std::size_t>(d.order()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return d.out_degree(a) + d.in_degree(a) > d.out_degree(b) + d.in_degree(b);
  });
  return order;
}

class ColoringSearch {
 public:
  explicit ColoringSearch(const Digraph& d) : d_(d), order_(degree_order(d)) {
    color_.assign(static_cast<std::size_t>(d.order()), 0);
  }

  /// Minimum-colour search; returns chi and fills `best`.
  int minimize(std::vector<int>& best) {
    const int n = d_.order();
    best_count_ = n + 1;
    best_ = std::vector<int>(static_cast<std::size_t>(n), 0);
    classes_.assign(static_cast<std::size_t>(n), VertexSet{});
    limit_ = n;
    minimize_from(0, 0);
    best = best_;
    return n == 0 ? 0 : best_count_;
  }

  /// First colouring with at most k colours.
  bool find_at_most(int k, std::vector<int>& out) {
    classes_.assign(static_cast<std::size_t>(std::max(k, 1)), VertexSet{});
    limit_ = k;
    if (!feasible_from(0, 0)) return false;
    out = color_;
    return true;
  }

 private:
  void minimize_from(std::size_t i, int used) {
    if (used >= best_count_) return;
    if (i == order_.size()) {
      best_count_ = used;
      best_ = color_;
      return;
    }
    const int v = order_[i];
    for (int c = 0; c < used; ++c) {
      if (closes_dicycle(d_, classes_[c], v)) continue;
      classes_[c].insert(v);
      color_[v] = c + 1;
      minimize_from(i + 1, used);
      classes_[c].erase(v);
      if (used >= best_count_) return;
    }
    if (used + 1 < best_count_) {
      classes_[used].insert(v);
      color_[v] = used + 1;
      minimize_from(i + 1, used + 1);
      classes_[used].erase(v);
    }
    color_[v] = 0;
  }

  bool feasible_from(std::size_t i, int used) {
    if (i == order_.size()) return true;
    const int v = order_[i];
    for (int c = 0; c < used; ++c) {
      if (closes_dicycle(d_, classes_[c], v)) continue;
      classes_[c].insert(v);
      color_[v] = c + 1;
      if (feasible_from(i + 1, used)) return true;
      classes_[c].erase(v);
    }
    if (used < limit_) {
      classes_[used].insert(v);
      color_[v] = used + 1;
      if (feasible_from(i + 1, used + 1)) return true;
      classes_[used].erase(v);
    }
    color_[v] = 0;
    return false;
  }

  const Digraph& d_;
  std::vector<int> order_;
  std::vector<int> color_;
  std::vector<VertexSet> classes_;
  std::vector<int> best_;
  int best_count_ = 0;
  int limit_ = 0;
};

}  // namespace

DichromaticResult dichromatic_number(const Digraph& d) {
  ColoringSearch search(d);
  std::vector<int> best;
  const int chi = search.minimize(best);
  return {chi, AcyclicColoring{chi, best}};
}

std::optional<AcyclicColoring> acyclic_coloring_at_most(const Digraph& d, int k) {
  if (d.order() == 0) return AcyclicColoring{std::max(k, 0), {}};
  if (k <= 0) return std::nullopt;
  ColoringSearch search(d);
  std::vector<int> out;
  if (!search.find_at_most(k, out)) return std::nullopt;
  return AcyclicColoring{k, out};
}

int dichromatic_number_exhaustive(const Digraph& d) {
  const int n = d.order();
  if (n > 10) throw std::invalid_argument("dichromatic_number_exhaustive: order too large");
  if (n == 0) return 0;
  // Restricted growth strings enumerate each set partition once.
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  int best = n;
  while (true) {
    const int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    if (blocks < best) {
      bool ok = true;
      for (int b = 0; b < blocks && ok; ++b) {
        VertexSet cls;
        for (int v = 0; v < n; ++v)
          if (rgs[v] == b) cls.insert(v);
        ok = is_acyclic(d, cls);
      }
      if (ok) best = blocks;
    }
    int i = n - 1;
    while (i > 0) {
      const int prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
      if (rgs[i] <= prefix_max) break;
      --i;
    }
    if (i == 0) break;
    ++rgs[i];
    std::fill(rgs.begin() + i + 1, rgs.end(), 0);
  }
  return best;
}

namespace {

bool colorable_with(const Digraph& d, int k) { return acyclic_coloring_at_most(d, k).has_value(); }

}  // namespace

bool is_dicritical(const Digraph& d, int k) {
  if (k <= 0) return d.order() == 0 && k == 0;
  if (colorable_with(d, k - 1) || !colorable_with(d, k)) return false;
  for (const Arc& a : d.arcs()) {
    Digraph smaller = d;
    smaller.remove_arc(a.tail, a.head);
    if (!colorable_with(smaller, k - 1)) return false;
  }
  for (int v = 0; v < d.order(); ++v)
    if (!colorable_with(delete_vertex(d, v), k - 1)) return false;
  return true;
}

CriticalCore dicritical_subdigraph(const Digraph& d, int k) {
  if (k < 1 || colorable_with(d, k - 1)) {
    throw std::invalid_argument("dicritical_subdigraph: need 1 <= k <= chi(D)");
  }
  // One pass per phase suffices: a deletion that failed keeps failing on
  // smaller digraphs since chi is monotone.
  VertexSet keep = d.vertices();
  for (int v = 0; v < d.order(); ++v) {
    VertexSet trial = keep - VertexSet::single(v);
    if (!colorable_with(induced(d, trial).graph, k - 1)) keep = trial;
  }
  InducedSubdigraph sub = induced(d, keep);
  Digraph core = sub.graph;
  for (const Arc& a : sub.graph.arcs()) {
    Digraph trial = core;
    trial.remove_arc(a.tail, a.head);
    if (!colorable_with(trial, k - 1)) core = std::move(trial);
  }
  return {std::move(core), sub.to_parent};
}

CriticalCore dicritical_subdigraph(const Digraph& d) {
  if (d.order() == 0) return {d, {}};
  return dicritical_subdigraph(d, dichromatic_number(d).chi);
}

std::vector<int> color_vector(const AcyclicColoring& c, VertexSet targets) {
  std::vector<int> vec(static_cast<std::size_t>(c.k), 0);
  for (int v : targets) {
    if (v >= static_cast<int>(c.color.size()) || c.color[v] < 1 || c.color[v] > c.k) {
      throw ColoringError("color_vector: target vertex without a colour");
    }
    ++vec[c.color[v] - 1];
  }
  return vec;
}

namespace {

VertexSet mapped_targets(const Digraph& ambient, const InducedSubdigraph& sub, int x0) {
  VertexSet t;
  for (int w : ambient.out_neighbors(x0))
    if (sub.from_parent[w] >= 0) t.insert(sub.from_parent[w]);
  return t;
}

}  // namespace

std::vector<int> color_vector(const Digraph& ambient, const InducedSubdigraph& sub,
                              const AcyclicColoring& c, int x0) {
  if (!is_acyclic_coloring(sub.graph, c)) throw ColoringError("color_vector: invalid colouring");
  return color_vector(c, mapped_targets(ambient, sub, x0));
}

namespace {

// Acyclic k-colouring with |targets in class i| <= bound[i], found by
// backtracking; empty classes with equal bounds are interchangeable.
class BoundedColoring {
 public:
  BoundedColoring(const Digraph& d, VertexSet targets, int k)
      : d_(d), targets_(targets), k_(k), order_(degree_order(d)) {}

  std::optional<std::vector<int>> solve(const std::vector<int>& bound) {
    bound_ = bound;
    classes_.assign(static_cast<std::size_t>(k_), VertexSet{});
    counts_.assign(static_cast<std::size_t>(k_), 0);
    color_.assign(static_cast<std::size_t>(d_.order()), 0);
    if (!extend(0)) return std::nullopt;
    return color_;
  }

 private:
  bool extend(std::size_t i) {
    if (i == order_.size()) return true;
    const int v = order_[i];
    const bool target = targets_.contains(v);
    for (int c = 0; c < k_; ++c) {
      if (target && counts_[c] + 1 > bound_[c]) continue;
      if (classes_[c].empty()) {
        bool twin = false;
        for (int e = 0; e < c && !twin; ++e) twin = classes_[e].empty() && bound_[e] == bound_[c];
        if (twin) continue;
      }
      if (closes_dicycle(d_, classes_[c], v)) continue;
      classes_[c].insert(v);
      counts_[c] += target ? 1 : 0;
      color_[v] = c + 1;
      if (extend(i + 1)) return true;
      classes_[c].erase(v);
      counts_[c] -= target ? 1 : 0;
    }
    color_[v] = 0;
    return false;
  }

  const Digraph& d_;
  VertexSet targets_;
  int k_;
  std::vector<int> order_;
  std::vector<int> bound_;
  std::vector<VertexSet> classes_;
  std::vector<int> counts_;
  std::vector<int> color_;
};

}  // namespace

AcyclicColoring lex_minimal_coloring(const Digraph& d, VertexSet targets, int k) {
  if (k < 1) throw ColoringError("lex_minimal_coloring: k must be >= 1");
  targets &= d.vertices();
  BoundedColoring search(d, targets, k);
  std::vector<int> bound(static_cast<std::size_t>(k), INT_MAX);
  auto witness = search.solve(bound);
  if (!witness) throw ColoringError("lex_minimal_coloring: chi(D1) exceeds k");
  // Fix coordinates left to right. Upper bounds suffice: once entries
  // 1..j-1 are at their minima, "<=" on them forces equality.
  for (int j = 0; j < k; ++j) {
    AcyclicColoring current{k, *witness};
    const int known = color_vector(current, targets)[j];
    bound[j] = known;
    for (int t = 0; t < known; ++t) {
      bound[j] = t;
      if (auto better = search.solve(bound)) {
        witness = std::move(better);
        break;
      }
      bound[j] = known;
    }
  }
  return AcyclicColoring{k, *witness};
}

AcyclicColoring lex_minimal_coloring(const Digraph& ambient, const InducedSubdigraph& sub, int x0,
                                     int k) {
  return lex_minimal_coloring(sub.graph, mapped_targets(ambient, sub, x0), k);
}

std::optional<std::vector<int>> lex_minimal_vector_exhaustive(const Digraph& d, VertexSet targets,
                                                              int k) {
  const int n = d.order();
  if (n > 10) throw std::invalid_argument("lex_minimal_vector_exhaustive: order too large");
  std::optional<std::vector<int>> best;
  AcyclicColoring c{k, std::vector<int>(static_cast<std::size_t>(n), 1)};
  while (true) {
    if (is_acyclic_coloring(d, c)) {
      auto vec = color_vector(c, targets & d.vertices());
      if (!best || vec < *best) best = vec;
    }
    int i = 0;
    while (i < n && c.color[i] == k) c.color[i++] = 1;
    if (i == n) break;
    ++c.color[i];
  }
  return best;
}

std::vector<int> lift_coloring(const Digraph& ambient, const InducedSubdigraph& sub,
                               const AcyclicColoring& c) {
  std::vector<int> col(static_cast<std::size_t>(ambient.order()), 0);
  for (std::size_t i = 0; i < sub.to_parent.size(); ++i) col[sub.to_parent[i]] = c.color[i];
  return col;
}

namespace {

VertexSet class_of(const std::vector<int>& col, int i) {
  VertexSet s;
  for (std::size_t v = 0; v < col.size(); ++v)
    if (col[v] == i) s.insert(static_cast<int>(v));
  return s;
}

std::optional<Dipath> cycle_through_pair(const Digraph& d, int a, int b, VertexSet allowed) {
  const VertexSet forbidden = d.vertices() - allowed;
  auto there = shortest_dipath(d, VertexSet::single(a), VertexSet::single(b), forbidden);
  auto back = shortest_dipath(d, VertexSet::single(b), VertexSet::single(a), forbidden);
  if (!there || !back) return std::nullopt;
  Dipath cycle = *there;
  cycle.insert(cycle.end(), back->begin() + 1, back->end() - 1);
  if (!is_dicycle(d, cycle)) return std::nullopt;
  return cycle;
}

}  // namespace

AnchorChain anchor_chain(const Digraph& ambient, const InducedSubdigraph& sub,
                         const AcyclicColoring& c, int x0, int k) {
  const std::vector<int> col = lift_coloring(ambient, sub, c);
  std::vector<VertexSet> cls(static_cast<std::size_t>(k) + 1);
  for (int i = 1; i <= k; ++i) cls[i] = class_of(col, i);
  const VertexSet out = ambient.out_neighbors(x0);

  std::vector<StrongComponents> pair_sc(static_cast<std::size_t>(k) + 1);
  for (int i = 2; i <= k; ++i) pair_sc[i] = strong_components(ambient, cls[i - 1] | cls[i]);

  AnchorChain chain;
  chain.anchors.assign(static_cast<std::size_t>(k), -1);
  // Depth-first over anchor choices; x_i must share a strong component of
  // D[c^-1({i-1,i})] with x_{i-1}.
  auto extend = [&](auto&& self, int i) -> bool {
    if (i > k) return true;
    const int prev = chain.anchors[i - 2];
    const int comp = pair_sc[i].component_of[prev];
    for (int xi : out & cls[i] & pair_sc[i].components[comp]) {
      chain.anchors[i - 1] = xi;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  for (int x1 : out & cls[1]) {
    auto cycle = cycle_through_pair(ambient, x0, x1, cls[1] | VertexSet::single(x0));
    if (!cycle) continue;
    chain.anchors[0] = x1;
    if (extend(extend, 2)) {
      chain.cycle = *cycle;
      for (int i = 2; i <= k; ++i) {
        const int comp = pair_sc[i].component_of[chain.anchors[i - 2]];
        chain.components.push_back(pair_sc[i].components[comp]);
      }
      return chain;
    }
  }
  throw NotLexMinimalError("not lex-minimal: no anchor chain exists for this colouring");
}

bool check_anchor_chain(const Digraph& ambient, const std::vector<int>& col, int x0, int k,
                        const AnchorChain& chain, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why != nullptr) *why = msg;
    return false;
  };
  if (static_cast<int>(chain.anchors.size()) != k) return fail("wrong number of anchors");
  for (int i = 1; i <= k; ++i) {
    const int xi = chain.anchors[i - 1];
    if (col[xi] != i) return fail("anchor x_" + std::to_string(i) + " has the wrong colour");
    if (!ambient.has_arc(x0, xi)) return fail("anchor x_" + std::to_string(i) + " not an out-neighbour");
  }
  if (!is_dicycle(ambient, chain.cycle) || chain.cycle.front() != x0) return fail("cycle malformed");
  bool has_x1 = false;
  for (std::size_t j = 1; j < chain.cycle.size(); ++j) {
    if (col[chain.cycle[j]] != 1) return fail("cycle leaves colour class 1");
    has_x1 = has_x1 || chain.cycle[j] == chain.anchors[0];
  }
  if (!has_x1) return fail("cycle misses x_1");
  if (static_cast<int>(chain.components.size()) != std::max(k - 1, 0)) return fail("component count");
  for (int i = 2; i <= k; ++i) {
    const VertexSet pair = class_of(col, i - 1) | class_of(col, i);
    const StrongComponents sc = strong_components(ambient, pair);
    const int a = chain.anchors[i - 2];
    const int b = chain.anchors[i - 1];
    if (sc.component_of[a] != sc.component_of[b]) return fail("anchors in different components");
    if (sc.components[sc.component_of[a]] != chain.components[i - 2]) return fail("component mismatch");
  }
  return true;
}

}  // namespace maderkit
