#include "maderkit/family.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "json.hpp"
#include "maderkit/canonical.hpp"

namespace maderkit {

bool is_good(const Digraph& q) {
  const int k = q.order();
  for (const Arc& a : q.arcs()) {
    if (std::abs(a.tail - a.head) != 1) {
      throw FamilyError("arc (" + std::to_string(a.tail) + "," + std::to_string(a.head) +
                        ") is not on the spine");
    }
  }
  if (k == 0) return false;
  // Spanning and connected: every consecutive spine pair carries an arc.
  for (int i = 0; i + 1 < k; ++i)
    if (!q.has_arc(i, i + 1) && !q.has_arc(i + 1, i)) return false;
  auto digon = [&](int i) { return q.has_arc(i, i + 1) && q.has_arc(i + 1, i); };
  for (int i = 0; i + 2 < k; ++i)
    if (digon(i) && digon(i + 1)) return false;
  if (k >= 2 && q.out_degree(0) + q.in_degree(0) != 1) return false;
  return true;
}

namespace {

// Per spine edge: 0 forward, 1 backward, 2 digon.
std::vector<GoodPath> spine_members(int k, bool allow_digons) {
  if (k < 1) throw FamilyError("spine length must be >= 1");
  std::vector<GoodPath> out;
  std::vector<int> choice(static_cast<std::size_t>(std::max(k - 1, 0)), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == k - 1) {
      Digraph q(k);
      for (int j = 0; j + 1 < k; ++j) {
        if (choice[j] != 1) q.add_arc(j, j + 1);
        if (choice[j] != 0) q.add_arc(j + 1, j);
      }
      out.push_back({q});
      return;
    }
    const int top = allow_digons && i > 0 && choice[i - 1] != 2 ? 2 : 1;
    for (int c = 0; c <= top; ++c) {
      choice[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace

std::vector<GoodPath> enumerate_good(int k) { return spine_members(k, true); }
std::vector<GoodPath> enumerate_oriented_paths(int k) { return spine_members(k, false); }

Digraph ear_add(const Digraph& f, int v0, const GoodPath& q, EndArc end) {
  const int n = f.order();
  const int k = q.k();
  if (v0 < 0 || v0 >= n) throw FamilyError("attach vertex out of range");
  if (!is_good(q.q)) throw FamilyError("ear is not a good path");
  if (k == 1 && end != EndArc::kNone) throw FamilyError("end arc given for a one-vertex ear");
  if (k >= 2 && end == EndArc::kNone) throw FamilyError("end arc missing for an ear with k >= 2");
  Digraph g(n + k);
  for (const Arc& a : f.arcs()) g.add_arc(a.tail, a.head);
  for (const Arc& a : q.q.arcs()) g.add_arc(n + a.tail, n + a.head);
  g.add_arc(v0, n);
  g.add_arc(n, v0);
  if (end == EndArc::kToVk) g.add_arc(v0, n + k - 1);
  if (end == EndArc::kFromVk) g.add_arc(n + k - 1, v0);
  return g;
}

Digraph replay(const FamilyDerivation& d) {
  Digraph g(1);
  for (const FamilyStep& step : d.steps) {
    if (const auto* ear = std::get_if<EarStep>(&step)) {
      g = ear_add(g, ear->v0, ear->q, ear->end);
      continue;
    }
    const auto& sub = std::get<SubStep>(step);
    std::vector<int> relabel(static_cast<std::size_t>(g.order()), -1);
    for (std::size_t i = 0; i < sub.vertices.size(); ++i) {
      const int v = sub.vertices[i];
      if (v < 0 || v >= g.order()) throw FamilyError("kept vertex out of range");
      if (relabel[v] >= 0) throw FamilyError("kept vertex listed twice");
      relabel[v] = static_cast<int>(i);
    }
    Digraph next(static_cast<int>(sub.vertices.size()));
    for (const Arc& a : sub.arcs) {
      if (a.tail < 0 || a.head < 0 || a.tail >= g.order() || a.head >= g.order() ||
          !g.has_arc(a.tail, a.head)) {
        throw FamilyError("kept arc is not an arc of the current digraph");
      }
      if (relabel[a.tail] < 0 || relabel[a.head] < 0) throw FamilyError("kept arc leaves the kept vertices");
      next.add_arc(relabel[a.tail], relabel[a.head]);
    }
    g = std::move(next);
  }
  return g;
}

namespace {

const char* end_name(EndArc e) {
  switch (e) {
    case EndArc::kToVk:
      return "to_vk";
    case EndArc::kFromVk:
      return "from_vk";
    case EndArc::kNone:
      break;
  }
  return "none";
}

std::vector<std::array<int, 2>> arc_pairs(const std::vector<Arc>& arcs) {
  std::vector<std::array<int, 2>> out;
  for (const Arc& a : arcs) out.push_back({a.tail, a.head});
  return out;
}

}  // namespace

std::string derivation_to_json(const FamilyDerivation& d) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const FamilyStep& step : d.steps) {
    nlohmann::ordered_json j;
    if (const auto* ear = std::get_if<EarStep>(&step)) {
      j["op"] = "ear";
      j["v0"] = ear->v0;
      j["k"] = ear->q.k();
      j["arcs"] = arc_pairs(ear->q.q.arcs());
      j["end_arc"] = end_name(ear->end);
    } else {
      const auto& sub = std::get<SubStep>(step);
      j["op"] = "sub";
      j["vertices"] = sub.vertices;
      j["arcs"] = arc_pairs(sub.arcs);
    }
    steps.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["steps"] = std::move(steps);
  return root.dump();
}

FamilyDerivation derivation_from_json(const std::string& text) {
  try {
    const nlohmann::json root = nlohmann::json::parse(text);
    FamilyDerivation d;
    for (const auto& j : root.at("steps")) {
      std::vector<Arc> arcs;
      for (const auto& p : j.at("arcs")) arcs.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
      const std::string op = j.at("op").get<std::string>();
      if (op == "ear") {
        const int k = j.at("k").get<int>();
        if (k < 1 || k > Digraph::kMaxOrder) throw FamilyError("ear length out of range");
        Digraph q(k);
        for (const Arc& a : arcs) q.add_arc(a.tail, a.head);
        const std::string end = j.at("end_arc").get<std::string>();
        EndArc e = EndArc::kNone;
        if (end == "to_vk") {
          e = EndArc::kToVk;
        } else if (end == "from_vk") {
          e = EndArc::kFromVk;
        } else if (end != "none") {
          throw FamilyError("unknown end_arc '" + end + "'");
        }
        d.steps.push_back(EarStep{j.at("v0").get<int>(), GoodPath{q}, e});
      } else if (op == "sub") {
        d.steps.push_back(SubStep{j.at("vertices").get<std::vector<int>>(), arcs});
      } else {
        throw FamilyError("unknown step op '" + op + "'");
      }
    }
    return d;
  } catch (const nlohmann::json::exception& ex) {
    throw FamilyError(std::string("derivation JSON: ") + ex.what());
  } catch (const DigraphError& ex) {
    throw FamilyError(std::string("derivation JSON: ") + ex.what());
  }
}

const std::vector<MaximalMember>& maximal_members(int order, bool oriented) {
  if (order < 1 || order > kFamilyMaxOrder) {
    throw FamilyError("maximal members are built for orders 1.." + std::to_string(kFamilyMaxOrder));
  }
  static std::mutex mutex;
  static std::array<std::vector<std::vector<MaximalMember>>, 2> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& levels = cache[oriented ? 1 : 0];
  if (levels.empty()) levels.push_back({MaximalMember{Digraph(1), {}}});
  while (static_cast<int>(levels.size()) < order) {
    const int n = static_cast<int>(levels.size()) + 1;
    std::vector<MaximalMember> next;
    std::unordered_map<CanonicalKey, bool, CanonicalKeyHash> seen;
    for (int m = 1; m < n; ++m) {
      const int k = n - m;
      const std::vector<GoodPath> ears = oriented ? enumerate_oriented_paths(k) : enumerate_good(k);
      const std::vector<EndArc> ends =
          k == 1 ? std::vector<EndArc>{EndArc::kNone} : std::vector<EndArc>{EndArc::kToVk, EndArc::kFromVk};
      for (const MaximalMember& parent : levels[m - 1]) {
        for (int v0 = 0; v0 < m; ++v0) {
          for (const GoodPath& q : ears) {
            for (EndArc e : ends) {
              Digraph g = ear_add(parent.graph, v0, q, e);
              if (!seen.emplace(canonical_form(g), true).second) continue;
              std::vector<EarStep> steps = parent.ears;
              steps.push_back({v0, q, e});
              next.push_back({std::move(g), std::move(steps)});
            }
          }
        }
      }
    }
    levels.push_back(std::move(next));
  }
  return levels[order - 1];
}

std::optional<std::vector<int>> find_monomorphism(const Digraph& small, const Digraph& big) {
  const int n = small.order();
  if (n > big.order() || small.arc_count() > big.arc_count()) return std::nullopt;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return small.out_degree(a) + small.in_degree(a) > small.out_degree(b) + small.in_degree(b);
  });
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::function<bool(int, VertexSet)> rec = [&](int i, VertexSet used) {
    if (i == n) return true;
    const int p = order[i];
    for (int v = 0; v < big.order(); ++v) {
      if (used.contains(v)) continue;
      if (big.out_degree(v) < small.out_degree(p) || big.in_degree(v) < small.in_degree(p)) continue;
      bool ok = true;
      for (int q : small.out_neighbors(p)) ok = ok && (map[q] < 0 || big.has_arc(v, map[q]));
      for (int q : small.in_neighbors(p)) ok = ok && (map[q] < 0 || big.has_arc(map[q], v));
      if (!ok) continue;
      map[p] = v;
      if (rec(i + 1, used | VertexSet::single(v))) return true;
      map[p] = -1;
    }
    return false;
  };
  if (!rec(0, VertexSet{})) return std::nullopt;
  return map;
}

namespace {

struct Recognized {
  const MaximalMember* member = nullptr;
  std::vector<int> map;
};

std::optional<Recognized> recognize_whole(const Digraph& f, int slack, bool oriented) {
  for (int size = std::max(f.order(), 1); size <= f.order() + slack; ++size) {
    for (const MaximalMember& m : maximal_members(size, oriented)) {
      if (auto map = find_monomorphism(f, m.graph)) return Recognized{&m, *map};
    }
  }
  return std::nullopt;
}

SubStep final_sub(const Digraph& f, const std::vector<int>& global) {
  SubStep sub{global, {}};
  for (const Arc& a : f.arcs()) sub.arcs.push_back({global[a.tail], global[a.head]});
  return sub;
}

bool is_identity(const SubStep& sub, const Digraph& g) {
  if (static_cast<int>(sub.vertices.size()) != g.order() || sub.arcs.size() != g.arc_count()) return false;
  for (std::size_t i = 0; i < sub.vertices.size(); ++i)
    if (sub.vertices[i] != static_cast<int>(i)) return false;
  return true;
}

std::vector<VertexSet> ug_components(const Digraph& f) {
  const UndirectedGraph g = underlying_graph(f);
  std::vector<VertexSet> comps;
  VertexSet left = f.vertices();
  while (!left.empty()) {
    VertexSet comp = VertexSet::single(left.first());
    VertexSet frontier = comp;
    while (!frontier.empty()) {
      VertexSet next;
      for (int v : frontier) next |= g.neighbors(v);
      frontier = next - comp;
      comp |= next;
    }
    comps.push_back(comp);
    left = left - comp;
  }
  return comps;
}

std::optional<FamilyDerivation> recognize(const Digraph& f, int slack, bool oriented) {
  if (slack < 0) throw FamilyError("slack must be >= 0");
  if (f.order() + slack > kFamilyMaxOrder) {
    throw FamilyError("|V(F)| + slack exceeds the recognition limit " + std::to_string(kFamilyMaxOrder));
  }
  if (auto whole = recognize_whole(f, slack, oriented)) {
    FamilyDerivation d;
    for (const EarStep& e : whole->member->ears) d.steps.push_back(e);
    SubStep sub = final_sub(f, whole->map);
    if (!is_identity(sub, whole->member->graph)) d.steps.push_back(std::move(sub));
    return d;
  }
  const std::vector<VertexSet> comps = ug_components(f);
  if (comps.size() < 2) return std::nullopt;
  // Members for each component, joined through one-vertex ears at vertex
  // 0 that the final step drops again.
  FamilyDerivation d;
  std::vector<int> global(static_cast<std::size_t>(f.order()), -1);
  int size = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const InducedSubdigraph part = induced(f, comps[c]);
    auto rec = recognize_whole(part.graph, slack, oriented);
    if (!rec) return std::nullopt;
    int base = 0;
    if (c > 0) {
      d.steps.push_back(EarStep{0, GoodPath{Digraph(1)}, EndArc::kNone});
      base = size;
      ++size;
    } else {
      size = 1;
    }
    for (const EarStep& e : rec->member->ears) {
      EarStep shifted = e;
      shifted.v0 = base + e.v0;
      d.steps.push_back(shifted);
      size += e.q.k();
    }
    for (std::size_t i = 0; i < part.to_parent.size(); ++i) global[part.to_parent[i]] = base + rec->map[i];
  }
  d.steps.push_back(final_sub(f, global));
  return d;
}

}  // namespace

std::optional<FamilyDerivation> in_family(const Digraph& f, int slack) { return recognize(f, slack, false); }
std::optional<FamilyDerivation> in_octi(const Digraph& f, int slack) { return recognize(f, slack, true); }

std::vector<Digraph> family_members(int order, int slack) {
  std::vector<Digraph> out;
  for (const CanonicalKey& key : enumerate_digraphs(order)) {
    Digraph d = from_canonical(key);
    if (in_family(d, slack)) out.push_back(std::move(d));
  }
  return out;
}

namespace {

// Blocks of an undirected graph as vertex sets (Hopcroft-Tarjan).
std::vector<VertexSet> blocks(const UndirectedGraph& g) {
  const int n = g.order();
  std::vector<int> disc(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<Edge> stack;
  std::vector<VertexSet> out;
  int time = 0;
  std::function<void(int, int)> dfs = [&](int v, int parent) {
    disc[v] = low[v] = time++;
    for (int w : g.neighbors(v)) {
      if (w == parent) continue;
      if (disc[w] < 0) {
        stack.push_back({v, w});
        dfs(w, v);
        low[v] = std::min(low[v], low[w]);
        if (low[w] >= disc[v]) {
          VertexSet block;
          while (true) {
            const Edge e = stack.back();
            stack.pop_back();
            block.insert(e.u);
            block.insert(e.v);
            if (e.u == v && e.v == w) break;
          }
          out.push_back(block);
        }
      } else if (disc[w] < disc[v]) {
        stack.push_back({v, w});
        low[v] = std::min(low[v], disc[w]);
      }
    }
  };
  for (int v = 0; v < n; ++v)
    if (disc[v] < 0) dfs(v, -1);
  std::sort(out.begin(), out.end(), [](VertexSet a, VertexSet b) { return a.bits() < b.bits(); });
  return out;
}

VertexSet reach_undirected(const UndirectedGraph& g, VertexSet from, VertexSet allowed) {
  VertexSet seen = from & allowed;
  VertexSet frontier = seen;
  while (!frontier.empty()) {
    VertexSet next;
    for (int v : frontier) next |= g.neighbors(v);
    next = next & allowed;
    frontier = next - seen;
    seen |= next;
  }
  return seen;
}

std::vector<VertexSet> cyclic_blocks(const UndirectedGraph& g) {
  std::vector<VertexSet> out;
  for (VertexSet b : blocks(g))
    if (b.size() >= 3) out.push_back(b);
  return out;
}

}  // namespace

std::optional<OutmostCycle> outmost_cycle(const UndirectedGraph& g) {
  const std::vector<VertexSet> cyclic = cyclic_blocks(g);
  const VertexSet all = VertexSet::range(g.order());
  for (VertexSet b : cyclic) {
    int exits = 0;
    int u = b.first();
    for (int c : b) {
      const VertexSet hang = reach_undirected(g, VertexSet::single(c), all - (b - VertexSet::single(c)));
      bool leads = false;
      for (VertexSet other : cyclic) leads = leads || (other != b && other.subset_of(hang));
      if (leads) {
        ++exits;
        u = c;
      }
    }
    if (exits > 1) continue;
    // A 2-connected block has a cycle through each of its edges.
    const int w = (g.neighbors(u) & b).first();
    std::vector<int> prev(static_cast<std::size_t>(g.order()), -1);
    std::vector<int> queue{w};
    prev[w] = w;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const int v = queue[i];
      for (int x : g.neighbors(v) & b) {
        if (prev[x] >= 0 || (v == w && x == u)) continue;
        prev[x] = v;
        queue.push_back(x);
      }
    }
    std::vector<int> back;
    for (int v = prev[u]; v != w; v = prev[v]) back.push_back(v);
    back.push_back(w);
    std::vector<int> cycle{u};
    cycle.insert(cycle.end(), back.rbegin(), back.rend());
    return OutmostCycle{cycle, u};
  }
  return std::nullopt;
}

bool check_outmost_cycle(const UndirectedGraph& g, const OutmostCycle& c) {
  const std::vector<int>& cyc = c.cycle;
  if (cyc.size() < 3 || cyc.front() != c.u) return false;
  VertexSet on;
  for (std::size_t i = 0; i < cyc.size(); ++i) {
    if (on.contains(cyc[i])) return false;
    on.insert(cyc[i]);
    if (!g.has_edge(cyc[i], cyc[(i + 1) % cyc.size()])) return false;
  }
  const VertexSet all = VertexSet::range(g.order());
  const VertexSet reach = reach_undirected(g, on - VertexSet::single(c.u), all - VertexSet::single(c.u));
  for (VertexSet b : cyclic_blocks(g)) {
    if (on.subset_of(b)) continue;
    if (b.intersects(reach)) return false;
  }
  return true;
}

Digraph pattern_h1() { return make_digraph(4, {{0, 1}, {1, 0}, {0, 3}, {3, 0}, {1, 2}, {2, 3}}); }
Digraph pattern_h2() { return make_digraph(4, {{0, 1}, {1, 0}, {0, 3}, {3, 0}, {1, 2}, {3, 2}}); }
Digraph bioriented_c4() { return biorient(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }
Digraph pattern_h3() {
  Digraph d = bioriented_c4();
  d.remove_arc(0, 1);
  return d;
}

std::vector<C4Pattern> c4_patterns() {
  const Digraph full = bioriented_c4();
  const std::vector<Arc> arcs = full.arcs();
  const std::vector<std::pair<std::string, Digraph>> named = {
      {"H1", pattern_h1()}, {"H2", pattern_h2()}, {"rev-H2", reverse(pattern_h2())}, {"H3", pattern_h3()}};
  std::map<CanonicalKey, C4Pattern> classes;
  for (unsigned mask = 0; mask + 1 < (1U << arcs.size()); ++mask) {
    Digraph d(4);
    for (std::size_t i = 0; i < arcs.size(); ++i)
      if ((mask >> i) & 1U) d.add_arc(arcs[i].tail, arcs[i].head);
    classes.emplace(canonical_form(d), C4Pattern{"", d});
  }
  for (const auto& [name, g] : named) {
    C4Pattern& p = classes.at(canonical_form(g));
    if (p.name.empty()) p = C4Pattern{name, g};
  }
  std::vector<C4Pattern> out;
  int generic = 0;
  for (auto& [key, p] : classes) {
    if (p.name.empty()) p.name = "K" + std::to_string(generic++);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace maderkit
