#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "maderkit/canonical.hpp"
#include "maderkit/family.hpp"

using namespace maderkit;

namespace {

// All arc subsets of the bioriented k-path filtered through is_good.
std::set<std::vector<Arc>> filtered_good(int k) {
  std::vector<Arc> spine;
  for (int i = 0; i + 1 < k; ++i) {
    spine.push_back({i, i + 1});
    spine.push_back({i + 1, i});
  }
  std::set<std::vector<Arc>> out;
  for (unsigned mask = 0; mask < (1U << spine.size()); ++mask) {
    Digraph q(k);
    for (std::size_t i = 0; i < spine.size(); ++i)
      if ((mask >> i) & 1U) q.add_arc(spine[i].tail, spine[i].head);
    if (is_good(q)) out.insert(q.arcs());
  }
  return out;
}

bool subdigraph_of(const Digraph& small, const Digraph& big) {
  return find_monomorphism(small, big).has_value();
}

UndirectedGraph graph_from_mask(int n, std::uint64_t mask) {
  UndirectedGraph g(n);
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++bit)
      if ((mask >> bit) & 1U) g.add_edge(u, v);
  return g;
}

bool has_cycle(const UndirectedGraph& g) {
  // forest iff |E| = |V| - #components
  std::vector<int> parent(static_cast<std::size_t>(g.order()));
  for (int v = 0; v < g.order(); ++v) parent[v] = v;
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (const Edge& e : g.edges()) {
    const int a = find(e.u);
    const int b = find(e.v);
    if (a == b) return true;
    parent[a] = b;
  }
  return false;
}

}  // namespace

TEST_CASE("is_good examples") {
  CHECK(is_good(directed_path(3)));
  CHECK_FALSE(is_good(complete_biorientation(2)));
  CHECK(is_good(make_digraph(4, {{0, 1}, {2, 1}, {2, 3}, {3, 2}})));
  CHECK(is_good(Digraph(1)));
  CHECK_FALSE(is_good(make_digraph(3, {{0, 1}})));
  CHECK_FALSE(is_good(make_digraph(4, {{0, 1}, {1, 2}, {2, 1}, {2, 3}, {3, 2}})));
  CHECK_THROWS_AS(is_good(make_digraph(3, {{0, 2}})), FamilyError);
}

TEST_CASE("enumerate_good matches the brute-force filter") {
  CHECK(enumerate_good(1).size() == 1);
  CHECK(enumerate_good(2).size() == 2);
  for (int k = 1; k <= 6; ++k) {
    std::set<std::vector<Arc>> listed;
    for (const GoodPath& q : enumerate_good(k)) listed.insert(q.q.arcs());
    CHECK(listed.size() == enumerate_good(k).size());
    CHECK(listed == filtered_good(k));
  }
  CHECK(enumerate_good(3).size() == 6);
  CHECK(enumerate_oriented_paths(3).size() == 4);
}

TEST_CASE("ear_add examples") {
  const Digraph digon = ear_add(Digraph(1), 0, GoodPath{Digraph(1)}, EndArc::kNone);
  CHECK(digon == complete_biorientation(2));
  // F = digon {u, v0} = {0, 1}; Q = v1 -> v2 on vertices 2, 3
  const Digraph four = ear_add(digon, 1, GoodPath{directed_path(2)}, EndArc::kToVk);
  CHECK(four.arcs() == std::vector<Arc>{{0, 1}, {1, 0}, {1, 2}, {1, 3}, {2, 1}, {2, 3}});
  const Digraph theta = ear_add(Digraph(1), 0, GoodPath{directed_path(3)}, EndArc::kFromVk);
  CHECK(theta.arcs() == std::vector<Arc>{{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 0}});
  CHECK_THROWS_AS(ear_add(Digraph(1), 0, GoodPath{Digraph(1)}, EndArc::kToVk), FamilyError);
  CHECK_THROWS_AS(ear_add(Digraph(1), 0, GoodPath{directed_path(2)}, EndArc::kNone), FamilyError);
}

TEST_CASE("derivations replay and round trip through JSON") {
  FamilyDerivation d;
  d.steps.push_back(EarStep{0, GoodPath{Digraph(1)}, EndArc::kNone});
  d.steps.push_back(EarStep{1, GoodPath{make_digraph(2, {{1, 0}})}, EndArc::kFromVk});
  d.steps.push_back(SubStep{{3, 1, 2}, {{1, 2}, {3, 1}}});
  const Digraph g = replay(d);
  CHECK(g.order() == 3);
  CHECK(g.arcs() == std::vector<Arc>{{0, 1}, {1, 2}});
  const std::string text = derivation_to_json(d);
  CHECK(text ==
        R"({"steps":[{"op":"ear","v0":0,"k":1,"arcs":[],"end_arc":"none"},)"
        R"({"op":"ear","v0":1,"k":2,"arcs":[[1,0]],"end_arc":"from_vk"},)"
        R"({"op":"sub","vertices":[3,1,2],"arcs":[[1,2],[3,1]]}]})");
  CHECK(derivation_from_json(text) == d);
  FamilyDerivation bad;
  bad.steps.push_back(SubStep{{0}, {{0, 1}}});
  CHECK_THROWS_AS(replay(bad), FamilyError);
}

TEST_CASE("in_family examples") {
  const auto k1 = in_family(Digraph(1));
  REQUIRE(k1);
  CHECK(k1->steps.empty());
  CHECK_FALSE(in_family(pattern_h1(), 0));
  CHECK_FALSE(in_family(pattern_h2(), 0));
  CHECK_FALSE(in_family(reverse(pattern_h2()), 0));
  CHECK_THROWS_AS(in_family(Digraph(8), 1), FamilyError);
  const Digraph two_digons = make_digraph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {1, 2}, {3, 0}});
  const auto r = in_family(two_digons);
  REQUIRE(r);
  CHECK(replay(*r) == two_digons);
}

TEST_CASE("in_octi examples") {
  const auto k1 = in_octi(Digraph(1));
  REQUIRE(k1);
  CHECK(k1->steps.empty());
  CHECK(in_octi(complete_biorientation(2)));
  // Ear with a digon inside Q: K1 + (v1 -> v2 <-> v3), end arc (v3, v0).
  const Digraph q = make_digraph(3, {{0, 1}, {1, 2}, {2, 1}});
  const Digraph f = ear_add(Digraph(1), 0, GoodPath{q}, EndArc::kFromVk);
  CHECK(in_family(f));
  CHECK_FALSE(in_octi(f));
}

TEST_CASE("recognizer derivations replay to the query") {
  for (int n = 1; n <= 4; ++n) {
    for (const CanonicalKey& key : enumerate_digraphs(n)) {
      const Digraph f = from_canonical(key);
      const auto fam = in_family(f);
      const auto oct = in_octi(f);
      if (fam) CHECK(replay(*fam) == f);
      if (oct) {
        CHECK(replay(*oct) == f);
        CHECK(fam.has_value());
      }
    }
  }
}

TEST_CASE("component-wise recognition joins components") {
  // two digons side by side and an isolated vertex
  const Digraph f = make_digraph(5, {{0, 1}, {1, 0}, {3, 4}, {4, 3}});
  const auto d = in_family(f);
  REQUIRE(d);
  CHECK(replay(*d) == f);
  // members used with slack
  const auto s = in_family(directed_cycle(3), 1);
  REQUIRE(s);
  CHECK(replay(*s) == directed_cycle(3));
}

TEST_CASE("maximal members are subdigraph-closed generators") {
  for (int n = 1; n <= 5; ++n) {
    std::set<CanonicalKey> keys;
    for (const MaximalMember& m : maximal_members(n)) {
      FamilyDerivation d;
      for (const EarStep& e : m.ears) d.steps.push_back(e);
      CHECK(replay(d) == m.graph);
      keys.insert(canonical_form(m.graph));
    }
    CHECK(keys.size() == maximal_members(n).size());
  }
  for (const MaximalMember& m : maximal_members(4, true)) CHECK(subdigraph_of(m.graph, m.graph));
}

TEST_CASE("outmost cycle examples") {
  CHECK_FALSE(outmost_cycle(graph_from_mask(4, 0b000111)));
  UndirectedGraph c4(4);
  c4.add_edge(0, 1);
  c4.add_edge(1, 2);
  c4.add_edge(2, 3);
  c4.add_edge(3, 0);
  const auto one = outmost_cycle(c4);
  REQUIRE(one);
  CHECK(one->cycle.size() == 4);
  CHECK(check_outmost_cycle(c4, *one));
  UndirectedGraph bow(5);
  for (auto [u, v] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}})
    bow.add_edge(u, v);
  const auto b = outmost_cycle(bow);
  REQUIRE(b);
  CHECK(b->u == 2);
  CHECK(b->cycle.size() == 3);
  CHECK(check_outmost_cycle(bow, *b));
}

TEST_CASE("outmost cycles exist and separate on every graph with at most 7 vertices") {
  long checked = 0;
  for (int n = 0; n <= 7; ++n) {
    const int bits = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      const UndirectedGraph g = graph_from_mask(n, mask);
      const auto c = outmost_cycle(g);
      if (c.has_value() != has_cycle(g)) {
        FAIL_CHECK("existence mismatch at n=" << n << " mask=" << mask);
        continue;
      }
      if (c && !check_outmost_cycle(g, *c)) FAIL_CHECK("separation fails at n=" << n << " mask=" << mask);
      ++checked;
    }
  }
  CHECK(checked == 2097152 + 32768 + 1024 + 64 + 8 + 2 + 1 + 1);
}

TEST_CASE("C4 patterns") {
  const auto pats = c4_patterns();
  std::set<CanonicalKey> buckets;
  const Digraph full = bioriented_c4();
  const auto arcs = full.arcs();
  for (unsigned mask = 0; mask + 1 < 256; ++mask) {
    Digraph d(4);
    for (std::size_t i = 0; i < 8; ++i)
      if ((mask >> i) & 1U) d.add_arc(arcs[i].tail, arcs[i].head);
    buckets.insert(canonical_form(d));
  }
  CHECK(pats.size() == buckets.size());
  std::map<std::string, Digraph> by_name;
  for (const C4Pattern& p : pats) {
    by_name[p.name] = p.graph;
    CHECK(subdigraph_of(p.graph, full));
    CHECK(p.graph.arc_count() < 8);
  }
  REQUIRE(by_name.contains("H1"));
  REQUIRE(by_name.contains("H2"));
  REQUIRE(by_name.contains("rev-H2"));
  REQUIRE(by_name.contains("H3"));
  CHECK(by_name["H3"].arc_count() == 7);
  CHECK(by_name["H3"].order() == 4);
  // With these arc sets H1 is self-converse; H2 is not.
  CHECK(isomorphic(pattern_h1(), reverse(pattern_h1())));
  CHECK_FALSE(isomorphic(pattern_h2(), reverse(pattern_h2())));
  CHECK_FALSE(isomorphic(pattern_h1(), pattern_h2()));
  CHECK_FALSE(isomorphic(pattern_h1(), reverse(pattern_h2())));
}

TEST_CASE("six-arc patterns whose two digons share a vertex") {
  std::set<CanonicalKey> classes;
  for (const C4Pattern& p : c4_patterns()) {
    if (p.graph.arc_count() != 6) continue;
    int digons = 0;
    VertexSet touched;
    bool share = false;
    for (const Arc& a : p.graph.arcs()) {
      if (a.tail < a.head && p.graph.has_arc(a.head, a.tail)) {
        ++digons;
        share = share || touched.contains(a.tail) || touched.contains(a.head);
        touched.insert(a.tail);
        touched.insert(a.head);
      }
    }
    if (digons == 2 && share) classes.insert(canonical_form(p.graph));
  }
  const std::set<CanonicalKey> expected = {canonical_form(pattern_h1()), canonical_form(pattern_h2()),
                                           canonical_form(reverse(pattern_h2()))};
  CHECK(classes == expected);
}
