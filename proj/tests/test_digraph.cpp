#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "maderkit/canonical.hpp"
#include "maderkit/digraph.hpp"

using namespace maderkit;

namespace {

Digraph from_mask(int n, std::uint64_t mask) {
  Digraph d(n);
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) {
        if ((mask >> bit) & 1U) d.add_arc(u, v);
        ++bit;
      }
  return d;
}

// Key that is invariant by construction: minimum adjacency code over all
// n! relabelings.
std::uint64_t permutation_min_code(const Digraph& d) {
  const int n = d.order();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t code = 0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v) code = (code << 1) | (d.has_arc(perm[u], perm[v]) ? 1U : 0U);
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool brute_k_strong(const Digraph& d, int k) {
  const int n = d.order();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (std::popcount(s) >= k) continue;
    VertexSet rest = d.vertices() - VertexSet(s);
    if (rest.empty()) continue;
    // strongly connected iff the first vertex reaches and is reached by all
    const VertexSet r = VertexSet::single(rest.first());
    if (reachable(d, r, rest) != rest || reaching(d, r, rest) != rest) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("make_digraph normalizes and rejects bad arcs") {
  const Digraph digon = make_digraph(2, {{0, 1}, {1, 0}});
  CHECK(digon.arc_count() == 2);
  const Digraph dup = make_digraph(3, {{1, 2}, {0, 1}, {1, 2}});
  CHECK(dup.arcs() == std::vector<Arc>{{0, 1}, {1, 2}});
  CHECK_THROWS_WITH_AS(make_digraph(1, {{0, 0}}), doctest::Contains("loop"), DigraphError);
  CHECK_THROWS_AS(make_digraph(2, {{0, 2}}), DigraphError);
}

TEST_CASE("reverse") {
  CHECK(reverse(make_digraph(2, {{0, 1}})).arcs() == std::vector<Arc>{{1, 0}});
  const Digraph k3 = complete_biorientation(3);
  CHECK(reverse(k3) == k3);
  const Digraph tri = directed_cycle(3);
  CHECK(reverse(tri).arcs() == std::vector<Arc>{{0, 2}, {1, 0}, {2, 1}});
  CHECK(canonical_form(reverse(tri)) == canonical_form(tri));
}

TEST_CASE("biorient and underlying graph") {
  CHECK(biorient(2, {{0, 1}}).arc_count() == 2);
  const Digraph c4 = biorient(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(c4.arc_count() == 8);
  CHECK(biorient(3, {{0, 1}, {1, 2}}).arc_count() == 4);
  CHECK(underlying_graph(make_digraph(2, {{0, 1}, {1, 0}})).edge_count() == 1);
  CHECK(underlying_graph(directed_cycle(3)).edge_count() == 3);
  CHECK(underlying_graph(Digraph(4)).edge_count() == 0);
}

TEST_CASE("induced subdigraphs") {
  const Digraph k4 = complete_biorientation(4);
  CHECK(induced(k4, {}).graph.order() == 0);
  CHECK(induced(k4, k4.vertices()).graph == k4);
  const InducedSubdigraph sub = induced(k4, VertexSet::of(std::vector<int>{0, 2, 3}));
  CHECK(sub.graph == complete_biorientation(3));
  CHECK(sub.to_parent == std::vector<int>{0, 2, 3});
  CHECK(sub.from_parent == std::vector<int>{0, -1, 1, 2});
}

TEST_CASE("strong components") {
  CHECK(strong_components(directed_cycle(3)).count() == 1);
  const StrongComponents arc = strong_components(make_digraph(2, {{0, 1}}));
  CHECK(arc.count() == 2);
  // topological: the tail's component precedes the head's
  CHECK(arc.component_of[0] < arc.component_of[1]);
  const Digraph two = disjoint_union(complete_biorientation(2), complete_biorientation(2));
  CHECK(strong_components(two).count() == 2);
}

TEST_CASE("k-strong connectivity") {
  const Digraph c5 = directed_cycle(5);
  CHECK(is_k_strongly_connected(c5, 1));
  CHECK_FALSE(is_k_strongly_connected(c5, 2));
  CHECK(is_k_strongly_connected(complete_biorientation(4), 3));
  CHECK(brute_k_strong(complete_biorientation(4), 3));
  CHECK_FALSE(is_k_strongly_connected(disjoint_union(c5, c5), 1));
}

TEST_CASE("k-strong connectivity: Menger agrees with subset deletion") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const Digraph d = from_mask(n, rng() & ((std::uint64_t{1} << (n * (n - 1))) - 1) | rng());
    for (int k = 1; k <= n; ++k) {
      const bool expect = brute_k_strong(d, k);
      CHECK(is_k_strongly_connected(d, k) == expect);
      CHECK(is_k_strongly_connected_brute(d, k) == expect);
    }
  }
}

TEST_CASE("shortest_dipath") {
  const Digraph p = directed_path(3);
  CHECK(shortest_dipath(p, VertexSet::single(0), VertexSet::single(0)) == Dipath{0});
  CHECK_FALSE(shortest_dipath(p, VertexSet::single(0), VertexSet::single(2), VertexSet::single(1)));
  CHECK(shortest_dipath(complete_biorientation(3), VertexSet::single(0), VertexSet::single(2)) ==
        Dipath{0, 2});
  // tie-break: lexicographically least among shortest
  const Digraph diamond = make_digraph(4, {{0, 2}, {0, 1}, {1, 3}, {2, 3}});
  CHECK(shortest_dipath(diamond, VertexSet::single(0), VertexSet::single(3)) == Dipath{0, 1, 3});
}

TEST_CASE("shortest_dipath results validate on random hosts") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const Digraph d = from_mask(n, rng());
    const VertexSet all = d.vertices();
    const VertexSet x = VertexSet(rng()) & all;
    const VertexSet y = VertexSet(rng()) & all;
    const VertexSet forbidden = VertexSet(rng() & rng()) & all;
    if (x.empty() || y.empty()) continue;
    auto path = shortest_dipath(d, x, y, forbidden);
    if (!path) {
      const VertexSet inner = all - forbidden - x - y;
      bool some = false;
      for (int s : x - forbidden) {
        const VertexSet mid = reachable(d, d.out_neighbors(s) & inner, inner) | VertexSet::single(s);
        for (int t : y - forbidden) {
          if (s == t) some = true;
          for (int m : mid) some = some || d.has_arc(m, t);
        }
      }
      CHECK_FALSE(some);
      continue;
    }
    CHECK(is_dipath(d, *path));
    CHECK(x.contains(path->front()));
    CHECK(y.contains(path->back()));
    for (int v : *path) CHECK_FALSE(forbidden.contains(v));
    for (std::size_t i = 1; i + 1 < path->size(); ++i) {
      CHECK_FALSE(x.contains((*path)[i]));
      CHECK_FALSE(y.contains((*path)[i]));
    }
  }
}

TEST_CASE("find_dicycle_through") {
  CHECK(find_dicycle_through(make_digraph(2, {{0, 1}, {1, 0}}), 0) == Dipath{0, 1});
  CHECK_FALSE(find_dicycle_through(make_digraph(2, {{0, 1}}), 0));
  CHECK(find_dicycle_through(directed_cycle(4), 2) == Dipath{2, 3, 0, 1});
}

TEST_CASE("text format round trip") {
  const Digraph d = make_digraph(4, {{3, 0}, {0, 1}, {1, 0}});
  CHECK(to_text(d) == "4 3\n0 1\n1 0\n3 0\n");
  CHECK(parse_digraph("# comment\n4 3\n0 1\n\n1 0\n3 0\n") == d);
  CHECK_THROWS_AS(parse_digraph("2 1\n0 0\n"), DigraphError);
  CHECK_THROWS_AS(parse_digraph("2 2\n0 1\n"), DigraphError);
}

TEST_CASE("canonical form basics") {
  const Digraph tri = directed_cycle(3);
  const Digraph other = make_digraph(3, {{0, 2}, {2, 1}, {1, 0}});
  CHECK(canonical_form(tri) == canonical_form(other));
  const Digraph digon_iso = make_digraph(3, {{0, 1}, {1, 0}});
  CHECK(canonical_form(tri) != canonical_form(digon_iso));
  const Digraph arc = make_digraph(2, {{0, 1}});
  CHECK(canonical_form(arc) == canonical_form(reverse(arc)));
  CHECK_THROWS_AS(canonical_form(Digraph(9)), OrderLimitError);
}

TEST_CASE("canonical form is invariant and complete on random digraphs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const Digraph d = from_mask(n, rng() & rng());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Digraph p = permute(d, perm);
    CHECK(canonical_form(d) == canonical_form(p));
    const std::vector<int> lab = canonical_labeling(d);
    CHECK(permute(d, lab) == from_canonical(canonical_form(d)));
  }
}

TEST_CASE("labeled bucketing matches the enumerator for n <= 4") {
  for (int n = 0; n <= 4; ++n) {
    std::set<std::uint64_t> buckets;
    std::set<CanonicalKey> keys;
    const int bits = n * (n - 1);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      const Digraph d = from_mask(n, mask);
      buckets.insert(permutation_min_code(d));
      keys.insert(canonical_form(d));
    }
    CHECK(keys.size() == buckets.size());
    CHECK(count_digraph_classes(n) == buckets.size());
    const auto& reps = enumerate_digraphs(n);
    CHECK(std::set<CanonicalKey>(reps.begin(), reps.end()) == keys);
  }
  CHECK(count_digraph_classes(1) == 1);
  CHECK(count_digraph_classes(2) == 3);
  CHECK(count_digraph_classes(4) == 218);
}

TEST_CASE("enumeration is pairwise non-isomorphic at n = 5") {
  const auto& reps = enumerate_digraphs(5);
  CHECK(reps.size() == 9608);
  std::set<CanonicalKey> keys;
  for (const CanonicalKey& k : reps) keys.insert(canonical_form(from_canonical(k)));
  CHECK(keys.size() == reps.size());
  CHECK_THROWS_AS(enumerate_digraphs(7), OrderLimitError);
}

TEST_CASE("reversal properties on the n = 4 classes") {
  for (const CanonicalKey& key : enumerate_digraphs(4)) {
    const Digraph d = from_canonical(key);
    CHECK(reverse(reverse(d)) == d);
    const StrongComponents a = strong_components(d);
    const StrongComponents b = strong_components(reverse(d));
    std::set<std::uint64_t> pa;
    std::set<std::uint64_t> pb;
    for (auto c : a.components) pa.insert(c.bits());
    for (auto c : b.components) pb.insert(c.bits());
    CHECK(pa == pb);
  }
}
