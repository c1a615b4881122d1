#include <random>

#include "doctest.h"
#include "maderkit/canonical.hpp"
#include "maderkit/subdivision.hpp"

using namespace maderkit;

namespace {

Digraph random_digraph(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution coin(p);
  Digraph d(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && coin(rng)) d.add_arc(u, v);
  return d;
}

}  // namespace

TEST_CASE("verify_embedding clauses") {
  const Digraph arc = make_digraph(2, {{0, 1}});
  SubdivisionEmbedding e{{0, 1}, {{{0, 1}, {0, 1}}}};
  CHECK(verify_embedding(arc, arc, e));

  // pattern 0->1, 2->3 routed through the shared interior vertex 4
  const Digraph host = make_digraph(5, {{0, 4}, {4, 1}, {2, 4}, {4, 3}});
  const Digraph two = make_digraph(4, {{0, 1}, {2, 3}});
  SubdivisionEmbedding bad{{0, 1, 2, 3}, {{{0, 1}, {0, 4, 1}}, {{2, 3}, {2, 4, 3}}}};
  const EmbeddingCheck r = verify_embedding(host, two, bad);
  CHECK_FALSE(r.ok);
  CHECK(r.clause == "interior overlap");

  // a digon realized by two anti-parallel paths in a bioriented triangle
  const Digraph k3 = complete_biorientation(3);
  const Digraph digon = complete_biorientation(2);
  SubdivisionEmbedding split{{0, 1}, {{{0, 1}, {0, 1}}, {{1, 0}, {1, 2, 0}}}};
  CHECK(verify_embedding(k3, digon, split));
  SubdivisionEmbedding wrong_end{{0, 1}, {{{0, 1}, {0, 2}}, {{1, 0}, {1, 0}}}};
  CHECK(verify_embedding(k3, digon, wrong_end).clause == "route 0->1 has wrong endpoints");
  SubdivisionEmbedding not_inj{{0, 0}, {{{0, 1}, {0, 1}}, {{1, 0}, {1, 0}}}};
  CHECK(verify_embedding(k3, digon, not_inj).clause == "branch map not injective");
}

TEST_CASE("contains_subdivision examples") {
  const auto tri = contains_subdivision(directed_cycle(5), directed_cycle(3));
  REQUIRE(tri);
  CHECK(verify_embedding(directed_cycle(5), directed_cycle(3), *tri));
  for (const CanonicalKey& key : enumerate_digraphs(4)) {
    const Digraph f = from_canonical(key);
    if (f.arc_count() == 0) continue;
    // ↔K₃ has only three vertices
    CHECK_FALSE(contains_subdivision(complete_biorientation(3), f));
  }
  const auto dg = contains_subdivision(directed_cycle(4), complete_biorientation(2));
  REQUIRE(dg);
  CHECK(verify_embedding(directed_cycle(4), complete_biorientation(2), *dg));
  CHECK(brute_force_oracle(directed_cycle(4), complete_biorientation(2)));
}

TEST_CASE("brute-force oracle examples") {
  CHECK(brute_force_oracle(Digraph(3), Digraph(1)));
  CHECK_FALSE(brute_force_oracle(Digraph(2), Digraph(3)));
  const Digraph h1 = make_digraph(4, {{0, 1}, {1, 0}, {0, 3}, {3, 0}, {1, 2}, {2, 3}});
  CHECK(brute_force_oracle(complete_biorientation(4), h1));
  CHECK_THROWS_AS(brute_force_oracle(Digraph(7), Digraph(1)), OracleSizeError);
}

TEST_CASE("search agrees with the oracle on random pairs up to 6 host vertices") {
  std::mt19937_64 rng(21);
  int positives = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const int m = 2 + static_cast<int>(rng() % 3);
    const Digraph d = random_digraph(rng, n, 0.25 + 0.1 * (trial % 5));
    const Digraph f = random_digraph(rng, m, 0.4);
    const auto e = contains_subdivision(d, f);
    CHECK(e.has_value() == brute_force_oracle(d, f));
    if (e) {
      ++positives;
      CHECK(verify_embedding(d, f, *e));
    }
  }
  CHECK(positives > 50);
}

TEST_CASE("reversal duality and monotonicity on sampled instances") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 400; ++trial) {
    const Digraph d = random_digraph(rng, 5, 0.45);
    const Digraph f = random_digraph(rng, 3 + trial % 2, 0.5);
    const auto e = contains_subdivision(d, f);
    const auto r = contains_subdivision(reverse(d), reverse(f));
    CHECK(e.has_value() == r.has_value());
    if (!e) continue;
    CHECK(verify_embedding(reverse(d), reverse(f), reverse_embedding(*e)));
    Digraph sub = f;
    const auto arcs = f.arcs();
    for (const Arc& a : arcs)
      if (rng() % 2) sub.remove_arc(a.tail, a.head);
    CHECK(verify_embedding(d, sub, restrict_embedding(*e, sub)));
    CHECK(contains_subdivision(d, sub).has_value());
  }
}

TEST_CASE("isolated pattern vertices avoid route interiors") {
  // path 0->1->2 in the host, pattern: an arc plus an isolated vertex
  const Digraph host = make_digraph(3, {{0, 1}, {1, 2}});
  const Digraph f = make_digraph(3, {{0, 1}});
  const auto e = contains_subdivision(host, f);
  REQUIRE(e);
  CHECK(verify_embedding(host, f, *e));
  // a 2-arc route would leave no room for the isolated vertex
  const Digraph skip = make_digraph(3, {{0, 2}, {2, 1}});
  CHECK(contains_subdivision(skip, make_digraph(3, {{0, 1}}))->branch.size() == 3);
  // the digon needs the whole host, leaving nothing for the isolated vertex
  CHECK_FALSE(contains_subdivision(directed_cycle(3), make_digraph(3, {{0, 1}, {1, 0}})));
}

TEST_CASE("embedding JSON round trip") {
  SubdivisionEmbedding e{{2, 0}, {{{0, 1}, {2, 1, 0}}}};
  const std::string text = embedding_to_json(e);
  CHECK(text == R"({"branch":{"0":2,"1":0},"routes":{"0->1":[2,1,0]}})");
  CHECK(embedding_from_json(text) == e);
  CHECK_THROWS_AS(embedding_from_json("{\"branch\":{}}"), std::invalid_argument);
}
