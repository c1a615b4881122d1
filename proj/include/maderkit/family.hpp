#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "maderkit/digraph.hpp"

namespace maderkit {

class FamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Good subdigraph of the bioriented path on spine v_1..v_k, stored with
/// v_i as vertex i-1.
struct GoodPath {
  Digraph q;
  int k() const { return q.order(); }
  bool operator==(const GoodPath&) const = default;
};

/// Connected, spanning, digons pairwise disjoint, and v_1 of total degree
/// 1 when k >= 2. Throws FamilyError on an arc between non-consecutive
/// spine vertices.
bool is_good(const Digraph& q);

/// Every good subdigraph of the bioriented k-path, labeled by the spine
/// (no quotient by reflection, since v_1 and v_k play different roles).
std::vector<GoodPath> enumerate_good(int k);
/// Same, restricted to digon-free members (orientations of paths).
std::vector<GoodPath> enumerate_oriented_paths(int k);

enum class EndArc { kNone, kToVk, kFromVk };

/// Adds Q on fresh vertices n..n+k-1 (v_1..v_k), both arcs between v0 and
/// v_1, and for k >= 2 the arc (v0, v_k) or (v_k, v0).
Digraph ear_add(const Digraph& f, int v0, const GoodPath& q, EndArc end);

struct EarStep {
  int v0 = 0;
  GoodPath q;
  EndArc end = EndArc::kNone;
  bool operator==(const EarStep&) const = default;
};

/// Keep `vertices` (new vertex i is vertices[i]) and the listed arcs,
/// given in the labels of the digraph before the step.
struct SubStep {
  std::vector<int> vertices;
  std::vector<Arc> arcs;
  bool operator==(const SubStep&) const = default;
};

using FamilyStep = std::variant<EarStep, SubStep>;

struct FamilyDerivation {
  std::vector<FamilyStep> steps;
  bool operator==(const FamilyDerivation&) const = default;
};

/// Replays from K_1. Throws FamilyError on an invalid step.
Digraph replay(const FamilyDerivation& d);

std::string derivation_to_json(const FamilyDerivation& d);
FamilyDerivation derivation_from_json(const std::string& text);

/// Largest order the recognizers build members for.
inline constexpr int kFamilyMaxOrder = 8;

/// Ear-only members on exactly `order` vertices, one per isomorphism
/// class, each with the ears that build it. `oriented` restricts ears to
/// digon-free paths.
struct MaximalMember {
  Digraph graph;
  std::vector<EarStep> ears;
};
const std::vector<MaximalMember>& maximal_members(int order, bool oriented = false);

/// Bounded recognizer: F as a subdigraph of an ear-only member on at most
/// |V(F)| + slack vertices, per UG component if the whole digraph fails.
/// Absence means the bounded search failed, not non-membership. Throws
/// FamilyError when |V(F)| + slack exceeds kFamilyMaxOrder.
std::optional<FamilyDerivation> in_family(const Digraph& f, int slack = 0);
/// As in_family with digon-free ears.
std::optional<FamilyDerivation> in_octi(const Digraph& f, int slack = 0);

/// Digraphs on `order` vertices recognized by in_family(., slack), one per
/// isomorphism class, in canonical-key order.
std::vector<Digraph> family_members(int order, int slack = 0);

/// Injective vertex map sending every arc of `small` to an arc of `big`.
std::optional<std::vector<int>> find_monomorphism(const Digraph& small, const Digraph& big);

struct OutmostCycle {
  /// Undirected cycle in traversal order, starting at u.
  std::vector<int> cycle;
  int u = 0;
};

/// A cycle C in a leaf cyclic block of the block-cut tree together with
/// the cut vertex u through which every other cyclic block is reached.
/// None iff the graph is a forest.
std::optional<OutmostCycle> outmost_cycle(const UndirectedGraph& g);
/// Deletion test: in G - u no vertex of C other than u reaches a vertex
/// of another block that lies on a cycle.
bool check_outmost_cycle(const UndirectedGraph& g, const OutmostCycle& c);

struct C4Pattern {
  /// "H1", "H2", "H3", "rev-H2", or "K<i>" for the remaining classes.
  std::string name;
  Digraph graph;
};

/// Cyclic vertex order a, b, c, d = 0, 1, 2, 3.
/// Provisional arc sets, read off the geometry of the extraction argument
/// (C_u, C_w through x = a; P_1 into v = c; P_2 out of or into c). They
/// must be replaced if the reference drawing shows otherwise.
Digraph pattern_h1();
Digraph pattern_h2();
/// Bioriented C4 minus the arc (a, b); all eight choices are isomorphic.
Digraph pattern_h3();
Digraph bioriented_c4();

/// Every proper subdigraph of the bioriented C4 on its four vertices, one
/// per isomorphism class.
std::vector<C4Pattern> c4_patterns();

}  // namespace maderkit
