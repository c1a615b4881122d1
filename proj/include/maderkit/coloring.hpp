#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maderkit/digraph.hpp"

namespace maderkit {

/// Vertex -> colour in 1..k. Validity (acyclic classes) is checked by
/// is_acyclic_coloring, not enforced on construction.
struct AcyclicColoring {
  int k = 0;
  std::vector<int> color;

  /// Members of colour class i (1-based).
  VertexSet color_class(int i) const;
  /// Classes 1..k as vertex lists.
  std::vector<std::vector<int>> classes() const;
  static AcyclicColoring from_classes(int order, int k, const std::vector<std::vector<int>>& classes);
  bool operator==(const AcyclicColoring&) const = default;
};

class ColoringError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ColoringError when the assignment is partial or out of 1..k.
bool is_acyclic_coloring(const Digraph& d, const AcyclicColoring& c);

struct DichromaticResult {
  int chi = 0;
  AcyclicColoring witness;
};

/// Exact dichromatic number by branch and bound.
DichromaticResult dichromatic_number(const Digraph& d);
/// Exact search over all set partitions; small orders only (<= 10).
int dichromatic_number_exhaustive(const Digraph& d);
/// Acyclic colouring with at most k colours, if one exists.
std::optional<AcyclicColoring> acyclic_coloring_at_most(const Digraph& d, int k);

bool is_dicritical(const Digraph& d, int k);

struct CriticalCore {
  Digraph graph;
  /// Core vertex -> vertex of the input digraph.
  std::vector<int> to_parent;
};

/// A chi(D)-dicritical subdigraph found by greedy vertex then arc deletion.
CriticalCore dicritical_subdigraph(const Digraph& d);
/// A k-dicritical subdigraph for any 1 <= k <= chi(D).
CriticalCore dicritical_subdigraph(const Digraph& d, int k);

/// Entry i = number of `targets` coloured i+1.
std::vector<int> color_vector(const AcyclicColoring& c, VertexSet targets);
/// Same with targets = out-neighbours of x0 in `ambient`, restricted to
/// the vertices of `sub` (coloured by c).
std::vector<int> color_vector(const Digraph& ambient, const InducedSubdigraph& sub,
                              const AcyclicColoring& c, int x0);

/// Acyclic k-colouring of d whose colour vector w.r.t. `targets` is
/// lexicographically minimal. Throws ColoringError when chi(d) > k.
AcyclicColoring lex_minimal_coloring(const Digraph& d, VertexSet targets, int k);
/// Ambient form: targets are N+(x0) in `ambient` mapped into `sub`.
AcyclicColoring lex_minimal_coloring(const Digraph& ambient, const InducedSubdigraph& sub, int x0,
                                     int k);
/// Minimal colour vector by enumerating all k^n assignments (n <= 10).
std::optional<std::vector<int>> lex_minimal_vector_exhaustive(const Digraph& d, VertexSet targets,
                                                              int k);

class NotLexMinimalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Anchors certified by lex-minimality, in ambient vertex indices.
struct AnchorChain {
  /// x_1..x_k (index 0 holds x_1).
  std::vector<int> anchors;
  /// Dicycle through x0 and x_1, starting at x0, all other vertices in
  /// colour class 1.
  Dipath cycle;
  /// components[i] is the strong component of D[c^-1({i+1, i+2})]
  /// containing x_{i+1} and x_{i+2}.
  std::vector<VertexSet> components;
};

/// Colour of each ambient vertex: c on sub's vertices, 0 elsewhere.
std::vector<int> lift_coloring(const Digraph& ambient, const InducedSubdigraph& sub,
                               const AcyclicColoring& c);

/// Searches the anchors of a lex-minimal colouring; throws
/// NotLexMinimalError when none exist.
AnchorChain anchor_chain(const Digraph& ambient, const InducedSubdigraph& sub,
                         const AcyclicColoring& c, int x0, int k);
/// Mechanical postcondition check of an anchor chain.
bool check_anchor_chain(const Digraph& ambient, const std::vector<int>& ambient_color, int x0,
                        int k, const AnchorChain& chain, std::string* why = nullptr);

}  // namespace maderkit
