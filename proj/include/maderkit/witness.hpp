#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "maderkit/coloring.hpp"
#include "maderkit/digraph.hpp"
#include "maderkit/family.hpp"
#include "maderkit/subdivision.hpp"

namespace maderkit {

/// JSON lines, one record per step.
using Trace = std::vector<std::string>;

/// Raised when a branch the construction rules out is reached. `dump`
/// holds a reproducer: the digraph in text format plus the state.
class InternalInconsistency : public std::runtime_error {
 public:
  InternalInconsistency(const std::string& what, std::string dump)
      : std::runtime_error("internal-inconsistency: " + what), dump(std::move(dump)) {}
  std::string dump;
};

/// An existence step of the ear construction failed.
class PreconditionViolated : public std::runtime_error {
 public:
  explicit PreconditionViolated(const std::string& what)
      : std::runtime_error("precondition-violated: " + what) {}
};

/// Vertex partition of D relative to x and a 3-colouring of D - x.
struct HPartition {
  int x = 0;
  VertexSet v1, v2, v3;
  VertexSet b1, b2;
  VertexSet b1_1, b1_2;  // B^1_1, B^1_2
  VertexSet a1, a2;
  VertexSet b2_1, b2_2;  // B^2_1, B^2_2
  VertexSet e;
  VertexSet t0, t1, t2, t3;
  VertexSet p1, p2, p3;  // V'_1, V'_2, V'_3
  VertexSet q1, q2, q3;  // tilde V_1..3
};

/// `c3` colours D with x uncoloured (colour 0) or any colour, which is
/// ignored. Throws std::invalid_argument when D - x is not strongly
/// connected or c3 is not an acyclic 3-colouring of D - x.
HPartition h_partition(const Digraph& d, int x, const AcyclicColoring& c3);

/// tilde V_1..3 as a colouring of D; acyclicity is not checked.
AcyclicColoring recolor(const HPartition& p, int order);

enum class HPattern { kH1, kH2 };

Digraph h_pattern(HPattern k);

struct CertifyOutcome {
  std::variant<AcyclicColoring, SubdivisionEmbedding> certificate;
  Trace trace;

  bool is_coloring() const { return certificate.index() == 0; }
  const AcyclicColoring& coloring() const { return std::get<0>(certificate); }
  const SubdivisionEmbedding& embedding() const { return std::get<1>(certificate); }
};

/// Acyclic 3-colouring of D, or a subdivision of H1/H2 in D. Throws
/// InternalInconsistency if neither can be produced.
CertifyOutcome certify_h(const Digraph& d, HPattern k);

/// Subdivision provider: embedding of the fixed pattern in the given
/// digraph, or none.
using SubdivisionFinder = std::function<std::optional<SubdivisionEmbedding>(const Digraph&)>;

struct EarWitness {
  SubdivisionEmbedding embedding;
  /// Pattern the embedding targets, ear_add(F, step).
  Digraph pattern;
  Trace trace;
};

/// Embeds ear_add(F, step) in D from a finder for F that succeeds on every
/// subdigraph of dichromatic number >= budget. Requires chi(D) >= budget
/// + k. Throws PreconditionViolated when an existence step fails.
EarWitness ear_witness(const Digraph& d, const Digraph& f, const EarStep& step,
                       const SubdivisionFinder& finder, int budget);
/// Budget |V(F)| with contains_subdivision as the finder.
EarWitness ear_witness(const Digraph& d, const Digraph& f, const EarStep& step);

}  // namespace maderkit
