#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maderkit/digraph.hpp"

namespace maderkit {

/// Branch map plus one host dipath per pattern arc.
struct SubdivisionEmbedding {
  /// Pattern vertex -> host vertex.
  std::vector<int> branch;
  /// Pattern arc -> host dipath from branch[tail] to branch[head].
  std::map<Arc, Dipath> routes;

  bool operator==(const SubdivisionEmbedding&) const = default;
};

struct EmbeddingCheck {
  bool ok = true;
  /// First violated clause, empty when ok.
  std::string clause;
  explicit operator bool() const { return ok; }
};

EmbeddingCheck verify_embedding(const Digraph& host, const Digraph& pattern,
                                const SubdivisionEmbedding& e);

/// Exact search; the result passes verify_embedding.
std::optional<SubdivisionEmbedding> contains_subdivision(const Digraph& host, const Digraph& pattern);

class OracleSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kOracleMaxHost = 6;
inline constexpr int kOracleMaxPattern = 4;

/// Enumerates every branch map and every system of host dipaths, keeping
/// only disjoint ones. Hosts up to 6 vertices, patterns up to 4.
bool brute_force_oracle(const Digraph& host, const Digraph& pattern);

/// The same certificate read in reverse(host) for reverse(pattern).
SubdivisionEmbedding reverse_embedding(const SubdivisionEmbedding& e);
/// Keep the routes of the arcs of `sub`, a spanning subdigraph of the
/// pattern.
SubdivisionEmbedding restrict_embedding(const SubdivisionEmbedding& e, const Digraph& sub);

/// {"branch": {"f": d, ...}, "routes": {"u->v": [d, ...], ...}}
std::string embedding_to_json(const SubdivisionEmbedding& e);
/// Throws std::invalid_argument on malformed input.
SubdivisionEmbedding embedding_from_json(const std::string& text);

}  // namespace maderkit
