#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "maderkit/digraph.hpp"

namespace maderkit {

/// Largest order accepted by canonical_form.
inline constexpr int kCanonicalMaxOrder = 8;
/// Largest order enumerate_digraphs handles exhaustively.
inline constexpr int kExhaustiveMaxOrder = 6;

/// Isomorphism-class key: the maximal adjacency code over all vertex
/// orders compatible with an invariant colour refinement. The code lists,
/// for positions p = 1..n-1 and q = 0..p-1, the bits [q->p, p->q], most
/// significant first.
struct CanonicalKey {
  int order = 0;
  std::uint64_t code = 0;
  auto operator<=>(const CanonicalKey&) const = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.code * 0x9E3779B97F4A7C15ULL + static_cast<unsigned>(k.order));
  }
};

class OrderLimitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

CanonicalKey canonical_form(const Digraph& d);
/// Position of each vertex in the canonical order: permute(d, labeling)
/// equals from_canonical(canonical_form(d)).
std::vector<int> canonical_labeling(const Digraph& d);
/// The canonical representative.
Digraph from_canonical(const CanonicalKey& key);
bool isomorphic(const Digraph& a, const Digraph& b);

/// One canonical representative per isomorphism class, sorted by key.
/// Throws OrderLimitError above kExhaustiveMaxOrder; use sampling there.
const std::vector<CanonicalKey>& enumerate_digraphs(int order);

/// Number of classes; n = 0..6 are held in memory after the first call.
std::size_t count_digraph_classes(int order);

namespace detail {
/// Canonical code of a digraph given as out-neighbour rows (n <= 8).
std::uint64_t canonical_code(int n, const std::uint8_t* out_rows, int* labeling_out = nullptr);
}  // namespace detail

}  // namespace maderkit
