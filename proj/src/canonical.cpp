#include "maderkit/canonical.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>
#include <string>
#include <unordered_set>

namespace maderkit {

namespace detail {

namespace {

struct Search {
  int n = 0;
  int total_bits = 0;
  std::uint8_t out[8] = {};
  int cell_of_position[8] = {};
  int color[8] = {};
  int perm[8] = {};  // position -> vertex
  std::uint8_t used = 0;
  bool have_best = false;
  std::uint64_t best = 0;
  int best_perm[8] = {};

  void run(int p, std::uint64_t prefix) {
    if (p == n) {
      if (!have_best || prefix > best) {
        have_best = true;
        best = prefix;
        std::copy(perm, perm + n, best_perm);
      }
      return;
    }
    const int shift = total_bits - (p + 1) * p;
    const std::uint64_t best_prefix = have_best ? (shift >= 64 ? 0 : best >> shift) : 0;
    for (int v = 0; v < n; ++v) {
      if ((used >> v) & 1U) continue;
      if (color[v] != cell_of_position[p]) continue;
      std::uint64_t code = prefix;
      for (int q = 0; q < p; ++q) {
        const int w = perm[q];
        code = (code << 2) | (static_cast<std::uint64_t>((out[w] >> v) & 1U) << 1) |
               static_cast<std::uint64_t>((out[v] >> w) & 1U);
      }
      if (have_best && code < best_prefix) continue;
      perm[p] = v;
      used |= static_cast<std::uint8_t>(1U << v);
      run(p + 1, code);
      used &= static_cast<std::uint8_t>(~(1U << v));
    }
  }
};

// Colour refinement: split cells by counts of out-only / in-only / digon
// neighbours per cell until stable. Cell order is derived from sorted
// signatures so the ordered partition is an isomorphism invariant.
void refine(int n, const std::uint8_t* out, const std::uint8_t* in, int* color) {
  using Sig = std::array<std::uint8_t, 1 + 3 * 8>;
  std::fill(color, color + n, 0);
  int ncolors = n == 0 ? 0 : 1;
  while (true) {
    Sig sig[8];
    for (int v = 0; v < n; ++v) {
      sig[v].fill(0);
      sig[v][0] = static_cast<std::uint8_t>(color[v]);
      for (int w = 0; w < n; ++w) {
        const int rel = ((out[v] >> w) & 1U) | (((in[v] >> w) & 1U) << 1);
        if (rel != 0) ++sig[v][1 + 3 * color[w] + rel - 1];
      }
    }
    int order[8];
    std::iota(order, order + n, 0);
    std::sort(order, order + n, [&](int a, int b) { return sig[a] < sig[b]; });
    int next = 0;
    int fresh[8];
    for (int i = 0; i < n; ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++next;
      fresh[order[i]] = next;
    }
    const int count = n == 0 ? 0 : next + 1;
    std::copy(fresh, fresh + n, color);
    if (count == ncolors) break;
    ncolors = count;
  }
}

}  // namespace

std::uint64_t canonical_code(int n, const std::uint8_t* out_rows, int* labeling_out) {
  Search s;
  s.n = n;
  s.total_bits = n * (n - 1);
  std::uint8_t in[8] = {};
  for (int u = 0; u < n; ++u) {
    s.out[u] = out_rows[u];
    for (int v = 0; v < n; ++v)
      if ((out_rows[u] >> v) & 1U) in[v] |= static_cast<std::uint8_t>(1U << u);
  }
  refine(n, s.out, in, s.color);
  int sorted_colors[8];
  std::copy(s.color, s.color + n, sorted_colors);
  std::sort(sorted_colors, sorted_colors + n);
  std::copy(sorted_colors, sorted_colors + n, s.cell_of_position);
  s.run(0, 0);
  if (labeling_out != nullptr) {
    for (int p = 0; p < n; ++p) labeling_out[s.best_perm[p]] = p;
  }
  return s.best;
}

}  // namespace detail

namespace {

void check_order(const Digraph& d) {
  if (d.order() > kCanonicalMaxOrder) {
    throw OrderLimitError("canonical form supports order <= " + std::to_string(kCanonicalMaxOrder) +
                          ", got " + std::to_string(d.order()));
  }
}

void rows_of(const Digraph& d, std::uint8_t* rows) {
  for (int v = 0; v < d.order(); ++v) rows[v] = static_cast<std::uint8_t>(d.out_neighbors(v).bits());
}

}  // namespace

CanonicalKey canonical_form(const Digraph& d) {
  check_order(d);
  std::uint8_t rows[8] = {};
  rows_of(d, rows);
  return {d.order(), detail::canonical_code(d.order(), rows)};
}

std::vector<int> canonical_labeling(const Digraph& d) {
  check_order(d);
  std::uint8_t rows[8] = {};
  rows_of(d, rows);
  int labeling[8] = {};
  detail::canonical_code(d.order(), rows, labeling);
  return {labeling, labeling + d.order()};
}

Digraph from_canonical(const CanonicalKey& key) {
  const int n = key.order;
  Digraph d(n);
  int bit = n * (n - 1);
  for (int p = 1; p < n; ++p) {
    for (int q = 0; q < p; ++q) {
      bit -= 2;
      if ((key.code >> (bit + 1)) & 1U) d.add_arc(q, p);
      if ((key.code >> bit) & 1U) d.add_arc(p, q);
    }
  }
  return d;
}

bool isomorphic(const Digraph& a, const Digraph& b) {
  return a.order() == b.order() && a.arc_count() == b.arc_count() &&
         canonical_form(a) == canonical_form(b);
}

namespace {

std::vector<CanonicalKey> extend_classes(const std::vector<CanonicalKey>& parents, int n) {
  // Every n-vertex digraph minus its last vertex is isomorphic to some
  // parent, so appending a vertex with all in/out patterns covers every
  // class; canonical keys remove the duplicates.
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(parents.size() * 256);
  const int m = n - 1;
  for (const CanonicalKey& parent : parents) {
    const Digraph base = from_canonical(parent);
    std::uint8_t rows[8] = {};
    for (int v = 0; v < m; ++v) rows[v] = static_cast<std::uint8_t>(base.out_neighbors(v).bits());
    for (unsigned outs = 0; outs < (1U << m); ++outs) {
      rows[m] = static_cast<std::uint8_t>(outs);
      for (unsigned ins = 0; ins < (1U << m); ++ins) {
        std::uint8_t child[8];
        for (int v = 0; v < m; ++v)
          child[v] = static_cast<std::uint8_t>(rows[v] | (((ins >> v) & 1U) << m));
        child[m] = rows[m];
        seen.insert(detail::canonical_code(n, child));
      }
    }
  }
  std::vector<std::uint64_t> codes(seen.begin(), seen.end());
  std::sort(codes.begin(), codes.end());
  std::vector<CanonicalKey> keys;
  keys.reserve(codes.size());
  for (auto c : codes) keys.push_back({n, c});
  return keys;
}

}  // namespace

const std::vector<CanonicalKey>& enumerate_digraphs(int order) {
  if (order < 0 || order > kExhaustiveMaxOrder) {
    throw OrderLimitError("exhaustive enumeration supports order <= " +
                          std::to_string(kExhaustiveMaxOrder) + ", got " + std::to_string(order) +
                          "; use sampling mode for larger hosts");
  }
  static std::mutex mutex;
  static std::array<std::vector<CanonicalKey>, kExhaustiveMaxOrder + 1> cache;
  static std::array<bool, kExhaustiveMaxOrder + 1> ready{};
  std::lock_guard<std::mutex> lock(mutex);
  for (int n = 0; n <= order; ++n) {
    if (ready[n]) continue;
    cache[n] = n <= 1 ? std::vector<CanonicalKey>{{n, 0}} : extend_classes(cache[n - 1], n);
    ready[n] = true;
  }
  return cache[order];
}

std::size_t count_digraph_classes(int order) { return enumerate_digraphs(order).size(); }

}  // namespace maderkit
