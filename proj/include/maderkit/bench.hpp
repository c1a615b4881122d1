#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maderkit/digraph.hpp"

namespace maderkit {

/// 4^m (n - 1) + 1 for a pattern with n vertices and m arcs, in decimal.
std::string bound_general(int n, std::size_t m);
std::string bound_general(const Digraph& f);
/// 4^(k^2 - 2k + 1) (k - 1) + 1, in decimal. Throws for k < 1.
std::string bound_bicomplete(int k);

class BudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SampleMode {
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

struct CampaignOptions {
  /// Empty: no cache.
  std::string cache_dir;
  /// 0: hardware concurrency.
  unsigned workers = 0;
};

/// Cache counters and audit results; kept out of the report so reruns
/// produce identical bytes.
struct CacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t audited = 0;
  std::size_t audit_mismatches = 0;
  bool rejected_file = false;
};

struct CampaignReport {
  std::string pattern;  // text format
  int pattern_order = 0;
  int n_max = 0;
  std::string mode;  // "exhaustive" or "sample"
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
  std::size_t hosts = 0;
  std::map<int, std::size_t> chi_histogram;
  /// Hosts with chi >= |V(F)| and no subdivision, in text format.
  std::vector<std::string> violations;
  /// The bioriented K_{|V(F)|-1} contains no subdivision of F.
  bool lower_bound_witness = true;
  double wall_seconds = 0;
  CacheStats cache;
};

/// Checks chi(D) >= |V(F)| => subdivision over every class of order
/// 0..n_max (n_max <= 6), or over `sample->count` uniform random labeled
/// digraphs of order n_max drawn from mt19937_64 with the given seed.
CampaignReport mader_campaign(const Digraph& f, int n_max, std::optional<SampleMode> sample = std::nullopt,
                              const CampaignOptions& options = {});

/// Schema-1 JSON; wall time only when `timing`.
std::string report_to_json(const CampaignReport& r, bool timing = false);

struct LemmaEntry {
  std::string name;
  std::size_t checked = 0;
  /// Failing instances in text format.
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

struct LemmaReport {
  int n_max = 0;
  std::vector<LemmaEntry> entries;
  bool passed() const;
};

/// Patterns used by the reversal-duality check.
std::vector<Digraph> duality_battery();

/// Reversal duality, dicritical degree and strong connectivity, and the
/// deletable-vertex property, on every class of order <= n_max (<= 6).
/// With `sample`, the duality battery also runs on that many random
/// labeled digraphs of order `sample_order`.
LemmaReport lemma_suite(int n_max, std::optional<SampleMode> sample = std::nullopt, int sample_order = 5);

std::string lemma_report_to_json(const LemmaReport& r);

}  // namespace maderkit
