#include "maderkit/bench.hpp"

#include <atomic>
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "maderkit/canonical.hpp"
#include "maderkit/coloring.hpp"
#include "maderkit/family.hpp"
#include "maderkit/subdivision.hpp"

namespace maderkit {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow4(std::uint64_t e) {
  cpp_int r = 1;
  r <<= static_cast<unsigned>(2 * e);
  return r;
}

}  // namespace

std::string bound_general(int n, std::size_t m) {
  const cpp_int v = pow4(m) * (n - 1) + 1;
  return v.str();
}

std::string bound_general(const Digraph& f) { return bound_general(f.order(), f.arc_count()); }

std::string bound_bicomplete(int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const auto kk = static_cast<std::uint64_t>(k);
  const cpp_int v = pow4(kk * kk - 2 * kk + 1) * (k - 1) + 1;
  return v.str();
}

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << v;
  return out.str();
}

enum class Query { kChi, kSubdiv };

struct CacheKey {
  Query q;
  CanonicalKey key;
  bool operator==(const CacheKey& o) const { return q == o.q && key == o.key; }
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept {
    return CanonicalKeyHash{}(k.key) ^ (k.q == Query::kChi ? 0 : 0x5bd1e995U);
  }
};

std::string record(const CacheKey& k, int value) {
  std::ostringstream out;
  out << (k.q == Query::kChi ? "chi" : "subdiv") << ' ' << k.key.order << ' ' << k.key.code << ' ' << value
      << '\n';
  return out.str();
}

// Append-only record file closed by a checksum line over all records.
class ResultCache {
 public:
  ResultCache(const std::string& dir, const std::string& context) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    path_ = (std::filesystem::path(dir) / ("campaign-" + hex(fnv1a(context)) + ".cache")).string();
    load();
  }

  bool enabled() const { return !path_.empty(); }
  bool rejected() const { return rejected_; }

  std::optional<int> get(const CacheKey& k) const {
    const auto it = entries_.find(k);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const CacheKey& k, int value) {
    if (!enabled() || entries_.count(k) != 0) return;
    entries_.emplace(k, value);
    const std::string line = record(k, value);
    records_ += line;
    pending_ += line;
  }

  void save() {
    if (!enabled() || (pending_.empty() && !rejected_)) return;
    const std::string sum = "#checksum " + hex(fnv1a(records_)) + "\n";
    if (rejected_) {
      std::ofstream out(path_, std::ios::trunc);
      out << records_ << sum;
    } else {
      std::ofstream out(path_, std::ios::app);
      out << pending_ << sum;
    }
    pending_.clear();
    rejected_ = false;
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    std::string records;
    std::string last_sum;
    bool closed = true;
    std::unordered_map<CacheKey, int, CacheKeyHash> entries;
    bool malformed = false;
    while (std::getline(in, line)) {
      if (line.rfind("#checksum ", 0) == 0) {
        last_sum = line.substr(10);
        closed = true;
        continue;
      }
      closed = false;
      std::istringstream fields(line);
      std::string kind;
      CacheKey k{};
      int value = 0;
      if (!(fields >> kind >> k.key.order >> k.key.code >> value) || (kind != "chi" && kind != "subdiv")) {
        malformed = true;
        break;
      }
      k.q = kind == "chi" ? Query::kChi : Query::kSubdiv;
      entries[k] = value;
      records += line + "\n";
    }
    if (malformed || !closed || last_sum != hex(fnv1a(records))) {
      rejected_ = true;
      return;
    }
    entries_ = std::move(entries);
    records_ = std::move(records);
  }

  std::string path_;
  std::unordered_map<CacheKey, int, CacheKeyHash> entries_;
  std::string records_;
  std::string pending_;
  bool rejected_ = false;
};

Digraph random_labeled(std::mt19937_64& rng, int n) {
  Digraph d(n);
  std::uint64_t bits = 0;
  int left = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (left == 0) {
        bits = rng();
        left = 64;
      }
      if (bits & 1U) d.add_arc(u, v);
      bits >>= 1;
      --left;
    }
  return d;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  if (workers == 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct HostResult {
  int chi = 0;
  int subdiv = -1;  // -1: not asked
  bool chi_cached = false;
  bool subdiv_cached = false;
  bool audit_mismatch = false;
  bool audited = false;
};

// Deterministic 1% selection of cache hits for recomputation.
bool audit_pick(const CacheKey& k) { return fnv1a(record(k, 0)) % 100 == 0; }

}  // namespace

CampaignReport mader_campaign(const Digraph& f, int n_max, std::optional<SampleMode> sample,
                              const CampaignOptions& options) {
  if (n_max < 0) throw BudgetError("n_max must be non-negative");
  if (!sample && n_max > kExhaustiveMaxOrder) {
    throw BudgetError("exhaustive campaigns stop at " + std::to_string(kExhaustiveMaxOrder) + " vertices");
  }
  if (sample && n_max > 16) throw BudgetError("sampled hosts stop at 16 vertices");
  const auto start = std::chrono::steady_clock::now();

  CampaignReport r;
  r.pattern = to_text(f);
  r.pattern_order = f.order();
  r.n_max = n_max;
  r.mode = sample ? "sample" : "exhaustive";
  if (sample) {
    r.seed = sample->seed;
    r.sample_count = sample->count;
  }

  std::vector<Digraph> hosts;
  std::vector<std::optional<CanonicalKey>> keys;
  if (sample) {
    std::mt19937_64 rng(sample->seed);
    for (std::size_t i = 0; i < sample->count; ++i) hosts.push_back(random_labeled(rng, n_max));
  } else {
    for (int n = 0; n <= n_max; ++n)
      for (const CanonicalKey& k : enumerate_digraphs(n)) hosts.push_back(from_canonical(k));
  }
  keys.resize(hosts.size());

  ResultCache cache(options.cache_dir, "mader\n" + r.pattern);
  if (cache.enabled()) {
    for (std::size_t i = 0; i < hosts.size(); ++i)
      if (hosts[i].order() <= kCanonicalMaxOrder) keys[i] = canonical_form(hosts[i]);
  }
  r.cache.rejected_file = cache.rejected();

  std::vector<HostResult> results(hosts.size());
  parallel_for(hosts.size(), options.workers, [&](std::size_t i) {
    const Digraph& d = hosts[i];
    HostResult& out = results[i];
    auto lookup = [&](Query q, auto compute) {
      if (keys[i]) {
        const CacheKey ck{q, *keys[i]};
        if (auto hit = cache.get(ck)) {
          if (audit_pick(ck)) {
            out.audited = true;
            const int fresh = compute();
            if (fresh != *hit) out.audit_mismatch = true;
            return std::make_pair(fresh, true);
          }
          return std::make_pair(*hit, true);
        }
      }
      return std::make_pair(compute(), false);
    };
    std::tie(out.chi, out.chi_cached) = lookup(Query::kChi, [&] { return dichromatic_number(d).chi; });
    if (out.chi >= f.order()) {
      std::tie(out.subdiv, out.subdiv_cached) =
          lookup(Query::kSubdiv, [&] { return contains_subdivision(d, f).has_value() ? 1 : 0; });
    }
  });

  for (std::size_t i = 0; i < hosts.size(); ++i) {
    const HostResult& h = results[i];
    ++r.hosts;
    ++r.chi_histogram[h.chi];
    if (h.subdiv == 0) r.violations.push_back(to_text(hosts[i]));
    r.cache.hits += (h.chi_cached ? 1 : 0) + (h.subdiv_cached ? 1 : 0);
    r.cache.misses += (h.chi_cached ? 0 : 1) + (h.subdiv >= 0 && !h.subdiv_cached ? 1 : 0);
    r.cache.audited += h.audited ? 1 : 0;
    r.cache.audit_mismatches += h.audit_mismatch ? 1 : 0;
    if (keys[i]) {
      cache.put({Query::kChi, *keys[i]}, h.chi);
      if (h.subdiv >= 0) cache.put({Query::kSubdiv, *keys[i]}, h.subdiv);
    }
  }
  cache.save();

  if (f.order() >= 1) {
    r.lower_bound_witness = !contains_subdivision(complete_biorientation(f.order() - 1), f).has_value();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string report_to_json(const CampaignReport& r, bool timing) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "mader";
  j["pattern"] = r.pattern;
  j["pattern_order"] = r.pattern_order;
  j["n_max"] = r.n_max;
  j["mode"] = r.mode;
  if (r.mode == "sample") {
    j["prng"] = "mt19937_64";
    j["seed"] = r.seed;
    j["count"] = r.sample_count;
  }
  j["hosts"] = r.hosts;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [chi, count] : r.chi_histogram) hist[std::to_string(chi)] = count;
  j["chi_histogram"] = hist;
  j["violations"] = r.violations;
  j["lower_bound_witness"] = r.lower_bound_witness;
  j["holds"] = r.violations.empty() && r.lower_bound_witness;
  if (timing) j["wall_seconds"] = r.wall_seconds;
  return j.dump();
}

// ---------------------------------------------------------------------------

bool LemmaReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const LemmaEntry& e) { return e.passed(); });
}

std::vector<Digraph> duality_battery() {
  return {
      make_digraph(2, {{0, 1}, {1, 0}}),
      directed_cycle(3),
      directed_path(3),
      make_digraph(3, {{0, 1}, {1, 0}, {1, 2}}),
      pattern_h1(),
      pattern_h2(),
  };
}

namespace {

void check_duality(const Digraph& d, const std::vector<Digraph>& battery, LemmaEntry& entry) {
  const Digraph rd = reverse(d);
  for (const Digraph& f : battery) {
    ++entry.checked;
    const Digraph rf = reverse(f);
    const auto forward = contains_subdivision(d, f);
    const auto backward = contains_subdivision(rd, rf);
    bool ok = forward.has_value() == backward.has_value();
    if (ok && forward) ok = verify_embedding(rd, rf, reverse_embedding(*forward)).ok;
    if (!ok) entry.failures.push_back(to_text(d) + "# pattern\n" + to_text(f));
  }
}

void check_dicritical(const Digraph& d, LemmaEntry& entry) {
  if (d.order() == 0) return;
  const int k = dichromatic_number(d).chi;
  if (!is_dicritical(d, k)) return;
  ++entry.checked;
  if (min_out_degree(d) < k - 1 || min_in_degree(d) < k - 1 || !is_strongly_connected(d)) {
    entry.failures.push_back(to_text(d));
  }
}

void check_deletable(const Digraph& d, LemmaEntry& entry) {
  const int delta = std::min(min_out_degree(d), min_in_degree(d));
  for (int k = 1; 2 * k <= delta; ++k) {
    if (!is_k_strongly_connected(d, k)) continue;
    ++entry.checked;
    bool found = false;
    for (int v = 0; v < d.order() && !found; ++v) found = is_k_strongly_connected(delete_vertex(d, v), k);
    if (!found) entry.failures.push_back(to_text(d) + "# k " + std::to_string(k) + "\n");
  }
}

}  // namespace

LemmaReport lemma_suite(int n_max, std::optional<SampleMode> sample, int sample_order) {
  if (n_max > kExhaustiveMaxOrder) throw BudgetError("lemma suite stops at 6 vertices");
  LemmaReport r;
  r.n_max = n_max;
  LemmaEntry duality{"reversal-duality", 0, {}};
  LemmaEntry dicritical{"dicritical-degree", 0, {}};
  LemmaEntry deletable{"deletable-vertex", 0, {}};
  const std::vector<Digraph> battery = duality_battery();
  for (int n = 0; n <= n_max; ++n) {
    for (const CanonicalKey& key : enumerate_digraphs(n)) {
      const Digraph d = from_canonical(key);
      check_duality(d, battery, duality);
      check_dicritical(d, dicritical);
      check_deletable(d, deletable);
    }
  }
  // The bioriented K5 at k = 2 is the smallest instance with slack.
  check_deletable(complete_biorientation(5), deletable);
  if (sample) {
    LemmaEntry sampled{"reversal-duality-sampled", 0, {}};
    std::mt19937_64 rng(sample->seed);
    for (std::size_t i = 0; i < sample->count; ++i) check_duality(random_labeled(rng, sample_order), battery, sampled);
    r.entries = {duality, dicritical, deletable, sampled};
  } else {
    r.entries = {duality, dicritical, deletable};
  }
  return r;
}

std::string lemma_report_to_json(const LemmaReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "lemmas";
  j["n_max"] = r.n_max;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const LemmaEntry& e : r.entries) {
    nlohmann::ordered_json x;
    x["name"] = e.name;
    x["checked"] = e.checked;
    x["passed"] = e.passed();
    x["failures"] = e.failures;
    entries.push_back(x);
  }
  j["lemmas"] = entries;
  j["holds"] = r.passed();
  return j.dump();
}

}  // namespace maderkit
