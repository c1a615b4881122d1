#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "maderkit/bench.hpp"
#include "maderkit/coloring.hpp"
#include "maderkit/family.hpp"
#include "maderkit/subdivision.hpp"
#include "maderkit/witness.hpp"

using namespace maderkit;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kViolation = 1, kUsage = 2, kInconsistent = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A file in text format, or a built-in name: digon, H1, H2, H3, C4 (the
// bioriented 4-cycle), K<n> (bioriented complete), C<n>, P<n>.
Digraph load_digraph(const std::string& arg) {
  if (std::filesystem::exists(arg)) return parse_digraph(slurp(arg));
  if (arg == "digon") return make_digraph(2, {{0, 1}, {1, 0}});
  if (arg == "H1") return pattern_h1();
  if (arg == "H2") return pattern_h2();
  if (arg == "H3") return pattern_h3();
  if (arg == "C4") return bioriented_c4();
  std::smatch m;
  static const std::regex named("([KCP])([0-9]+)");
  if (std::regex_match(arg, m, named)) {
    const int n = std::stoi(m[2]);
    if (n < 1 || n > 64) throw UsageError("order out of range: " + arg);
    if (m[1] == "K") return complete_biorientation(n);
    if (m[1] == "C") return directed_cycle(n);
    return directed_path(n);
  }
  throw UsageError("no such file or pattern: " + arg);
}

json coloring_json(const AcyclicColoring& c) {
  json j;
  j["k"] = c.k;
  j["color"] = c.color;
  return j;
}

json trace_json(const Trace& t) {
  json arr = json::array();
  for (const std::string& line : t) arr.push_back(json::parse(line));
  return arr;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

struct Args {
  bool quiet = false;
  std::string host, pattern, cert, file, derivation, which, cache_dir;
  int nmax = 0;
  int slack = 0;
  bool octi = false;
  bool timing = false;
  unsigned workers = 0;
  std::vector<std::uint64_t> sample;
  int n = -1;
  std::size_t m = 0;
  int k = 0;
};

int run_chi(const Args& a) {
  const Digraph d = load_digraph(a.file);
  const DichromaticResult r = dichromatic_number(d);
  json j;
  j["order"] = d.order();
  j["arcs"] = d.arc_count();
  j["chi"] = r.chi;
  j["coloring"] = coloring_json(r.witness);
  emit(j);
  return kOk;
}

int run_subdiv(const Args& a) {
  const Digraph host = load_digraph(a.host);
  const Digraph f = load_digraph(a.pattern);
  const auto e = contains_subdivision(host, f);
  json j;
  j["found"] = e.has_value();
  if (e) j["embedding"] = json::parse(embedding_to_json(*e));
  emit(j);
  return kOk;
}

int run_verify(const Args& a) {
  const Digraph host = load_digraph(a.host);
  const Digraph f = load_digraph(a.pattern);
  const SubdivisionEmbedding e = embedding_from_json(slurp(a.cert));
  const EmbeddingCheck c = verify_embedding(host, f, e);
  json j;
  j["valid"] = c.ok;
  if (!c.ok) j["clause"] = c.clause;
  emit(j);
  return c.ok ? kOk : kViolation;
}

int run_family_check(const Args& a) {
  const Digraph f = load_digraph(a.pattern);
  const auto der = a.octi ? in_octi(f, a.slack) : in_family(f, a.slack);
  json j;
  j["member"] = der.has_value();
  j["class"] = a.octi ? "octi" : "family";
  j["slack"] = a.slack;
  if (der) j["derivation"] = json::parse(derivation_to_json(*der));
  emit(j);
  return der ? kOk : kViolation;
}

int run_family_replay(const Args& a) {
  const FamilyDerivation der = derivation_from_json(slurp(a.derivation));
  const Digraph d = replay(der);
  json j;
  j["order"] = d.order();
  j["arcs"] = d.arc_count();
  j["digraph"] = to_text(d);
  emit(j);
  return kOk;
}

int run_certify(const Args& a) {
  const Digraph d = load_digraph(a.host);
  const HPattern k = a.which == "H1" ? HPattern::kH1 : HPattern::kH2;
  const CertifyOutcome out = certify_h(d, k);
  json j;
  j["pattern"] = a.which;
  if (out.is_coloring()) {
    j["certificate"] = "coloring";
    j["coloring"] = coloring_json(out.coloring());
  } else {
    j["certificate"] = "subdivision";
    j["embedding"] = json::parse(embedding_to_json(out.embedding()));
  }
  if (!a.quiet) j["trace"] = trace_json(out.trace);
  emit(j);
  return kOk;
}

std::optional<SampleMode> sample_mode(const Args& a) {
  if (a.sample.empty()) return std::nullopt;
  return SampleMode{a.sample[0], static_cast<std::size_t>(a.sample[1])};
}

int run_campaign_mader(const Args& a) {
  const Digraph f = load_digraph(a.pattern);
  CampaignOptions opts;
  opts.cache_dir = a.cache_dir;
  if (opts.cache_dir.empty()) {
    if (const char* env = std::getenv("MADERKIT_CACHE_DIR")) opts.cache_dir = env;
  }
  opts.workers = a.workers;
  const CampaignReport r = mader_campaign(f, a.nmax, sample_mode(a), opts);
  std::cout << report_to_json(r, a.timing) << '\n';
  if (!a.quiet && !opts.cache_dir.empty()) {
    std::cerr << "cache: " << r.cache.hits << " hits, " << r.cache.misses << " misses, " << r.cache.audited
              << " audited, " << r.cache.audit_mismatches << " mismatches"
              << (r.cache.rejected_file ? ", file rejected" : "") << '\n';
  }
  if (r.cache.audit_mismatches > 0) return kInconsistent;
  return r.violations.empty() && r.lower_bound_witness ? kOk : kViolation;
}

int run_campaign_lemmas(const Args& a) {
  const LemmaReport r = lemma_suite(a.nmax, sample_mode(a));
  std::cout << lemma_report_to_json(r) << '\n';
  return r.passed() ? kOk : kViolation;
}

int run_bound(const Args& a) {
  json j;
  j["bound"] = a.which;
  if (a.which == "general") {
    int n = a.n;
    std::size_t m = a.m;
    if (!a.pattern.empty()) {
      const Digraph f = load_digraph(a.pattern);
      n = f.order();
      m = f.arc_count();
    }
    if (n < 1) throw UsageError("give a pattern or --n/--m");
    j["n"] = n;
    j["m"] = m;
    j["value"] = bound_general(n, m);
  } else {
    if (a.k < 1) throw UsageError("k must be at least 1");
    j["k"] = a.k;
    j["value"] = bound_bicomplete(a.k);
  }
  emit(j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maderkit: dichromatic number, subdivisions and Mader-number checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Args a;
  app.add_flag("-q,--quiet", a.quiet, "Suppress traces and diagnostics");

  auto* chi = app.add_subcommand("chi", "Dichromatic number with an optimal acyclic colouring");
  chi->add_option("file", a.file, "Digraph file or built-in name")->required();

  auto* subdiv = app.add_subcommand("subdiv", "Search for a subdivision of a pattern");
  subdiv->add_option("host", a.host)->required();
  subdiv->add_option("pattern", a.pattern)->required();

  auto* verify = app.add_subcommand("verify-embedding", "Check a subdivision certificate");
  verify->add_option("host", a.host)->required();
  verify->add_option("pattern", a.pattern)->required();
  verify->add_option("cert", a.cert, "Embedding JSON")->required();

  auto* family = app.add_subcommand("family", "Ear-family recognition and replay");
  family->require_subcommand(1);
  auto* fcheck = family->add_subcommand("check", "Bounded membership search");
  fcheck->add_option("pattern", a.pattern)->required();
  fcheck->add_option("--slack", a.slack, "Extra vertices allowed in the ambient member")->check(CLI::NonNegativeNumber);
  fcheck->add_flag("--octi", a.octi, "Digon-free ears only");
  auto* freplay = family->add_subcommand("replay", "Build the digraph of a derivation");
  freplay->add_option("derivation", a.derivation, "Derivation JSON")->required()->check(CLI::ExistingFile);

  auto* certify = app.add_subcommand("certify-h", "Acyclic 3-colouring or an H1/H2 subdivision");
  certify->add_option("host", a.host)->required();
  a.which = "H1";
  certify->add_option("--pattern", a.which)->check(CLI::IsMember({"H1", "H2"}));

  auto* campaign = app.add_subcommand("campaign", "Verification campaigns");
  campaign->require_subcommand(1);
  auto* cmader = campaign->add_subcommand("mader", "chi >= |V(F)| implies a subdivision of F");
  cmader->add_option("pattern", a.pattern)->required();
  auto* clemmas = campaign->add_subcommand("lemmas", "Instance checks of the structural lemmas");
  for (auto* c : {cmader, clemmas}) {
    c->add_option("--nmax", a.nmax)->required()->check(CLI::NonNegativeNumber);
    c->add_option("--sample", a.sample, "seed count")->expected(2);
  }
  cmader->add_option("--cache-dir", a.cache_dir, "Defaults to $MADERKIT_CACHE_DIR");
  cmader->add_option("--workers", a.workers, "0: one per core");
  cmader->add_flag("--timing", a.timing, "Include wall time in the report");

  auto* bound = app.add_subcommand("bound", "Upper bounds on the Mader number");
  bound->require_subcommand(1);
  auto* bgeneral = bound->add_subcommand("general", "4^m (n-1) + 1");
  bgeneral->add_option("pattern", a.pattern);
  bgeneral->add_option("--n", a.n);
  bgeneral->add_option("--m", a.m);
  auto* bbicomplete = bound->add_subcommand("bicomplete", "4^(k^2-2k+1) (k-1) + 1");
  bbicomplete->add_option("k", a.k)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*chi) return run_chi(a);
    if (*subdiv) return run_subdiv(a);
    if (*verify) return run_verify(a);
    if (*fcheck) return run_family_check(a);
    if (*freplay) return run_family_replay(a);
    if (*certify) return run_certify(a);
    if (*cmader) return run_campaign_mader(a);
    if (*clemmas) return run_campaign_lemmas(a);
    if (*bgeneral) {
      a.which = "general";
      return run_bound(a);
    }
    if (*bbicomplete) {
      a.which = "bicomplete";
      return run_bound(a);
    }
  } catch (const InternalInconsistency& e) {
    json j;
    j["error"] = e.what();
    emit(j);
    if (!a.quiet) std::cerr << e.dump << '\n';
    return kInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
