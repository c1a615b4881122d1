#include <filesystem>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "maderkit/bench.hpp"
#include "maderkit/canonical.hpp"
#include "maderkit/coloring.hpp"
#include "maderkit/family.hpp"
#include "maderkit/subdivision.hpp"

using namespace maderkit;

namespace {

const Digraph kDigon = make_digraph(2, {{0, 1}, {1, 0}});

std::string fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("maderkit-test-" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::size_t histogram_total(const CampaignReport& r) {
  std::size_t total = 0;
  for (const auto& [chi, count] : r.chi_histogram) total += count;
  return total;
}

}  // namespace

TEST_CASE("bounds") {
  CHECK(bound_general(4, 6) == "12289");
  CHECK(bound_general(2, 2) == "17");
  CHECK(bound_general(1, 0) == "1");
  CHECK(bound_general(complete_biorientation(3)) == std::to_string(4096 * 2 + 1));
  CHECK(bound_bicomplete(1) == "1");
  CHECK(bound_bicomplete(2) == "5");
  CHECK(bound_bicomplete(3) == "513");
  // 4^16 * 4 + 1 overflows 32 bits
  CHECK(bound_bicomplete(5) == "17179869185");
  CHECK(bound_general(2, 40).size() == 25);
  CHECK_THROWS_AS(bound_bicomplete(0), std::invalid_argument);
}

TEST_CASE("exhaustive campaign on the digon") {
  const CampaignReport r = mader_campaign(kDigon, 4, std::nullopt, {"", 1});
  CHECK(r.hosts == 1 + 1 + 3 + 16 + 218);
  CHECK(histogram_total(r) == r.hosts);
  CHECK(r.chi_histogram.at(0) == 1);
  CHECK(r.violations.empty());
  CHECK(r.lower_bound_witness);
  CHECK(r.chi_histogram.rbegin()->first == 4);
  CHECK(r.chi_histogram.at(4) == 1);
}

TEST_CASE("campaign reports do not depend on worker count") {
  const Digraph f = directed_cycle(3);
  const std::string one = report_to_json(mader_campaign(f, 5, std::nullopt, {"", 1}));
  const std::string two = report_to_json(mader_campaign(f, 5, std::nullopt, {"", 3}));
  CHECK(one == two);
  CHECK(one.find("\"schema\":1") != std::string::npos);
  CHECK(one.find("wall_seconds") == std::string::npos);
  CHECK(report_to_json(mader_campaign(f, 2), true).find("wall_seconds") != std::string::npos);
}

TEST_CASE("sampled campaigns are reproducible") {
  const SampleMode mode{42, 300};
  const CampaignReport a = mader_campaign(kDigon, 7, mode, {"", 2});
  const CampaignReport b = mader_campaign(kDigon, 7, mode, {"", 1});
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(a.hosts == 300);
  CHECK(a.violations.empty());
  const std::string json = report_to_json(a);
  CHECK(json.find("\"prng\":\"mt19937_64\"") != std::string::npos);
  CHECK(json.find("\"seed\":42") != std::string::npos);
  CHECK(report_to_json(mader_campaign(kDigon, 7, SampleMode{43, 300})) != json);
}

TEST_CASE("campaign on the bioriented C4") {
  const Digraph f = bioriented_c4();
  const CampaignReport r = mader_campaign(f, 5, std::nullopt, {"", 1});
  CHECK(r.violations.empty());
  CHECK(r.lower_bound_witness);
  // chi >= 4 on at most five vertices
  CHECK(r.chi_histogram.at(4) + r.chi_histogram.at(5) > 1);
}

TEST_CASE("the campaign cache") {
  const std::string dir = fresh_dir("cache");
  const Digraph f = directed_cycle(3);
  const CampaignReport cold = mader_campaign(f, 5, std::nullopt, {dir, 1});
  CHECK(cold.cache.hits == 0);
  CHECK(cold.cache.misses > 0);
  CHECK_FALSE(cold.cache.rejected_file);

  const CampaignReport warm = mader_campaign(f, 5, std::nullopt, {dir, 2});
  CHECK(warm.cache.misses == 0);
  CHECK(warm.cache.hits == cold.cache.misses);
  CHECK(warm.cache.audited > 0);
  CHECK(warm.cache.audited * 50 < warm.cache.hits);
  CHECK(warm.cache.audit_mismatches == 0);
  CHECK(report_to_json(warm) == report_to_json(cold));

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) files.push_back(entry.path());
  REQUIRE(files.size() == 1);
  const std::filesystem::path file = files.front();

  // Other patterns live in their own file.
  CHECK(mader_campaign(kDigon, 3, std::nullopt, {dir, 1}).cache.hits == 0);

  {
    std::fstream io(file, std::ios::in | std::ios::out);
    io.seekp(0);
    io << "chi 9";
  }
  const CampaignReport tampered = mader_campaign(f, 5, std::nullopt, {dir, 1});
  CHECK(tampered.cache.rejected_file);
  CHECK(tampered.cache.hits == 0);
  CHECK(report_to_json(tampered) == report_to_json(cold));
  const CampaignReport again = mader_campaign(f, 5, std::nullopt, {dir, 1});
  CHECK_FALSE(again.cache.rejected_file);
  CHECK(again.cache.misses == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("campaign budgets") {
  CHECK_THROWS_AS(mader_campaign(kDigon, 7), BudgetError);
  CHECK_THROWS_AS(mader_campaign(kDigon, 17, SampleMode{1, 1}), BudgetError);
  CHECK_THROWS_AS(lemma_suite(7), BudgetError);
}

TEST_CASE("lemma suite") {
  const LemmaReport r = lemma_suite(4, SampleMode{7, 200});
  REQUIRE(r.entries.size() == 4);
  for (const LemmaEntry& e : r.entries) {
    INFO(e.name);
    CHECK(e.passed());
    CHECK(e.checked > 0);
  }
  CHECK(r.passed());
  CHECK(r.entries[0].checked == duality_battery().size() * (1 + 1 + 3 + 16 + 218));
  const std::string json = lemma_report_to_json(r);
  CHECK(json.find("\"holds\":true") != std::string::npos);
}

TEST_CASE("exploratory campaign on the bioriented K3") {
  const CampaignReport r = mader_campaign(complete_biorientation(3), 4, std::nullopt, {"", 1});
  CHECK(r.hosts == 239);
  CHECK(histogram_total(r) == r.hosts);
  for (const std::string& text : r.violations) CHECK(dichromatic_number(parse_digraph(text)).chi >= 3);
  CHECK(report_to_json(r).find("\"pattern_order\":3") != std::string::npos);
}
