// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "firmscan/errors.hpp"
#include "firmscan/matcher.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace firmscan;

TEST_CASE("busybox 1.33.2 matches all four fig.1 records") {
  VulnIndex index = fstest::fig1_index();
  auto hits = match_cpe(index, to_cpe("busybox", "busybox", "1.33.2"));
  REQUIRE(hits.size() == 4);
  CHECK(hits[0]->id == "CVE-2021-42376");
  CHECK(hits[1]->id == "CVE-2022-28391");
  CHECK(hits[2]->id == "CVE-2022-48174");
  CHECK(hits[3]->id == "CVE-2023-39810");
}

TEST_CASE("boundary semantics around 1.33.2") {
  VulnIndex index = fstest::fig1_index();
  // 1.33.3 is outside every fixture range and not an exact match
  CHECK(match_cpe(index, to_cpe("busybox", "busybox", "1.33.3")).empty());
  // 1.20 misses the exact records and the startIncluding 1.16.2 range
  auto hits = match_cpe(index, to_cpe("busybox", "busybox", "1.20.0"));
  REQUIRE(hits.size() == 2);  // end-including ranges only
  CHECK(hits[0]->id == "CVE-2022-28391");
  CHECK(hits[1]->id == "CVE-2022-48174");
  // below versionStartIncluding
  auto old_hits = match_cpe(index, to_cpe("busybox", "busybox", "1.10"));
  REQUIRE(old_hits.size() == 1);
  CHECK(old_hits[0]->id == "CVE-2022-28391");
}

TEST_CASE("versionEndExcluding excludes its boundary") {
  std::string doc = R"({"vulnerabilities":[{"cve":{"id":"CVE-2020-1111",
    "descriptions":[{"lang":"en","value":"x"}],
    "configurations":[{"nodes":[{"cpeMatch":[
      {"vulnerable":true,"criteria":"cpe:2.3:a:v:p:*:*:*:*:*:*:*:*","versionEndExcluding":"1.33.2"}
    ]}]}]}}]})";
  VulnIndex index = ingest_nvd_feed({doc});
  CHECK(match_cpe(index, to_cpe("v", "p", "1.33.2")).empty());
  CHECK(match_cpe(index, to_cpe("v", "p", "1.33.1")).size() == 1);
}

TEST_CASE("vendor/product comparison is case-insensitive") {
  VulnIndex index = fstest::fig1_index();
  Cpe23 query;
  query.vendor = CpeAttr::value("BusyBox");  // lowercased on construction
  query.product = CpeAttr::value("BUSYBOX");
  query.version = CpeAttr::value("1.33.2");
  CHECK(match_cpe(index, query).size() == 4);
}

TEST_CASE("unresolved query versions are rejected") {
  VulnIndex index = fstest::fig1_index();
  Cpe23 any_version = to_cpe("busybox", "busybox", "");
  CHECK_THROWS_AS(match_cpe(index, any_version), UnresolvedVersion);
  Cpe23 na = to_cpe("busybox", "busybox", "1");
  na.version = CpeAttr::na();
  CHECK_THROWS_AS(match_cpe(index, na), UnresolvedVersion);
}

TEST_CASE("version comparator basics") {
  CHECK(compare_versions("1.33.2", "1.33.2") == 0);
  CHECK(compare_versions("1.33", "1.33.0") == 0);  // missing segments are 0
  CHECK(compare_versions("1.33.1", "1.33.2") < 0);
  CHECK(compare_versions("1.9", "1.10") < 0);      // numeric, not lexical
  CHECK(compare_versions("0.9.8", "0.9.8y") < 0);  // numeric before alnum
  CHECK(compare_versions("0.9.8y", "0.9.8za") < 0);
  CHECK(compare_versions("2019.78", "2019.78") == 0);
  CHECK(compare_versions("1.2.3-4", "1.2.3.4") == 0);  // '-' splits like '.'
  CHECK(compare_versions("10", "9") > 0);
  CHECK(compare_versions("00001.0", "1") == 0);  // leading zeros
}

TEST_CASE("version comparator is a total order on random triples") {
  std::mt19937 rng(4242);
  auto random_version = [&] {
    static const char* segs[] = {"0", "1", "2", "9", "10", "33", "100", "a", "b2", "rc1", "beta"};
    int n = 1 + static_cast<int>(rng() % 4);
    std::string v;
    for (int i = 0; i < n; ++i) {
      if (i > 0) v += (rng() % 4 == 0) ? "-" : ".";
      v += segs[rng() % 11];
    }
    return v;
  };
  for (int i = 0; i < 3000; ++i) {
    std::string a = random_version();
    std::string b = random_version();
    std::string c = random_version();
    // antisymmetry
    CHECK(compare_versions(a, b) == -compare_versions(b, a));
    CHECK((compare_versions(a, a) == 0));
    // transitivity
    if (compare_versions(a, b) <= 0 && compare_versions(b, c) <= 0) {
      CHECK(compare_versions(a, c) <= 0);
    }
    // agreement with the independent oracle
    CHECK(compare_versions(a, b) == fstest::oracle_compare_versions(a, b));
  }
}

TEST_CASE("match_cpe equals the linear-scan oracle on random corpora") {
  std::mt19937 rng(987654);
  const std::vector<std::string> vendors = {"acme", "globex", "initech", "umbrella", "stark"};
  const std::vector<std::string> products = {"router", "libfoo", "netd", "sslkit", "busyshell",
                                             "zipper"};
  auto random_version = [&] {
    std::string v = std::to_string(rng() % 4);
    int extra = static_cast<int>(rng() % 3);
    for (int i = 0; i < extra; ++i) v += "." + std::to_string(rng() % 20);
    if (rng() % 8 == 0) v += "a";
    return v;
  };

  // 500 random records
  nlohmann::json feed;
  feed["vulnerabilities"] = nlohmann::json::array();
  for (int i = 0; i < 500; ++i) {
    nlohmann::json rec;
    char id[32];
    std::snprintf(id, sizeof id, "CVE-2020-%04d", i + 1000);
    rec["id"] = id;
    rec["descriptions"] = nlohmann::json::array({{{"lang", "en"}, {"value", "synthetic"}}});
    nlohmann::json matches = nlohmann::json::array();
    int nconf = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < nconf; ++k) {
      nlohmann::json cm;
      cm["vulnerable"] = true;
      std::string vendor = vendors[rng() % vendors.size()];
      std::string product = products[rng() % products.size()];
      if (rng() % 2 == 0) {
        cm["criteria"] = "cpe:2.3:a:" + vendor + ":" + product + ":" + random_version() +
                         ":*:*:*:*:*:*:*";
      } else {
        cm["criteria"] = "cpe:2.3:a:" + vendor + ":" + product + ":*:*:*:*:*:*:*:*";
        int bounds = static_cast<int>(rng() % 4);
        if (bounds == 0 || bounds == 2) {
          cm[rng() % 2 == 0 ? "versionStartIncluding" : "versionStartExcluding"] =
              random_version();
        }
        if (bounds == 1 || bounds == 2) {
          cm[rng() % 2 == 0 ? "versionEndIncluding" : "versionEndExcluding"] = random_version();
        }
      }
      matches.push_back(std::move(cm));
    }
    rec["configurations"] =
        nlohmann::json::array({{{"nodes", nlohmann::json::array({{{"cpeMatch", matches}}})}}});
    feed["vulnerabilities"].push_back({{"cve", rec}});
  }
  VulnIndex index = ingest_nvd_feed({feed.dump()});
  REQUIRE(index.records().size() == 500);

  // 100 random queries, zero tolerance for mismatches
  for (int q = 0; q < 100; ++q) {
    std::string vendor = vendors[rng() % vendors.size()];
    std::string product = products[rng() % products.size()];
    std::string version = random_version();

    auto got = match_cpe(index, to_cpe(vendor, product, version));
    std::vector<std::string> got_ids;
    for (const CveRecord* r : got) got_ids.push_back(r->id);
    auto expected = fstest::oracle_match(index, vendor, product, version);
    CHECK(got_ids == expected);
  }
}
