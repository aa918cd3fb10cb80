// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "firmscan/errors.hpp"
#include "firmscan/nvd.hpp"
#include "fixtures.hpp"
#include "temp_dir.hpp"

using namespace firmscan;

TEST_CASE("fig.1 fixture ingests into 4 busybox records") {
  VulnIndex index = fstest::fig1_index();
  REQUIRE(index.records().size() == 4);

  const auto* ids = index.product_lookup("busybox", "busybox");
  REQUIRE(ids != nullptr);
  CHECK(*ids == std::vector<std::string>{"CVE-2021-42376", "CVE-2022-28391", "CVE-2022-48174",
                                         "CVE-2023-39810"});

  const CveRecord* r = index.find("CVE-2021-42376");
  REQUIRE(r != nullptr);
  CHECK(r->cwe_ids == std::vector<std::string>{"CWE-476"});
  REQUIRE(r->cvss31.has_value());
  CHECK(r->cvss31->score == doctest::Approx(5.5));
  CHECK(r->cvss31->vector_string == "CVSS:3.1/AV:L/AC:L/PR:L/UI:N/S:U/C:N/I:N/A:H");
  REQUIRE(r->configurations.size() == 1);
  CHECK(r->configurations[0].base.version.str() == "1.33.2");
  CHECK(!r->configurations[0].start.has_value());
  CHECK(!r->configurations[0].end.has_value());

  const CveRecord* noinfo = index.find("CVE-2022-28391");
  REQUIRE(noinfo != nullptr);
  CHECK(noinfo->cwe_ids == std::vector<std::string>{kCweNoInfo});
  REQUIRE(noinfo->configurations.size() == 1);
  CHECK(noinfo->configurations[0].base.version.is_any());
  REQUIRE(noinfo->configurations[0].end.has_value());
  CHECK(noinfo->configurations[0].end->value == "1.33.2");
  CHECK(noinfo->configurations[0].end->inclusive);

  const CveRecord* ranged = index.find("CVE-2022-48174");
  REQUIRE(ranged != nullptr);
  REQUIRE(ranged->configurations.size() == 1);
  REQUIRE(ranged->configurations[0].start.has_value());
  CHECK(ranged->configurations[0].start->value == "1.16.2");
}

TEST_CASE("empty vulnerabilities array yields an empty index") {
  VulnIndex index = ingest_nvd_feed({R"({"vulnerabilities": []})"});
  CHECK(index.records().empty());
  CHECK(index.product_lookup("busybox", "busybox") == nullptr);
}

TEST_CASE("duplicate ids: last wins and the duplicate is counted") {
  std::string doc1 = R"({"vulnerabilities":[{"cve":{"id":"CVE-2020-0001",
    "descriptions":[{"lang":"en","value":"first"}]}}]})";
  std::string doc2 = R"({"vulnerabilities":[{"cve":{"id":"CVE-2020-0001",
    "descriptions":[{"lang":"en","value":"second"}]}}]})";
  VulnIndex index = ingest_nvd_feed({doc1, doc2});
  REQUIRE(index.records().size() == 1);
  CHECK(index.meta().duplicate_count == 1);
  CHECK(index.find("CVE-2020-0001")->description == "second");
}

TEST_CASE("malformed feeds raise FeedParseError with a position") {
  CHECK_THROWS_WITH_AS(ingest_nvd_feed({"not json at all"}), doctest::Contains("document 0"),
                       FeedParseError);
  CHECK_THROWS_AS(ingest_nvd_feed({R"({"foo": 1})"}), FeedParseError);
  CHECK_THROWS_WITH_AS(
      ingest_nvd_feed({R"({"vulnerabilities":[{"cve":{"id":"CVE-x"}}]})"}),
      doctest::Contains("malformed CVE id"), FeedParseError);
  CHECK_THROWS_WITH_AS(
      ingest_nvd_feed(
          {R"({"vulnerabilities":[{"cve":{"id":"CVE-2020-1234","metrics":{"cvssMetricV31":[{"cvssData":{"baseScore":11.0}}]}}}]})"}),
      doctest::Contains("out of [0,10]"), FeedParseError);
}

TEST_CASE("non-vulnerable cpeMatch entries are ignored") {
  std::string doc = R"({"vulnerabilities":[{"cve":{"id":"CVE-2020-7777",
    "descriptions":[{"lang":"en","value":"x"}],
    "configurations":[{"nodes":[{"cpeMatch":[
      {"vulnerable":false,"criteria":"cpe:2.3:o:acme:rtos:1.0:*:*:*:*:*:*:*"},
      {"vulnerable":true,"criteria":"cpe:2.3:a:acme:lib:2.0:*:*:*:*:*:*:*"}
    ]}]}]}}]})";
  VulnIndex index = ingest_nvd_feed({doc});
  const CveRecord* r = index.find("CVE-2020-7777");
  REQUIRE(r != nullptr);
  REQUIRE(r->configurations.size() == 1);
  CHECK(r->configurations[0].base.product.str() == "lib");
  CHECK(index.product_lookup("acme", "rtos") == nullptr);
}

TEST_CASE("persistence round-trips losslessly") {
  fstest::TempDir tmp;
  VulnIndex index = fstest::combined_index();
  auto path = tmp / "vuln.idx";
  save_index(index, path);
  VulnIndex loaded = load_index(path);
  CHECK(loaded == index);
  CHECK(loaded.records().size() == 8);
}

TEST_CASE("load on an empty file is an IndexVersionMismatch") {
  fstest::TempDir tmp;
  auto path = tmp / "empty.idx";
  std::ofstream(path).close();
  CHECK_THROWS_AS(load_index(path), IndexVersionMismatch);
}

TEST_CASE("load rejects a wrong format_version") {
  fstest::TempDir tmp;
  auto path = tmp / "vuln.idx";
  std::ofstream(path) << R"({"format_version": 99, "records": []})";
  CHECK_THROWS_AS(load_index(path), IndexVersionMismatch);
}

TEST_CASE("save to an unwritable path is an IoError") {
  CHECK_THROWS_AS(save_index(fstest::fig1_index(), "/nonexistent-dir/sub/file.idx"), IoError);
}

TEST_CASE("load on a missing file is an IoError") {
  CHECK_THROWS_AS(load_index("/nonexistent-dir/absent.idx"), IoError);
}
