// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "firmscan/cpe.hpp"
#include "firmscan/errors.hpp"

using namespace firmscan;

TEST_CASE("paper anchor CPEs format canonically") {
  CHECK(format_cpe(to_cpe("openssl", "openssl", "0.9.3")) ==
        "cpe:2.3:a:openssl:openssl:0.9.3:*:*:*:*:*:*:*");
  CHECK(format_cpe(to_cpe("busybox", "busybox", "1.33.2")) ==
        "cpe:2.3:a:busybox:busybox:1.33.2:*:*:*:*:*:*:*");
}

TEST_CASE("special characters are escaped in the formatted string") {
  Cpe23 c = to_cpe("x", "y", "1.0:beta");
  CHECK(format_cpe(c) == "cpe:2.3:a:x:y:1.0\\:beta:*:*:*:*:*:*:*");
  CHECK(parse_cpe(format_cpe(c)) == c);
}

TEST_CASE("to_cpe rejects control characters and empty vendor/product") {
  CHECK_THROWS_AS(to_cpe("a\x01b", "p", "1"), InvalidAttribute);
  CHECK_THROWS_AS(to_cpe("", "p", "1"), InvalidAttribute);
  CHECK_THROWS_AS(to_cpe("v", "", "1"), InvalidAttribute);
  CHECK(to_cpe("v", "p", "").version.is_any());
}

TEST_CASE("parse handles canonical, NA and ANY fields") {
  Cpe23 c = parse_cpe("cpe:2.3:a:busybox:busybox:1.33.2:*:*:*:*:*:*:*", CpeParseMode::Strict);
  CHECK(c.part == CpePart::Application);
  CHECK(c.vendor.str() == "busybox");
  CHECK(c.product.str() == "busybox");
  CHECK(c.version.str() == "1.33.2");
  CHECK(c.update.is_any());
  CHECK(c.other.is_any());

  Cpe23 na = parse_cpe("cpe:2.3:o:vendor:prod:-:*:*:*:*:*:*:*", CpeParseMode::Strict);
  CHECK(na.part == CpePart::OperatingSystem);
  CHECK(na.version.is_na());
}

TEST_CASE("the paper's lax string parses leniently") {
  Cpe23 c = parse_cpe("cpe:2.3:a:openssl:openssl:0.9.3:-::::::", CpeParseMode::Lenient);
  CHECK(c.vendor.str() == "openssl");
  CHECK(c.version.str() == "0.9.3");
  CHECK(c.update.is_na());
  CHECK(c.edition.is_any());
  CHECK(c.language.is_any());
  CHECK(c.other.is_any());
  CHECK(format_cpe(c) == "cpe:2.3:a:openssl:openssl:0.9.3:-:*:*:*:*:*:*");

  // same string in strict mode is an error: empty fields
  CHECK_THROWS_AS(parse_cpe("cpe:2.3:a:openssl:openssl:0.9.3:-::::::", CpeParseMode::Strict),
                  MalformedCpe);
}

TEST_CASE("malformed inputs are rejected") {
  CHECK_THROWS_AS(parse_cpe("cpe:/a:openssl:openssl"), MalformedCpe);       // 2.2 URI form
  CHECK_THROWS_AS(parse_cpe("cpe:2.3:x:v:p:1:*:*:*:*:*:*:*"), MalformedCpe);  // bad part
  CHECK_THROWS_AS(parse_cpe("cpe:2.3:a:v:p:1:*:*:*:*:*:*:*:extra"), MalformedCpe);
  CHECK_THROWS_AS(parse_cpe("cpe:2.3:a:v:p:1\\"), MalformedCpe);  // dangling escape
  CHECK_THROWS_AS(parse_cpe("cpe:2.3:a:v:p:1.*:*:*:*:*:*:*:*", CpeParseMode::Strict),
                  MalformedCpe);  // embedded bare wildcard
  CHECK_THROWS_AS(parse_cpe("cpe:2.3:a:v:p", CpeParseMode::Strict), MalformedCpe);
}

TEST_CASE("lenient mode pads missing trailing fields with ANY") {
  Cpe23 c = parse_cpe("cpe:2.3:a:zyxel:nas326_firmware:5.21");
  CHECK(c.vendor.str() == "zyxel");
  CHECK(c.version.str() == "5.21");
  CHECK(c.target_hw.is_any());
}

namespace {

CpeAttr random_attr(std::mt19937& rng) {
  switch (rng() % 8) {
    case 0:
      return CpeAttr::any();
    case 1:
      return CpeAttr::na();
    default: {
      static const char* alphabet = "abcdefghijklmnopqrstuvwxyz0123456789._-:!()+\\*?~%$ ";
      std::size_t len = 1 + rng() % 12;
      std::string s;
      for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % 52]);
      return CpeAttr::value(std::move(s));
    }
  }
}

}  // namespace

TEST_CASE("round-trip identity over 2000 random CPEs with escapables") {
  std::mt19937 rng(20240501);
  for (int i = 0; i < 2000; ++i) {
    Cpe23 c;
    c.part = static_cast<CpePart>(rng() % 3);
    c.vendor = random_attr(rng);
    c.product = random_attr(rng);
    c.version = random_attr(rng);
    c.update = random_attr(rng);
    c.edition = random_attr(rng);
    c.language = random_attr(rng);
    c.sw_edition = random_attr(rng);
    c.target_sw = random_attr(rng);
    c.target_hw = random_attr(rng);
    c.other = random_attr(rng);

    std::string formatted = format_cpe(c);
    Cpe23 back = parse_cpe(formatted, CpeParseMode::Strict);
    REQUIRE_MESSAGE(back == c, formatted);
    CHECK(format_cpe(back) == formatted);
  }
}
