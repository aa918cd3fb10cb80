// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace firmscan {

enum class CpePart { Application, OperatingSystem, Hardware };

char to_char(CpePart p);

/// One CPE 2.3 attribute: the logical values ANY / NA, or a literal
/// string kept unescaped and lowercase.
class CpeAttr {
 public:
  CpeAttr() = default;  // ANY

  static CpeAttr any() { return CpeAttr(); }
  static CpeAttr na() {
    CpeAttr a;
    a.kind_ = Kind::Na;
    return a;
  }
  static CpeAttr value(std::string literal);

  bool is_any() const { return kind_ == Kind::Any; }
  bool is_na() const { return kind_ == Kind::Na; }
  bool is_value() const { return kind_ == Kind::Value; }

  /// Unescaped literal; empty for ANY/NA.
  const std::string& str() const { return value_; }

  bool operator==(const CpeAttr&) const = default;

 private:
  enum class Kind { Any, Na, Value };
  Kind kind_ = Kind::Any;
  std::string value_;
};

/// A CPE 2.3 name (11 attributes). Canonical text form is the
/// formatted-string binding: cpe:2.3:part:vendor:product:version:update:
/// edition:language:sw_edition:target_sw:target_hw:other.
struct Cpe23 {
  CpePart part = CpePart::Application;
  CpeAttr vendor;
  CpeAttr product;
  CpeAttr version;
  CpeAttr update;
  CpeAttr edition;
  CpeAttr language;
  CpeAttr sw_edition;
  CpeAttr target_sw;
  CpeAttr target_hw;
  CpeAttr other;

  bool operator==(const Cpe23&) const = default;
};

enum class CpeParseMode {
  Strict,   // exactly 13 colon-separated fields, no empty fields
  Lenient,  // empty or missing trailing fields read as ANY
};

/// Builds an application CPE from identification results. Inputs are
/// lowercased; trailing attributes are ANY. An empty version becomes ANY.
/// Throws InvalidAttribute on embedded control characters or an empty
/// vendor/product.
Cpe23 to_cpe(std::string_view vendor, std::string_view product, std::string_view version);

/// Formatted-string binding with the canonical escaping rules
/// ([a-z0-9._-] bare, everything else backslash-quoted, `*` for ANY,
/// `-` for NA). parse_cpe(format_cpe(c)) == c for every valid Cpe23.
std::string format_cpe(const Cpe23& c);

/// Parses a formatted string. Lenient mode additionally accepts empty
/// fields, fewer than 13 fields (both read as ANY) and bare wildcard
/// characters inside values. Throws MalformedCpe.
Cpe23 parse_cpe(std::string_view text, CpeParseMode mode = CpeParseMode::Lenient);

}  // namespace firmscan
