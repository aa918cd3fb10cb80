// SPDX-License-Identifier: Apache-2.0
#include "firmscan/cpe.hpp"

#include <array>
#include <cctype>

#include "firmscan/errors.hpp"

namespace firmscan {

char to_char(CpePart p) {
  switch (p) {
    case CpePart::Application:
      return 'a';
    case CpePart::OperatingSystem:
      return 'o';
    case CpePart::Hardware:
      return 'h';
  }
  return '?';
}

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool bare_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
}

void check_no_control(std::string_view s, std::string_view what) {
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u == 0x7f) {
      throw InvalidAttribute("cpe attribute " + std::string(what) +
                             " contains an embedded control character");
    }
  }
}

std::string escape_attr(const CpeAttr& a) {
  if (a.is_any()) return "*";
  if (a.is_na()) return "-";
  const std::string& v = a.str();
  if (v == "-") return "\\-";  // a lone bare "-" would read back as NA
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    if (!bare_char(c)) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

CpeAttr field_to_attr(std::string_view field, CpeParseMode mode) {
  if (field == "*") return CpeAttr::any();
  if (field == "-") return CpeAttr::na();
  if (field.empty()) {
    if (mode == CpeParseMode::Strict) throw MalformedCpe("cpe: empty field in strict mode");
    return CpeAttr::any();
  }
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    char c = field[i];
    if (c == '\\') {
      if (i + 1 >= field.size()) throw MalformedCpe("cpe: dangling escape");
      out.push_back(field[++i]);
    } else if (c == '*' || c == '?') {
      // Bare wildcards inside a longer value are not canonical.
      if (mode == CpeParseMode::Strict) {
        throw MalformedCpe("cpe: unescaped wildcard inside attribute value");
      }
      out.push_back(c);
    } else {
      out.push_back(c);
    }
  }
  return CpeAttr::value(std::move(out));
}

}  // namespace

CpeAttr CpeAttr::value(std::string literal) {
  if (literal.empty()) return any();
  CpeAttr a;
  a.kind_ = Kind::Value;
  a.value_ = ascii_lower(literal);
  return a;
}

Cpe23 to_cpe(std::string_view vendor, std::string_view product, std::string_view version) {
  if (vendor.empty() || product.empty()) {
    throw InvalidAttribute("cpe vendor and product must be non-empty");
  }
  check_no_control(vendor, "vendor");
  check_no_control(product, "product");
  check_no_control(version, "version");
  Cpe23 c;
  c.part = CpePart::Application;
  c.vendor = CpeAttr::value(ascii_lower(vendor));
  c.product = CpeAttr::value(ascii_lower(product));
  c.version = version.empty() ? CpeAttr::any() : CpeAttr::value(ascii_lower(version));
  return c;
}

std::string format_cpe(const Cpe23& c) {
  std::string out = "cpe:2.3:";
  out.push_back(to_char(c.part));
  const std::array<const CpeAttr*, 10> attrs = {
      &c.vendor,   &c.product,    &c.version,   &c.update,    &c.edition,
      &c.language, &c.sw_edition, &c.target_sw, &c.target_hw, &c.other};
  for (const CpeAttr* a : attrs) {
    out.push_back(':');
    out += escape_attr(*a);
  }
  return out;
}

Cpe23 parse_cpe(std::string_view text, CpeParseMode mode) {
  constexpr std::string_view prefix = "cpe:2.3:";
  if (text.substr(0, prefix.size()) != prefix) {
    throw MalformedCpe("cpe: missing cpe:2.3: prefix");
  }

  // Split the attribute section on unescaped colons.
  std::vector<std::string_view> fields;
  std::string_view rest = text.substr(prefix.size());
  std::size_t start = 0;
  for (std::size_t i = 0; i <= rest.size(); ++i) {
    if (i == rest.size() || rest[i] == ':') {
      fields.push_back(rest.substr(start, i - start));
      start = i + 1;
    } else if (rest[i] == '\\') {
      ++i;  // escaped character, may be ':'
    }
  }

  if (fields.size() > 11) throw MalformedCpe("cpe: more than 13 colon-separated fields");
  if (fields.size() < 11) {
    if (mode == CpeParseMode::Strict) {
      throw MalformedCpe("cpe: fewer than 13 colon-separated fields in strict mode");
    }
    while (fields.size() < 11) fields.push_back({});
  }

  Cpe23 c;
  std::string_view part = fields[0];
  if (part == "a") {
    c.part = CpePart::Application;
  } else if (part == "o") {
    c.part = CpePart::OperatingSystem;
  } else if (part == "h") {
    c.part = CpePart::Hardware;
  } else {
    throw MalformedCpe("cpe: part must be one of a, o, h");
  }

  const std::array<CpeAttr*, 10> attrs = {&c.vendor,   &c.product,    &c.version,   &c.update,
                                          &c.edition,  &c.language,   &c.sw_edition, &c.target_sw,
                                          &c.target_hw, &c.other};
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    *attrs[i] = field_to_attr(fields[i + 1], mode);
  }
  return c;
}

}  // namespace firmscan
