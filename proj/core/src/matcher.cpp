// SPDX-License-Identifier: Apache-2.0
#include "firmscan/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "firmscan/errors.hpp"

namespace firmscan {

namespace {

std::vector<std::string_view> split_segments(std::string_view v) {
  std::vector<std::string_view> segs;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= v.size(); ++i) {
    if (i == v.size() || v[i] == '.' || v[i] == '-') {
      segs.push_back(v.substr(start, i - start));
      start = i + 1;
    }
  }
  return segs;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Arbitrary-precision compare of two digit strings.
int compare_numeric(std::string_view a, std::string_view b) {
  a.remove_prefix(std::min(a.find_first_not_of('0'), a.size()));
  b.remove_prefix(std::min(b.find_first_not_of('0'), b.size()));
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int compare_segment(std::string_view a, std::string_view b) {
  bool na = all_digits(a);
  bool nb = all_digits(b);
  if (na && nb) return compare_numeric(a, b);
  // Numeric segments sort before alphanumeric ones; this keeps the
  // order total (plain lexical mixing of the two is not transitive).
  if (na != nb) return na ? -1 : 1;
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

int compare_versions(std::string_view a, std::string_view b) {
  std::vector<std::string_view> sa = split_segments(a);
  std::vector<std::string_view> sb = split_segments(b);
  std::size_t n = std::max(sa.size(), sb.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view va = i < sa.size() ? sa[i] : std::string_view("0");
    std::string_view vb = i < sb.size() ? sb[i] : std::string_view("0");
    if (va.empty()) va = "0";
    if (vb.empty()) vb = "0";
    int c = compare_segment(va, vb);
    if (c != 0) return c;
  }
  return 0;
}

bool version_matches(std::string_view version, const CpeMatchRange& range) {
  const CpeAttr& base = range.base.version;
  if (base.is_na()) return false;
  if (base.is_value()) return compare_versions(version, base.str()) == 0;

  // base is ANY: an unbounded entry matches every version.
  if (range.start) {
    int c = compare_versions(version, range.start->value);
    if (range.start->inclusive ? c < 0 : c <= 0) return false;
  }
  if (range.end) {
    int c = compare_versions(version, range.end->value);
    if (range.end->inclusive ? c > 0 : c >= 0) return false;
  }
  return true;
}

std::vector<const CveRecord*> match_cpe(const VulnIndex& index, const Cpe23& cpe) {
  if (!cpe.vendor.is_value() || !cpe.product.is_value() || !cpe.version.is_value()) {
    throw UnresolvedVersion("match_cpe: query needs literal vendor, product and version (got " +
                            format_cpe(cpe) + ")");
  }

  std::vector<const CveRecord*> out;
  const std::vector<std::string>* ids = index.product_lookup(cpe.vendor.str(), cpe.product.str());
  if (ids == nullptr) return out;

  for (const std::string& id : *ids) {
    const CveRecord* rec = index.find(id);
    if (rec == nullptr) continue;
    bool hit = false;
    for (const CpeMatchRange& range : rec->configurations) {
      if (!range.base.vendor.is_value() || !range.base.product.is_value()) continue;
      if (range.base.vendor.str() != cpe.vendor.str() ||
          range.base.product.str() != cpe.product.str()) {
        continue;
      }
      if (version_matches(cpe.version.str(), range)) {
        hit = true;
        break;
      }
    }
    if (hit) out.push_back(rec);
  }
  std::sort(out.begin(), out.end(),
            [](const CveRecord* a, const CveRecord* b) { return a->id < b->id; });
  return out;
}

}  // namespace firmscan
