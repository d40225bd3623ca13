#pragma once

// Independent reference computations. None of these call into the library
// routines they are used to check.

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "domscore/snapshot.hpp"

namespace test_support {

/// Exponential LCS recursion; only for short strings.
inline std::size_t naive_lcs(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) return 0;
  if (a.front() == b.front()) return 1 + naive_lcs(a.substr(1), b.substr(1));
  const auto skip_a = naive_lcs(a.substr(1), b);
  const auto skip_b = naive_lcs(a, b.substr(1));
  return skip_a > skip_b ? skip_a : skip_b;
}

inline double naive_lcs_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = a.size() > b.size() ? a.size() : b.size();
  if (longest == 0) return 0.0;
  return static_cast<double>(naive_lcs(a, b)) / static_cast<double>(longest);
}

/// Members of element i's alignment group, recomputed from the boxes.
inline std::vector<std::size_t> oracle_group(const domscore::PageSnapshot& page, std::size_t i) {
  const auto& b = page.elements[i].box;
  const double vertical_lines[] = {b.left, b.left + b.width, b.left + b.width / 2.0};
  const double horizontal_lines[] = {b.top, b.top + b.height, b.top + b.height / 2.0};
  std::vector<std::size_t> members;
  for (std::size_t j = 0; j < page.elements.size(); ++j) {
    const auto& o = page.elements[j].box;
    bool hit = false;
    for (double x : vertical_lines) hit = hit || (o.left <= x && x <= o.left + o.width);
    for (double y : horizontal_lines) hit = hit || (o.top <= y && y <= o.top + o.height);
    if (hit) members.push_back(j);
  }
  return members;
}

inline std::vector<std::size_t> oracle_race_group(const domscore::PageSnapshot& page, std::size_t i) {
  const auto& e = page.elements[i];
  const std::set<std::string> classes(e.classes.begin(), e.classes.end());
  std::vector<std::size_t> race;
  for (std::size_t j : oracle_group(page, i)) {
    const auto& o = page.elements[j];
    if (o.tag == e.tag && std::set<std::string>(o.classes.begin(), o.classes.end()) == classes) race.push_back(j);
  }
  return race;
}

/// Group Count by a literal walk: viewed set V, counter C.
inline std::size_t oracle_group_count(const domscore::PageSnapshot& page) {
  std::set<std::size_t> viewed;
  std::size_t count = 0;
  for (std::size_t e = 0; e < page.elements.size(); ++e) {
    if (viewed.count(e)) continue;
    count = count + 1;
    viewed.insert(e);
    for (std::size_t r : oracle_race_group(page, e)) viewed.insert(r);
  }
  return count;
}

/// Longest root-to-leaf path (in nodes) by recursion over children.
inline std::size_t oracle_depth_from(const domscore::PageSnapshot& page, std::size_t node) {
  std::size_t best = 0;
  for (const auto& e : page.elements)
    if (e.parent && *e.parent == node) {
      const auto d = oracle_depth_from(page, e.index);
      if (d > best) best = d;
    }
  return 1 + best;
}

inline std::size_t oracle_dom_depth(const domscore::PageSnapshot& page) {
  std::size_t best = 0;
  for (const auto& e : page.elements)
    if (!e.parent) {
      const auto d = oracle_depth_from(page, e.index);
      if (d > best) best = d;
    }
  return best;
}

}  // namespace test_support
