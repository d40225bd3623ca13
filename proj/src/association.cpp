#include "domscore/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace domscore {

std::string_view to_string(MatchMethod m) { return m == MatchMethod::text ? "text" : "geometry"; }

namespace {

// Invalid sequences decode to U+FFFD one byte at a time.
std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::size_t lcs_length(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (char32_t ca : a) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = ca == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double similarity(std::u32string_view a, std::u32string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(lcs_length(a, b)) / static_cast<double>(longest);
}

}  // namespace

std::size_t lcs_length(std::string_view a, std::string_view b) {
  return lcs_length(std::u32string_view(decode_utf8(a)), std::u32string_view(decode_utf8(b)));
}

double lcs_similarity(std::string_view a, std::string_view b) {
  return similarity(decode_utf8(a), decode_utf8(b));
}

GeoDistance geo_distance(const ElementSnapshot& s, const ElementSnapshot& t) {
  const double dl = std::abs(s.box.left - t.box.left);
  const double dt = std::abs(s.box.top - t.box.top);
  const double dw = std::abs(s.box.width - t.box.width);
  const double dh = std::abs(s.box.height - t.box.height);
  return {dl + dt + dw + dh, std::max(dw, dh)};
}

AssociationMap associate(const PageSnapshot& candidate, const PageSnapshot& reference) {
  if (reference.elements.empty()) throw EmptyReferenceError();

  const auto& cands = candidate.elements;
  const auto& refs = reference.elements;

  std::vector<std::u32string> cand_text(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) cand_text[i] = decode_utf8(cands[i].text);

  std::vector<bool> cand_used(cands.size(), false);
  std::vector<std::optional<MatchedPair>> by_ref(refs.size());

  // Text phase.
  for (std::size_t r = 0; r < refs.size(); ++r) {
    if (refs[r].text.empty()) continue;
    const auto ref_text = decode_utf8(refs[r].text);
    std::optional<std::size_t> best;
    double best_dist = std::numeric_limits<double>::infinity();
    double best_sim = 0.0;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (cand_used[c] || cand_text[c].empty()) continue;
      // LCS cannot exceed the shorter length, so skip pairs that can never reach the threshold.
      const auto lo = std::min(ref_text.size(), cand_text[c].size());
      const auto hi = std::max(ref_text.size(), cand_text[c].size());
      if (static_cast<double>(lo) / static_cast<double>(hi) < kTextMatchThreshold) continue;
      const double sim = similarity(cand_text[c], ref_text);
      if (sim < kTextMatchThreshold) continue;
      const double dist = geo_distance(cands[c], refs[r]).position_size;
      if (dist < best_dist) {
        best = c;
        best_dist = dist;
        best_sim = sim;
      }
    }
    if (best) {
      cand_used[*best] = true;
      by_ref[r] = MatchedPair{*best, r, MatchMethod::text, best_sim, best_dist};
    }
  }

  // Geometry phase.
  for (std::size_t r = 0; r < refs.size(); ++r) {
    if (by_ref[r]) continue;
    bool same_tag_available = false;
    for (std::size_t c = 0; c < cands.size() && !same_tag_available; ++c)
      same_tag_available = !cand_used[c] && cands[c].tag == refs[r].tag;

    std::optional<std::size_t> best;
    GeoDistance best_geo{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (cand_used[c]) continue;
      if (same_tag_available && cands[c].tag != refs[r].tag) continue;
      const auto geo = geo_distance(cands[c], refs[r]);
      if (geo.position_size < best_geo.position_size) {
        best = c;
        best_geo = geo;
      }
    }
    if (!best || best_geo.size_gap > kSizeGapThreshold) continue;
    cand_used[*best] = true;
    by_ref[r] = MatchedPair{*best, r, MatchMethod::geometry,
                            lcs_similarity(cands[*best].text, refs[r].text), best_geo.position_size};
  }

  AssociationMap map;
  for (std::size_t r = 0; r < refs.size(); ++r) {
    if (by_ref[r])
      map.pairs.push_back(*by_ref[r]);
    else
      map.unmatched_reference.push_back(r);
  }
  for (std::size_t c = 0; c < cands.size(); ++c)
    if (!cand_used[c]) map.unmatched_candidate.push_back(c);
  return map;
}

}  // namespace domscore
