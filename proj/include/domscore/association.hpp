#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "domscore/snapshot.hpp"

namespace domscore {

/// Minimum LCS similarity for a text-based match (inclusive).
inline constexpr double kTextMatchThreshold = 0.80;

/// Largest width/height deviation, in CSS pixels, still accepted for a
/// geometry-based match (inclusive).
inline constexpr double kSizeGapThreshold = 10.0;

enum class MatchMethod { text, geometry };

std::string_view to_string(MatchMethod m);

struct MatchedPair {
  std::size_t candidate = 0;
  std::size_t reference = 0;
  MatchMethod method = MatchMethod::geometry;
  double text_sim = 0.0;
  double geo_dist = 0.0;

  bool operator==(const MatchedPair&) const = default;
};

/// One-to-one pairing of candidate elements to reference elements. Pairs
/// are ordered by reference index.
struct AssociationMap {
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> unmatched_reference;
  std::vector<std::size_t> unmatched_candidate;

  bool operator==(const AssociationMap&) const = default;
};

/// Length of the longest common subsequence of two strings, counted in
/// Unicode code points.
std::size_t lcs_length(std::string_view a, std::string_view b);

/// lcs_length(a, b) / max(|a|, |b|) in code points; 0 when both are empty.
double lcs_similarity(std::string_view a, std::string_view b);

struct GeoDistance {
  double position_size = 0.0;  // |dleft| + |dtop| + |dwidth| + |dheight|
  double size_gap = 0.0;       // max(|dwidth|, |dheight|)
};

GeoDistance geo_distance(const ElementSnapshot& s, const ElementSnapshot& t);

/// Greedy two-phase matcher.
///
/// Text phase: each reference element with text, in document order, takes
/// the unmatched candidate with text whose LCS similarity is at least
/// kTextMatchThreshold and whose box is closest (L1 over left, top, width,
/// height; ties go to the lower candidate index).
///
/// Geometry phase: each still-unmatched reference element takes the closest
/// unmatched candidate, restricted to the same tag when such candidates
/// exist. The match is rejected when its size gap exceeds
/// kSizeGapThreshold.
///
/// Throws EmptyReferenceError when the reference page has no elements.
AssociationMap associate(const PageSnapshot& candidate, const PageSnapshot& reference);

/// Pluggable matcher; associate() is the default.
using Matcher = std::function<AssociationMap(const PageSnapshot&, const PageSnapshot&)>;

}  // namespace domscore
