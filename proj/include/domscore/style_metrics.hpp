#pragma once

#include <cstddef>
#include <vector>

#include "domscore/association.hpp"
#include "domscore/layout_metrics.hpp"
#include "domscore/snapshot.hpp"

namespace domscore {

enum class StyleAttribute { color, background_color, font_size, border_radius };

struct StyleOptions {
  /// Attributes averaged into each element's similarity. Must be non-empty.
  std::vector<StyleAttribute> attributes{StyleAttribute::color, StyleAttribute::background_color,
                                         StyleAttribute::font_size, StyleAttribute::border_radius};
};

/// 1 - ||a - b|| / (255 * sqrt(3)), clamped to [0, 1].
double color_sim(const Rgb& a, const Rgb& b);

/// RGBA distance with channels scaled to [0, 1] and alpha as a fourth
/// component: 1 - ||a - b|| / 2.
double background_sim(const Rgba& a, const Rgba& b);

/// Relative difference for non-negative lengths; 1 when both are zero.
double scalar_sim(double a, double b);

struct PairStyle {
  std::size_t reference = 0;
  double color_sim = 0.0;
  double bg_sim = 0.0;
  double font_sim = 0.0;
  double radius_sim = 0.0;
  double element_sim = 0.0;

  bool operator==(const PairStyle&) const = default;
};

struct StyleScores {
  double sda = 0.0;  // [0, 100]
  std::vector<PairStyle> per_pair;

  bool operator==(const StyleScores&) const = default;
};

PairStyle pair_style(const ElementSnapshot& s, const ElementSnapshot& t, const StyleOptions& options = {});

StyleScores style_scores(const AssociationMap& assoc, const GroupStats& groups_ref, const PageSnapshot& candidate,
                         const PageSnapshot& reference, const StyleOptions& options = {});

double sda_page(const AssociationMap& assoc, const GroupStats& groups_ref, const PageSnapshot& candidate,
                const PageSnapshot& reference, const StyleOptions& options = {});

}  // namespace domscore
