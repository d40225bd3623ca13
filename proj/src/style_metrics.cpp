#include "domscore/style_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace domscore {

double color_sim(const Rgb& a, const Rgb& b) {
  const double dr = double(a.r) - double(b.r);
  const double dg = double(a.g) - double(b.g);
  const double db = double(a.b) - double(b.b);
  const double dist = std::sqrt(dr * dr + dg * dg + db * db);
  return std::clamp(1.0 - dist / (255.0 * std::sqrt(3.0)), 0.0, 1.0);
}

double background_sim(const Rgba& a, const Rgba& b) {
  const double dr = (double(a.r) - double(b.r)) / 255.0;
  const double dg = (double(a.g) - double(b.g)) / 255.0;
  const double db = (double(a.b) - double(b.b)) / 255.0;
  const double da = a.a - b.a;
  const double dist = std::sqrt(dr * dr + dg * dg + db * db + da * da);
  return std::clamp(1.0 - dist / 2.0, 0.0, 1.0);
}

double scalar_sim(double a, double b) {
  const double hi = std::max(a, b);
  if (hi == 0.0) return 1.0;
  return std::max(0.0, 1.0 - std::abs(a - b) / hi);
}

PairStyle pair_style(const ElementSnapshot& s, const ElementSnapshot& t, const StyleOptions& options) {
  if (options.attributes.empty()) throw DomainError("no style attributes enabled");
  PairStyle p;
  p.reference = t.index;
  p.color_sim = color_sim(s.styles.color, t.styles.color);
  p.bg_sim = background_sim(s.styles.background_color, t.styles.background_color);
  p.font_sim = scalar_sim(s.styles.font_size, t.styles.font_size);
  p.radius_sim = scalar_sim(s.styles.border_radius, t.styles.border_radius);

  double sum = 0.0;
  for (auto attr : options.attributes) {
    switch (attr) {
      case StyleAttribute::color: sum += p.color_sim; break;
      case StyleAttribute::background_color: sum += p.bg_sim; break;
      case StyleAttribute::font_size: sum += p.font_sim; break;
      case StyleAttribute::border_radius: sum += p.radius_sim; break;
    }
  }
  p.element_sim = sum / static_cast<double>(options.attributes.size());
  return p;
}

StyleScores style_scores(const AssociationMap& assoc, const GroupStats& groups_ref, const PageSnapshot& candidate,
                         const PageSnapshot& reference, const StyleOptions& options) {
  const double total = reference_total_weight(groups_ref);
  StyleScores out;
  double sum = 0.0;
  for (const auto& pair : assoc.pairs) {
    auto p = pair_style(candidate.elements.at(pair.candidate), reference.elements.at(pair.reference), options);
    sum += groups_ref.race_weight.at(pair.reference) * p.element_sim;
    out.per_pair.push_back(p);
  }
  out.sda = to_percent(sum, total);
  return out;
}

double sda_page(const AssociationMap& assoc, const GroupStats& groups_ref, const PageSnapshot& candidate,
                const PageSnapshot& reference, const StyleOptions& options) {
  return style_scores(assoc, groups_ref, candidate, reference, options).sda;
}

}  // namespace domscore
