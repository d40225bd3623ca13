#include "domscore/layout_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace domscore {

double pos_sim(double a, double b, double ref) {
  if (!(ref > 0.0)) throw DomainError("pos_sim reference must be > 0");
  const double ratio = std::abs(a - b) / ref;
  if (ratio > 1.0) return 0.0;
  return 1.0 - ratio;
}

QuadrantBias quadrant(const Rect& box, double page_width, double page_height) {
  QuadrantBias q;
  const double cx = page_width / 2.0;
  const double cy = page_height / 2.0;

  if (box.right() <= cx)
    q.h_side = HSide::left;
  else if (box.left >= cx)
    q.h_side = HSide::right;
  else
    q.h_side = HSide::span;
  q.h_spans = q.h_side == HSide::span;

  if (box.bottom() <= cy)
    q.v_side = VSide::top;
  else if (box.top >= cy)
    q.v_side = VSide::bottom;
  else
    q.v_side = VSide::span;
  q.v_spans = q.v_side == VSide::span;
  return q;
}

QuadrantBias quadrant(const ElementSnapshot& e, const PageSnapshot& page) {
  return quadrant(e.box, page.page_width, page.page_height);
}

bool same_bias(const QuadrantBias& a, const QuadrantBias& b) {
  return a.h_side == b.h_side && a.v_side == b.v_side;
}

std::array<Axis, 6> axis_set(const Rect& box) {
  using enum AxisOrientation;
  return {{{vertical, box.left},
           {vertical, box.right()},
           {vertical, box.center_x()},
           {horizontal, box.top},
           {horizontal, box.bottom()},
           {horizontal, box.center_y()}}};
}

bool axis_overlaps(const ElementSnapshot& e, const Axis& axis, double tolerance) {
  if (axis.orientation == AxisOrientation::vertical)
    return e.box.left - tolerance <= axis.position && axis.position <= e.box.right() + tolerance;
  return e.box.top - tolerance <= axis.position && axis.position <= e.box.bottom() + tolerance;
}

double GroupStats::total_weight() const { return std::accumulate(race_weight.begin(), race_weight.end(), 0.0); }

GroupStats build_groups(const PageSnapshot& page, const GroupOptions& options) {
  const auto& elements = page.elements;
  const std::size_t n = elements.size();

  std::vector<std::vector<std::string>> class_sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    class_sets[i] = elements[i].classes;
    std::sort(class_sets[i].begin(), class_sets[i].end());
    class_sets[i].erase(std::unique(class_sets[i].begin(), class_sets[i].end()), class_sets[i].end());
  }

  GroupStats stats;
  stats.groups.resize(n);
  stats.race_groups.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto axes = axis_set(elements[i].box);
    for (std::size_t j = 0; j < n; ++j) {
      const bool touches = j == i || std::any_of(axes.begin(), axes.end(), [&](const Axis& a) {
                             return axis_overlaps(elements[j], a, options.alignment_tolerance);
                           });
      if (!touches) continue;
      stats.groups[i].push_back(j);
      if (elements[j].tag == elements[i].tag && class_sets[j] == class_sets[i]) stats.race_groups[i].push_back(j);
    }
  }

  // Each element not yet claimed by an earlier representative's race group
  // opens a new group.
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++stats.group_count;
    seen[i] = true;
    for (std::size_t r : stats.race_groups[i]) seen[r] = true;
  }

  stats.race_weight.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    stats.race_weight[i] =
        1.0 / (static_cast<double>(stats.race_groups[i].size()) * static_cast<double>(stats.group_count));
  return stats;
}

namespace {

// Quadrant gate times both offset similarities, in [0, 1].
double layout_factor(const ElementSnapshot& s, const ElementSnapshot& t, const PageSnapshot& candidate_page,
                     const PageSnapshot& reference_page) {
  double factor = 1.0;
  if (!same_bias(quadrant(s, candidate_page), quadrant(t, reference_page))) factor = 0.0;
  factor *= pos_sim(s.box.left, t.box.left, reference_page.page_width / 2.0);
  factor *= pos_sim(s.box.top, t.box.top, reference_page.page_height / 2.0);
  return factor;
}

}  // namespace

double rda_pair(const ElementSnapshot& s, const ElementSnapshot& t, double race_weight,
                const PageSnapshot& candidate_page, const PageSnapshot& reference_page) {
  return 100.0 * race_weight * layout_factor(s, t, candidate_page, reference_page);
}

double reference_total_weight(const GroupStats& groups_ref) {
  if (groups_ref.group_count == 0) throw EmptyReferenceError();
  return groups_ref.total_weight();
}

double to_percent(double weighted_sum, double total_weight) {
  return std::clamp(100.0 * (weighted_sum / total_weight), 0.0, 100.0);
}

LayoutScores layout_scores(const AssociationMap& assoc, const GroupStats& groups_cand,
                           const GroupStats& groups_ref, const PageSnapshot& candidate,
                           const PageSnapshot& reference) {
  const double total = reference_total_weight(groups_ref);
  LayoutScores out;
  double rda_sum = 0.0;
  double gda_sum = 0.0;
  for (const auto& p : assoc.pairs) {
    const double w = groups_ref.race_weight.at(p.reference);
    const double factor =
        layout_factor(candidate.elements.at(p.candidate), reference.elements.at(p.reference), candidate, reference);
    const bool group_match = groups_cand.groups.at(p.candidate).size() == groups_ref.groups.at(p.reference).size();
    rda_sum += w * factor;
    if (group_match) gda_sum += w;
    out.per_pair.push_back({p.reference, 100.0 * w * factor, group_match});
  }
  out.rda = to_percent(rda_sum, total);
  out.gda = to_percent(gda_sum, total);
  return out;
}

double rda_page(const AssociationMap& assoc, const GroupStats& groups_ref, const PageSnapshot& candidate,
                const PageSnapshot& reference) {
  const double total = reference_total_weight(groups_ref);
  double sum = 0.0;
  for (const auto& p : assoc.pairs)
    sum += groups_ref.race_weight.at(p.reference) *
           layout_factor(candidate.elements.at(p.candidate), reference.elements.at(p.reference), candidate, reference);
  return to_percent(sum, total);
}

double gda_page(const AssociationMap& assoc, const GroupStats& groups_cand, const GroupStats& groups_ref) {
  const double total = reference_total_weight(groups_ref);
  double sum = 0.0;
  for (const auto& p : assoc.pairs)
    if (groups_cand.groups.at(p.candidate).size() == groups_ref.groups.at(p.reference).size())
      sum += groups_ref.race_weight.at(p.reference);
  return to_percent(sum, total);
}

}  // namespace domscore
