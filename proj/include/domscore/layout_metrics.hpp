#pragma once

// Layout scoring: quadrant bias, per-pair relative layout score, axis
// alignment groups, race groups, Group Count and the page-level layout
// (RDA) and group-size (GDA) percentages.

#include <array>
#include <cstddef>
#include <vector>

#include "domscore/association.hpp"
#include "domscore/snapshot.hpp"

namespace domscore {

enum class HSide { left, right, span };
enum class VSide { top, bottom, span };

struct QuadrantBias {
  HSide h_side = HSide::left;
  bool h_spans = false;
  VSide v_side = VSide::top;
  bool v_spans = false;

  bool operator==(const QuadrantBias&) const = default;
};

/// 1 - |a - b| / ref, floored at 0. Throws DomainError when ref <= 0.
double pos_sim(double a, double b, double ref);

/// Side of the page center lines the box falls on. A box whose edge lies
/// exactly on a center line still counts as wholly on one side.
QuadrantBias quadrant(const Rect& box, double page_width, double page_height);
QuadrantBias quadrant(const ElementSnapshot& e, const PageSnapshot& page);

/// Two biases match when both side enums agree.
bool same_bias(const QuadrantBias& a, const QuadrantBias& b);

enum class AxisOrientation { vertical, horizontal };

struct Axis {
  AxisOrientation orientation = AxisOrientation::vertical;
  double position = 0.0;
};

/// Left, right and horizontal-center vertical lines followed by top,
/// bottom and vertical-center horizontal lines.
std::array<Axis, 6> axis_set(const Rect& box);

/// Whether the axis line meets the closed box, widened by `tolerance` px.
bool axis_overlaps(const ElementSnapshot& e, const Axis& axis, double tolerance = 0.0);

struct GroupOptions {
  double alignment_tolerance = 0.0;
};

struct GroupStats {
  /// groups[i]: indices of every element touching one of element i's axes
  /// (always includes i), ascending.
  std::vector<std::vector<std::size_t>> groups;
  /// race_groups[i]: members of groups[i] with the same tag and class set.
  std::vector<std::vector<std::size_t>> race_groups;
  std::size_t group_count = 0;
  /// 1 / (|race_groups[i]| * group_count)
  std::vector<double> race_weight;

  double total_weight() const;
};

GroupStats build_groups(const PageSnapshot& page, const GroupOptions& options = {});

/// Sum of the reference race weights, the denominator of every page-level
/// percentage. Throws EmptyReferenceError for an empty reference.
double reference_total_weight(const GroupStats& groups_ref);

/// 100 * weighted_sum / total_weight, clamped to [0, 100]. Sums accumulated
/// in reference order match total_weight() bit for bit on identical pages,
/// so self-comparison yields exactly 100.
double to_percent(double weighted_sum, double total_weight);

/// Relative layout score of one associated pair, in [0, 100 * race_weight].
/// Offsets are measured against half the reference page width and height.
double rda_pair(const ElementSnapshot& s, const ElementSnapshot& t, double race_weight,
                const PageSnapshot& candidate_page, const PageSnapshot& reference_page);

struct PairLayout {
  std::size_t reference = 0;
  double pair_score = 0.0;
  bool group_match = false;

  bool operator==(const PairLayout&) const = default;
};

struct LayoutScores {
  double rda = 0.0;  // [0, 100]
  double gda = 0.0;  // [0, 100]
  std::vector<PairLayout> per_pair;

  bool operator==(const LayoutScores&) const = default;
};

double rda_page(const AssociationMap& assoc, const GroupStats& groups_ref, const PageSnapshot& candidate,
                const PageSnapshot& reference);

double gda_page(const AssociationMap& assoc, const GroupStats& groups_cand, const GroupStats& groups_ref);

LayoutScores layout_scores(const AssociationMap& assoc, const GroupStats& groups_cand,
                           const GroupStats& groups_ref, const PageSnapshot& candidate,
                           const PageSnapshot& reference);

}  // namespace domscore
