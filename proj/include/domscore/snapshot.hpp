#pragma once

// Rendered-page snapshot model. A snapshot is produced by an in-browser
// extractor and holds every visible element with its page-space box,
// own text and a handful of computed styles.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domscore/error.hpp"
#include "json.hpp"

namespace domscore {

struct Rect {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;

  double right() const noexcept { return left + width; }
  double bottom() const noexcept { return top + height; }
  double center_x() const noexcept { return left + width / 2.0; }
  double center_y() const noexcept { return top + height / 2.0; }

  bool operator==(const Rect&) const = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  double a = 0.0;  // [0, 1]

  bool operator==(const Rgba&) const = default;
};

enum class Position { static_, relative, absolute, fixed, sticky };

std::string_view to_string(Position p);
std::optional<Position> parse_position(std::string_view s);

struct StyleAttrs {
  Rgb color;
  Rgba background_color;
  double font_size = 16.0;
  double border_radius = 0.0;
  Position position = Position::static_;
  bool font_empty = false;  // computed font-family was the empty string

  bool operator==(const StyleAttrs&) const = default;
};

struct ElementSnapshot {
  std::size_t index = 0;
  std::optional<std::size_t> parent;
  std::string tag;
  std::vector<std::string> classes;
  std::string text;  // own text nodes only, whitespace-normalized
  Rect box;
  StyleAttrs styles;
  bool visible = true;

  bool operator==(const ElementSnapshot&) const = default;
};

struct PageSnapshot {
  double page_width = 1920.0;
  double page_height = 1080.0;
  std::optional<std::string> url;
  std::vector<ElementSnapshot> elements;

  bool operator==(const PageSnapshot&) const = default;
};

/// Collapses runs of ASCII whitespace to one space and trims both ends.
std::string normalize_text(std::string_view text);

/// Parses and validates a snapshot document. Throws SchemaError for
/// malformed or mistyped input and ValidationError for invariant
/// violations; both carry a JSON pointer to the offending field.
PageSnapshot parse_snapshot(std::string_view document);
PageSnapshot parse_snapshot(const nlohmann::json& document);
inline PageSnapshot parse_snapshot(const std::string& document) { return parse_snapshot(std::string_view(document)); }
inline PageSnapshot parse_snapshot(const char* document) { return parse_snapshot(std::string_view(document)); }

/// Checks the invariants of an in-memory snapshot (the same rules
/// parse_snapshot enforces).
void validate_snapshot(const PageSnapshot& page);

nlohmann::json to_json(const PageSnapshot& page);
std::string serialize_snapshot(const PageSnapshot& page);

struct GroupStats;

struct PageStats {
  std::size_t tag_count = 0;
  std::size_t dom_depth = 0;
  std::size_t group_count = 0;
};

PageStats page_stats(const PageSnapshot& page, const GroupStats& groups);

/// Longest parent chain length plus one; 0 for an empty page.
std::size_t dom_depth(const PageSnapshot& page);

/// Share of left-edge elements (box.left == 0) that are statically
/// positioned with an empty font family. Pages with no left-edge element
/// score 0.
double style_quality_score(const PageSnapshot& page);

}  // namespace domscore
