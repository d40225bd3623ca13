#include "domscore/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "domscore/layout_metrics.hpp"

namespace domscore {

using nlohmann::json;

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::schema: return "SchemaError";
    case ErrorKind::validation: return "ValidationError";
    case ErrorKind::empty_reference: return "EmptyReference";
    case ErrorKind::domain: return "DomainError";
    case ErrorKind::weight: return "WeightError";
    case ErrorKind::group_size: return "GroupSizeError";
  }
  return "Error";
}

std::string_view to_string(Position p) {
  switch (p) {
    case Position::static_: return "static";
    case Position::relative: return "relative";
    case Position::absolute: return "absolute";
    case Position::fixed: return "fixed";
    case Position::sticky: return "sticky";
  }
  return "static";
}

std::optional<Position> parse_position(std::string_view s) {
  if (s == "static") return Position::static_;
  if (s == "relative") return Position::relative;
  if (s == "absolute") return Position::absolute;
  if (s == "fixed") return Position::fixed;
  if (s == "sticky") return Position::sticky;
  return std::nullopt;
}

std::string normalize_text(std::string_view text) {
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

namespace {

std::string child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}

std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json& require(const json& obj, std::string_view key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(child(path, key), "missing field '" + std::string(key) + "'");
  return *it;
}

const json& require_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, "expected object");
  return v;
}

const json& require_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected array");
  return v;
}

double read_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(path, "number must be finite");
  return d;
}

std::int64_t read_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected integer");
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) throw ValidationError(path, "integer out of range");
    return static_cast<std::int64_t>(u);
  }
  return v.get<std::int64_t>();
}

const std::string& read_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected string");
  return v.get_ref<const std::string&>();
}

bool read_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw SchemaError(path, "expected boolean");
  return v.get<bool>();
}

std::uint8_t read_channel(const json& v, const std::string& path) {
  auto c = read_integer(v, path);
  if (c < 0 || c > 255) throw ValidationError(path, "color channel outside [0,255]");
  return static_cast<std::uint8_t>(c);
}

Rgb read_rgb(const json& v, const std::string& path) {
  require_array(v, path);
  if (v.size() != 3) throw SchemaError(path, "expected [r,g,b]");
  return {read_channel(v[0], child(path, 0)), read_channel(v[1], child(path, 1)),
          read_channel(v[2], child(path, 2))};
}

Rgba read_rgba(const json& v, const std::string& path) {
  require_array(v, path);
  if (v.size() != 4) throw SchemaError(path, "expected [r,g,b,a]");
  Rgba c{read_channel(v[0], child(path, 0)), read_channel(v[1], child(path, 1)),
         read_channel(v[2], child(path, 2)), read_number(v[3], child(path, 3))};
  if (c.a < 0.0 || c.a > 1.0) throw ValidationError(child(path, 3), "alpha outside [0,1]");
  return c;
}

StyleAttrs read_styles(const json& v, const std::string& path) {
  require_object(v, path);
  StyleAttrs s;
  s.color = read_rgb(require(v, "color", path), child(path, "color"));
  s.background_color = read_rgba(require(v, "backgroundColor", path), child(path, "backgroundColor"));
  s.font_size = read_number(require(v, "fontSize", path), child(path, "fontSize"));
  s.border_radius = read_number(require(v, "borderRadius", path), child(path, "borderRadius"));
  const auto& pos = read_string(require(v, "position", path), child(path, "position"));
  auto parsed = parse_position(pos);
  if (!parsed) throw SchemaError(child(path, "position"), "unknown position '" + pos + "'");
  s.position = *parsed;
  s.font_empty = read_bool(require(v, "fontEmpty", path), child(path, "fontEmpty"));
  return s;
}

Rect read_box(const json& v, const std::string& path) {
  require_object(v, path);
  return {read_number(require(v, "left", path), child(path, "left")),
          read_number(require(v, "top", path), child(path, "top")),
          read_number(require(v, "width", path), child(path, "width")),
          read_number(require(v, "height", path), child(path, "height"))};
}

ElementSnapshot read_element(const json& v, const std::string& path) {
  require_object(v, path);
  ElementSnapshot e;
  auto index = read_integer(require(v, "index", path), child(path, "index"));
  if (index < 0) throw ValidationError(child(path, "index"), "negative index");
  e.index = static_cast<std::size_t>(index);

  const auto& parent = require(v, "parent", path);
  if (!parent.is_null()) {
    auto p = read_integer(parent, child(path, "parent"));
    if (p < 0) throw ValidationError(child(path, "parent"), "negative parent index");
    e.parent = static_cast<std::size_t>(p);
  }

  e.tag = read_string(require(v, "tag", path), child(path, "tag"));
  std::transform(e.tag.begin(), e.tag.end(), e.tag.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  const auto& classes = require_array(require(v, "classes", path), child(path, "classes"));
  for (std::size_t i = 0; i < classes.size(); ++i)
    e.classes.push_back(read_string(classes[i], child(child(path, "classes"), i)));

  e.text = normalize_text(read_string(require(v, "text", path), child(path, "text")));
  e.box = read_box(require(v, "box", path), child(path, "box"));
  e.styles = read_styles(require(v, "styles", path), child(path, "styles"));
  e.visible = read_bool(require(v, "visible", path), child(path, "visible"));
  return e;
}

std::string element_path(std::size_t i) { return "/elements/" + std::to_string(i); }

}  // namespace

void validate_snapshot(const PageSnapshot& page) {
  if (!(page.page_width > 0.0) || !std::isfinite(page.page_width))
    throw ValidationError("/page/width", "page width must be > 0");
  if (!(page.page_height > 0.0) || !std::isfinite(page.page_height))
    throw ValidationError("/page/height", "page height must be > 0");

  for (std::size_t i = 0; i < page.elements.size(); ++i) {
    const auto& e = page.elements[i];
    const auto base = element_path(i);
    const auto where = "element " + std::to_string(i) + ": ";
    if (e.index != i)
      throw ValidationError(base + "/index", where + "index must equal document position");
    if (e.parent && *e.parent >= i)
      throw ValidationError(base + "/parent", where + "parent must precede the element");
    if (!e.visible) throw ValidationError(base + "/visible", where + "element must be visible");

    const Rect& b = e.box;
    for (auto [name, value] : {std::pair{"left", b.left}, std::pair{"top", b.top},
                               std::pair{"width", b.width}, std::pair{"height", b.height}}) {
      if (!std::isfinite(value))
        throw ValidationError(base + "/box/" + name, where + name + " must be finite");
    }
    if (b.width < 0.0) throw ValidationError(base + "/box/width", where + "width is negative");
    if (b.height < 0.0) throw ValidationError(base + "/box/height", where + "height is negative");
    if (b.width == 0.0) throw ValidationError(base + "/box/width", where + "zero-area element");
    if (b.height == 0.0) throw ValidationError(base + "/box/height", where + "zero-area element");

    const auto& s = e.styles;
    if (!std::isfinite(s.font_size) || s.font_size < 0.0)
      throw ValidationError(base + "/styles/fontSize", where + "fontSize must be finite and >= 0");
    if (!std::isfinite(s.border_radius) || s.border_radius < 0.0)
      throw ValidationError(base + "/styles/borderRadius", where + "borderRadius must be finite and >= 0");
    if (!(s.background_color.a >= 0.0 && s.background_color.a <= 1.0))
      throw ValidationError(base + "/styles/backgroundColor/3", where + "alpha outside [0,1]");
  }
}

PageSnapshot parse_snapshot(const json& doc) {
  require_object(doc, "");
  const auto& page = require_object(require(doc, "page", ""), "/page");

  PageSnapshot out;
  out.page_width = read_number(require(page, "width", "/page"), "/page/width");
  out.page_height = read_number(require(page, "height", "/page"), "/page/height");
  if (auto it = page.find("url"); it != page.end() && !it->is_null())
    out.url = read_string(*it, "/page/url");

  const auto& elements = require_array(require(doc, "elements", ""), "/elements");
  out.elements.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) out.elements.push_back(read_element(elements[i], element_path(i)));

  validate_snapshot(out);
  return out;
}

PageSnapshot parse_snapshot(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_snapshot(doc);
}

json to_json(const PageSnapshot& page) {
  json p = {{"width", page.page_width}, {"height", page.page_height}};
  if (page.url) p["url"] = *page.url;

  json elements = json::array();
  for (const auto& e : page.elements) {
    const auto& s = e.styles;
    elements.push_back({
        {"index", e.index},
        {"parent", e.parent ? json(*e.parent) : json(nullptr)},
        {"tag", e.tag},
        {"classes", e.classes},
        {"text", e.text},
        {"box", {{"left", e.box.left}, {"top", e.box.top}, {"width", e.box.width}, {"height", e.box.height}}},
        {"styles",
         {{"color", {s.color.r, s.color.g, s.color.b}},
          {"backgroundColor",
           {s.background_color.r, s.background_color.g, s.background_color.b, s.background_color.a}},
          {"fontSize", s.font_size},
          {"borderRadius", s.border_radius},
          {"position", to_string(s.position)},
          {"fontEmpty", s.font_empty}}},
        {"visible", e.visible},
    });
  }
  return {{"page", std::move(p)}, {"elements", std::move(elements)}};
}

std::string serialize_snapshot(const PageSnapshot& page) { return to_json(page).dump(); }

std::size_t dom_depth(const PageSnapshot& page) {
  std::vector<std::size_t> depth(page.elements.size(), 1);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < page.elements.size(); ++i) {
    if (const auto& parent = page.elements[i].parent) depth[i] = depth[*parent] + 1;
    deepest = std::max(deepest, depth[i]);
  }
  return deepest;
}

PageStats page_stats(const PageSnapshot& page, const GroupStats& groups) {
  return {page.elements.size(), dom_depth(page), groups.group_count};
}

double style_quality_score(const PageSnapshot& page) {
  std::size_t at_left_edge = 0;
  std::size_t degraded = 0;
  for (const auto& e : page.elements) {
    if (e.box.left != 0.0) continue;
    ++at_left_edge;
    if (e.styles.position == Position::static_ && e.styles.font_empty) ++degraded;
  }
  if (at_left_edge == 0) return 0.0;
  return static_cast<double>(degraded) / static_cast<double>(at_left_edge);
}

}  // namespace domscore
