#include "domscore/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "domscore/layout_metrics.hpp"
#include "domscore/parallel.hpp"
#include "domscore/snapshot.hpp"

namespace domscore {

namespace fs = std::filesystem;
using nlohmann::json;

BinSpec::BinSpec(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.empty() || edges_.front() != 0.0) throw std::invalid_argument("bin edges must start at 0");
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (!(edges_[i] > edges_[i - 1]) || !std::isfinite(edges_[i]))
      throw std::invalid_argument("bin edges must be finite and strictly ascending");
}

BinSpec BinSpec::fine() { return BinSpec({0, 50, 100, 150, 200, 400}); }
BinSpec BinSpec::coarse() { return BinSpec({0, 200, 400}); }

std::size_t BinSpec::bin_of(double value) const {
  auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  if (it == edges_.begin()) return 0;
  return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

std::string BinSpec::label(std::size_t bin) const {
  auto fmt = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  if (bin + 1 >= edges_.size()) return fmt(edges_.back()) + "+";
  return fmt(edges_[bin]) + "-" + fmt(edges_[bin + 1]);
}

MeanStd mean_std(const std::vector<double>& values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

std::vector<fs::path> list_snapshots(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Column {
  std::vector<double> tag_count, dom_depth, group_count;

  void add(const PageRecord& r) {
    tag_count.push_back(static_cast<double>(r.tag_count));
    dom_depth.push_back(static_cast<double>(r.dom_depth));
    group_count.push_back(static_cast<double>(r.group_count));
  }
};

}  // namespace

CorpusStats summarize(std::vector<PageRecord> records, const BinSpec& bins, std::size_t skipped) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.file < b.file; });

  CorpusStats stats;
  stats.pages = records.size();
  stats.skipped = skipped;

  Column all;
  std::vector<Column> per_bin(bins.size());
  for (const auto& r : records) {
    all.add(r);
    per_bin[bins.bin_of(static_cast<double>(r.group_count))].add(r);
  }
  stats.tag_count = mean_std(all.tag_count);
  stats.dom_depth = mean_std(all.dom_depth);
  stats.group_count = mean_std(all.group_count);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    stats.bins.push_back({bins.label(b), per_bin[b].tag_count.size(), mean_std(per_bin[b].tag_count),
                          mean_std(per_bin[b].dom_depth), mean_std(per_bin[b].group_count)});
  }
  stats.records = std::move(records);
  return stats;
}

CorpusStats corpus_stats(const fs::path& dir, const BinSpec& bins, unsigned workers) {
  const auto files = list_snapshots(dir);
  std::vector<std::optional<PageRecord>> slots(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    try {
      const auto page = parse_snapshot(read_file(files[i]));
      const auto s = page_stats(page, build_groups(page));
      slots[i] = PageRecord{files[i].filename().string(), s.tag_count, s.dom_depth, s.group_count};
    } catch (const std::exception&) {
    }
  });

  std::vector<PageRecord> records;
  std::size_t skipped = 0;
  for (auto& s : slots) {
    if (s)
      records.push_back(std::move(*s));
    else
      ++skipped;
  }
  return summarize(std::move(records), bins, skipped);
}

namespace {

json to_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}}; }

}  // namespace

json to_json(const CorpusStats& stats) {
  json bins = json::array();
  for (const auto& b : stats.bins)
    bins.push_back({{"bin", b.label},
                    {"count", b.count},
                    {"tag_count", to_json(b.tag_count)},
                    {"dom_depth", to_json(b.dom_depth)},
                    {"group_count", to_json(b.group_count)}});
  return {{"pages", stats.pages},
          {"skipped", stats.skipped},
          {"tag_count", to_json(stats.tag_count)},
          {"dom_depth", to_json(stats.dom_depth)},
          {"group_count", to_json(stats.group_count)},
          {"bins", std::move(bins)}};
}

std::string to_table(const CorpusStats& stats) {
  std::ostringstream os;
  auto ms = [](const MeanStd& m) {
    std::ostringstream cell;
    cell << std::fixed << std::setprecision(2) << m.mean << "±" << m.std;
    return cell.str();
  };
  os << std::left << std::setw(10) << "bin" << std::right << std::setw(8) << "count" << std::setw(20) << "tag_count"
     << std::setw(20) << "dom_depth" << std::setw(20) << "group_count" << '\n';
  for (const auto& b : stats.bins)
    os << std::left << std::setw(10) << b.label << std::right << std::setw(8) << b.count << std::setw(21)
       << ms(b.tag_count) << std::setw(21) << ms(b.dom_depth) << std::setw(21) << ms(b.group_count) << '\n';
  os << std::left << std::setw(10) << "all" << std::right << std::setw(8) << stats.pages << std::setw(21)
     << ms(stats.tag_count) << std::setw(21) << ms(stats.dom_depth) << std::setw(21) << ms(stats.group_count) << '\n';
  os << "skipped: " << stats.skipped << '\n';
  return os.str();
}

std::string drop_reason(double page_height, double style_score, const FilterOptions& options) {
  if (page_height > options.max_height) return "height";
  if (style_score > options.style_threshold) return "style";
  return {};
}

std::vector<FilterDecision> filter_corpus(const fs::path& in_dir, const fs::path& out_dir,
                                          const FilterOptions& options, unsigned workers) {
  const auto files = list_snapshots(in_dir);
  fs::create_directories(out_dir);
  std::vector<FilterDecision> decisions(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    auto& d = decisions[i];
    d.file = files[i].filename().string();
    std::string content;
    try {
      content = read_file(files[i]);
    } catch (const std::exception& e) {
      d.reason = "io";
      d.detail = e.what();
      return;
    }
    PageSnapshot page;
    try {
      page = parse_snapshot(content);
    } catch (const Error& e) {
      d.reason = "parse";
      d.detail = e.path() + ": " + e.what();
      return;
    }
    const double score = style_quality_score(page);
    d.reason = drop_reason(page.page_height, score, options);
    if (d.reason == "height") {
      std::ostringstream os;
      os << "page_height " << page.page_height << " > " << options.max_height;
      d.detail = os.str();
      return;
    }
    if (d.reason == "style") {
      std::ostringstream os;
      os << "style_quality_score " << score << " > " << options.style_threshold;
      d.detail = os.str();
      return;
    }
    std::error_code ec;
    fs::copy_file(files[i], out_dir / files[i].filename(), fs::copy_options::overwrite_existing, ec);
    if (ec) {
      d.reason = "io";
      d.detail = ec.message();
      return;
    }
    d.kept = true;
  });
  return decisions;
}

json to_json(const std::vector<FilterDecision>& decisions) {
  json kept = json::array();
  json dropped = json::array();
  for (const auto& d : decisions) {
    if (d.kept)
      kept.push_back(d.file);
    else
      dropped.push_back({{"file", d.file}, {"reason", d.reason}, {"detail", d.detail}});
  }
  return {{"kept", std::move(kept)}, {"dropped", std::move(dropped)}};
}

}  // namespace domscore
