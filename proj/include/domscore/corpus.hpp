#pragma once

// Corpus tooling behind the CLI: Group-Count binning, per-corpus
// statistics and the cleaning filter (height cap plus style quality).

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace domscore {

/// Half-open Group-Count bins [edges[i], edges[i+1]); the last bin is
/// unbounded above.
class BinSpec {
 public:
  /// Throws std::invalid_argument unless edges are strictly ascending and
  /// start at 0.
  explicit BinSpec(std::vector<double> edges);

  /// 0-50, 50-100, 100-150, 150-200, 200-400, 400+
  static BinSpec fine();
  /// 0-200, 200-400, 400+
  static BinSpec coarse();

  std::size_t size() const { return edges_.size(); }
  std::size_t bin_of(double value) const;
  std::string label(std::size_t bin) const;
  const std::vector<double>& edges() const { return edges_; }

 private:
  std::vector<double> edges_;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

MeanStd mean_std(const std::vector<double>& values);

struct PageRecord {
  std::string file;
  std::size_t tag_count = 0;
  std::size_t dom_depth = 0;
  std::size_t group_count = 0;
};

struct BinSummary {
  std::string label;
  std::size_t count = 0;
  MeanStd tag_count;
  MeanStd dom_depth;
  MeanStd group_count;
};

struct CorpusStats {
  std::size_t pages = 0;
  std::size_t skipped = 0;
  MeanStd tag_count;
  MeanStd dom_depth;
  MeanStd group_count;
  std::vector<BinSummary> bins;
  std::vector<PageRecord> records;  // sorted by file name
};

/// Snapshot files (*.json) directly inside `dir`, sorted by file name.
std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir);

CorpusStats summarize(std::vector<PageRecord> records, const BinSpec& bins, std::size_t skipped = 0);

/// Parses every snapshot in `dir`; unparseable files are counted as skipped.
CorpusStats corpus_stats(const std::filesystem::path& dir, const BinSpec& bins, unsigned workers);

nlohmann::json to_json(const CorpusStats& stats);
std::string to_table(const CorpusStats& stats);

inline constexpr double kMaxPageHeight = 5000.0;
inline constexpr double kStyleQualityThreshold = 0.9;

struct FilterOptions {
  double max_height = kMaxPageHeight;               // keep page_height <= max_height
  double style_threshold = kStyleQualityThreshold;  // keep score <= threshold
};

struct FilterDecision {
  std::string file;
  bool kept = false;
  std::string reason;  // "height", "style", "parse" or "io" when dropped
  std::string detail;
};

/// Why a parsed page would be dropped, or empty when it is kept.
std::string drop_reason(double page_height, double style_score, const FilterOptions& options);

/// Copies kept snapshots from `in_dir` to `out_dir` (created if missing).
std::vector<FilterDecision> filter_corpus(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                                          const FilterOptions& options, unsigned workers);

nlohmann::json to_json(const std::vector<FilterDecision>& decisions);

}  // namespace domscore
