#pragma once

// Reward assembly for RL rollouts: per-pair score reports, the weighted
// reward, group-wise advantage normalization and batch evaluation.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "domscore/association.hpp"
#include "domscore/layout_metrics.hpp"
#include "domscore/snapshot.hpp"
#include "domscore/style_metrics.hpp"
#include "json.hpp"

namespace domscore {

struct RewardWeights {
  double alpha = 0.6;  // layout (RDA)
  double beta = 0.2;   // group sizes (GDA)
  double gamma = 0.2;  // style (SDA)

  /// Throws WeightError on negative or non-finite weights, or when all are 0.
  void validate() const;

  bool operator==(const RewardWeights&) const = default;
};

/// Weighted mean of the three percentages, rescaled to [0, 1]. Weights are
/// normalized by their sum.
double combine_reward(double rda, double gda, double sda, const RewardWeights& weights);

inline constexpr double kAdvantageEpsilon = 1e-8;

/// (r - mean) / std with the population standard deviation. A group whose
/// std is at most kAdvantageEpsilon yields all zeros.
std::vector<double> advantages(std::span<const double> rewards);

struct ScoringOptions {
  RewardWeights weights;
  GroupOptions groups;
  StyleOptions style;
  Matcher matcher = associate;
};

struct ScoreReport {
  double rda = 0.0;
  double gda = 0.0;
  double sda = 0.0;
  double reward = 0.0;

  std::size_t candidate_elements = 0;
  std::size_t reference_elements = 0;
  std::size_t candidate_group_count = 0;
  std::size_t reference_group_count = 0;
  AssociationMap association;
  LayoutScores layout;
  StyleScores style;
};

/// Associates, groups both pages and computes RDA, GDA, SDA and the reward.
/// Throws EmptyReferenceError when the reference has no elements.
ScoreReport score_pair(const PageSnapshot& candidate, const PageSnapshot& reference,
                       const ScoringOptions& options = {});

/// Report as JSON. The summary numbers are always present; `verbose` adds
/// unmatched lists and per-pair breakdowns.
nlohmann::json to_json(const ScoreReport& report, bool verbose = false);

struct SlotError {
  std::string kind;
  std::string path;
  std::string message;
};

nlohmann::json to_json(const SlotError& error);

/// Raw snapshot documents; each slot is parsed independently so one
/// malformed rollout cannot abort the batch.
struct BatchPair {
  nlohmann::json candidate;
  nlohmann::json reference;
};

struct BatchSlot {
  std::optional<ScoreReport> report;
  std::optional<SlotError> error;

  /// Reward of the slot; 0 for failed slots.
  double reward() const { return report ? report->reward : 0.0; }
};

struct BatchResult {
  std::vector<BatchSlot> slots;  // input order
  std::vector<std::vector<double>> advantages;
};

/// Scores every pair on up to `workers` threads. With `group_size` set,
/// advantages are computed over consecutive groups of that many slots and
/// a GroupSizeError is thrown when the batch does not divide evenly.
BatchResult score_batch(std::span<const BatchPair> pairs, const ScoringOptions& options,
                        std::optional<std::size_t> group_size, unsigned workers);

nlohmann::json to_json(const BatchResult& result, bool verbose = false);

}  // namespace domscore
