#include "domscore/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "domscore/parallel.hpp"

namespace domscore {

using nlohmann::json;

void RewardWeights::validate() const {
  for (double w : {alpha, beta, gamma})
    if (!std::isfinite(w) || w < 0.0) throw WeightError("reward weights must be finite and non-negative");
  if (alpha + beta + gamma <= 0.0) throw WeightError("at least one reward weight must be positive");
}

double combine_reward(double rda, double gda, double sda, const RewardWeights& w) {
  w.validate();
  // Same evaluation order in numerator and denominator: saturated inputs give exactly 1.
  const double weighted = w.alpha * rda + w.beta * gda + w.gamma * sda;
  const double full = w.alpha * 100.0 + w.beta * 100.0 + w.gamma * 100.0;
  return std::clamp(weighted / full, 0.0, 1.0);
}

std::vector<double> advantages(std::span<const double> rewards) {
  const auto n = static_cast<double>(rewards.size());
  std::vector<double> out(rewards.size(), 0.0);
  if (rewards.empty()) return out;

  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  std::vector<double> centered(rewards.size());
  std::transform(rewards.begin(), rewards.end(), centered.begin(), [&](double r) { return r - mean; });
  // Second pass removes the rounding residue of the first mean.
  const double residue = std::accumulate(centered.begin(), centered.end(), 0.0) / n;
  for (double& c : centered) c -= residue;

  const double var = std::transform_reduce(centered.begin(), centered.end(), 0.0, std::plus<>(),
                                           [](double c) { return c * c; }) /
                     n;
  const double sd = std::sqrt(var);
  if (!(sd > kAdvantageEpsilon)) return out;
  std::transform(centered.begin(), centered.end(), out.begin(), [&](double c) { return c / sd; });
  return out;
}

ScoreReport score_pair(const PageSnapshot& candidate, const PageSnapshot& reference, const ScoringOptions& options) {
  options.weights.validate();
  if (reference.elements.empty()) throw EmptyReferenceError();

  ScoreReport report;
  report.candidate_elements = candidate.elements.size();
  report.reference_elements = reference.elements.size();

  const Matcher& matcher = options.matcher ? options.matcher : Matcher(associate);
  report.association = matcher(candidate, reference);

  const auto groups_cand = build_groups(candidate, options.groups);
  const auto groups_ref = build_groups(reference, options.groups);
  report.candidate_group_count = groups_cand.group_count;
  report.reference_group_count = groups_ref.group_count;

  report.layout = layout_scores(report.association, groups_cand, groups_ref, candidate, reference);
  report.style = style_scores(report.association, groups_ref, candidate, reference, options.style);
  report.rda = report.layout.rda;
  report.gda = report.layout.gda;
  report.sda = report.style.sda;
  report.reward = combine_reward(report.rda, report.gda, report.sda, options.weights);
  return report;
}

json to_json(const ScoreReport& r, bool verbose) {
  std::size_t by_text = 0;
  for (const auto& p : r.association.pairs) by_text += p.method == MatchMethod::text;

  json diagnostics = {
      {"candidate_elements", r.candidate_elements},
      {"reference_elements", r.reference_elements},
      {"candidate_group_count", r.candidate_group_count},
      {"reference_group_count", r.reference_group_count},
      {"matched", r.association.pairs.size()},
      {"matched_by_text", by_text},
      {"matched_by_geometry", r.association.pairs.size() - by_text},
      {"unmatched_reference_count", r.association.unmatched_reference.size()},
      {"unmatched_candidate_count", r.association.unmatched_candidate.size()},
  };

  if (verbose) {
    diagnostics["unmatched_reference"] = r.association.unmatched_reference;
    diagnostics["unmatched_candidate"] = r.association.unmatched_candidate;
    json pairs = json::array();
    for (std::size_t i = 0; i < r.association.pairs.size(); ++i) {
      const auto& p = r.association.pairs[i];
      const auto& l = r.layout.per_pair.at(i);
      const auto& s = r.style.per_pair.at(i);
      pairs.push_back({{"candidate", p.candidate},
                       {"reference", p.reference},
                       {"method", to_string(p.method)},
                       {"text_sim", p.text_sim},
                       {"geo_dist", p.geo_dist},
                       {"pair_score", l.pair_score},
                       {"group_match", l.group_match},
                       {"color_sim", s.color_sim},
                       {"bg_sim", s.bg_sim},
                       {"font_sim", s.font_sim},
                       {"radius_sim", s.radius_sim},
                       {"element_sim", s.element_sim}});
    }
    diagnostics["pairs"] = std::move(pairs);
  }

  return {{"rda", r.rda}, {"gda", r.gda}, {"sda", r.sda}, {"reward", r.reward}, {"diagnostics", std::move(diagnostics)}};
}

json to_json(const SlotError& e) { return {{"kind", e.kind}, {"path", e.path}, {"message", e.message}}; }

BatchResult score_batch(std::span<const BatchPair> pairs, const ScoringOptions& options,
                        std::optional<std::size_t> group_size, unsigned workers) {
  options.weights.validate();
  if (group_size) {
    if (*group_size == 0) throw GroupSizeError("group_size must be >= 1");
    if (pairs.size() % *group_size != 0)
      throw GroupSizeError("batch of " + std::to_string(pairs.size()) + " pairs is not divisible by group_size " +
                           std::to_string(*group_size));
  }

  BatchResult result;
  result.slots.resize(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t i) {
    auto& slot = result.slots[i];
    auto prefix = [i](const char* side, const std::string& path) {
      return "/pairs/" + std::to_string(i) + "/" + side + path;
    };
    const char* side = "candidate";
    try {
      auto candidate = parse_snapshot(pairs[i].candidate);
      side = "reference";
      auto reference = parse_snapshot(pairs[i].reference);
      side = "";
      slot.report = score_pair(candidate, reference, options);
    } catch (const Error& e) {
      std::string path = *side ? prefix(side, e.path()) : e.path();
      slot.error = SlotError{std::string(to_string(e.kind())), std::move(path), e.what()};
    } catch (const std::exception& e) {
      slot.error = SlotError{"InternalError", "", e.what()};
    }
  });

  if (group_size) {
    for (std::size_t start = 0; start < pairs.size(); start += *group_size) {
      std::vector<double> rewards;
      for (std::size_t i = start; i < start + *group_size; ++i) rewards.push_back(result.slots[i].reward());
      result.advantages.push_back(advantages(rewards));
    }
  }
  return result;
}

json to_json(const BatchResult& result, bool verbose) {
  json reports = json::array();
  for (const auto& slot : result.slots) {
    if (slot.report) {
      reports.push_back(to_json(*slot.report, verbose));
    } else {
      reports.push_back({{"reward", 0.0}, {"error", slot.error ? to_json(*slot.error) : json(nullptr)}});
    }
  }
  json out = {{"reports", std::move(reports)}};
  if (!result.advantages.empty()) out["advantages"] = result.advantages;
  return out;
}

}  // namespace domscore
