#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discoreward/authorship_model.hpp"
#include "discoreward/discourse_tree.hpp"
#include "discoreward/error.hpp"
#include "discoreward/motif_engine.hpp"
#include "discoreward/surface_evaluator.hpp"

namespace discoreward {

// Shortfall penalty for the episodic reward. `alpha` is the penalty factor,
// unrelated to the policy learning rate in rl::PpoConfig.
struct LengthPenaltyConfig {
  double alpha = 1.0;               // in [0, 1]
  std::size_t desired_length = 1;   // tokens, >= 1

  void validate() const;
};

// S_o * (1 - alpha * max(0, (L_d - L_r) / L_d)). Throws kNegativeScore for
// S_o < 0 and kInvalidArgument for an invalid config.
double apply_length_penalty(double score, std::size_t response_length,
                            const LengthPenaltyConfig& config);

enum class RewardMode {
  kSurface,
  kGraph,
  // Extension: blend_weight * surface/5 + (1 - blend_weight) * p_human.
  kBlended,
};

std::string_view to_string(RewardMode mode) noexcept;
// Accepts "surface", "graph", "blended". Throws kInvalidArgument.
RewardMode parse_reward_mode(std::string_view name);

// Which token count divides the dense reward.
enum class DenseNormalizer {
  kSequenceLength,  // 1 / (2 n), n = generated sequence length (default)
  kMotifTokens,     // 1 / (2 k), k = number of rewarded tokens
};

struct RewardTensor {
  std::vector<double> rewards;  // length n
  std::vector<std::size_t> dense_indices;  // sorted, unique
  double dense_value = 0.0;  // reward placed at each dense index
  double episodic = 0.0;     // added at episodic_index() on top of any dense reward
  RewardMode source = RewardMode::kGraph;

  std::size_t size() const noexcept { return rewards.size(); }
  std::size_t episodic_index() const noexcept { return rewards.size() - 1; }
  std::size_t dense_count() const noexcept { return dense_indices.size(); }
  // k / (2 n) under the default normalizer.
  double dense_total() const noexcept;
};

// rewards[i] = dense value for i in motif_tokens, else 0; then
// rewards[n - 1] += episodic. Duplicate indices count once. Throws
// kIndexOutOfRange for an index >= n and kInvalidArgument for n == 0.
RewardTensor assemble(double episodic, std::span<const std::size_t> motif_tokens, std::size_t n,
                      DenseNormalizer normalizer = DenseNormalizer::kSequenceLength);

struct RewardRequest {
  std::string doc_id;
  std::string text;
  std::optional<std::vector<CharRange>> token_offsets;
  std::optional<DiscourseDocument> document;
  std::size_t desired_length = 1;
  RewardMode mode = RewardMode::kGraph;
  std::optional<std::string> instruction;
};

// Shared, read-only collaborators. Pointers may be null when the mode in use
// does not need them.
struct RewardDependencies {
  const ClassifierModel* classifier = nullptr;
  const DistinctiveMotifSet* motifs = nullptr;
  EvaluatorClient* evaluator = nullptr;
  // Supplies a discourse parse when the request carries none.
  std::function<DiscourseDocument(const RewardRequest&)> parse_provider;
};

struct RewardOptions {
  double alpha = 1.0;
  DenseNormalizer normalizer = DenseNormalizer::kSequenceLength;
  double blend_weight = 0.5;
};

struct RewardDiagnostics {
  std::optional<SurfaceScore> surface;
  std::optional<Prediction> graph;
  double raw_episodic = 0.0;  // before the length penalty
  double penalty_factor = 1.0;
  std::size_t num_tokens = 0;
  std::size_t segment_count = 0;
  std::size_t motif_token_count = 0;
  double motif_coverage = 0.0;  // k / n
};

struct RewardResult {
  RewardTensor tensor;
  RewardDiagnostics diagnostics;
};

// Throws kMissingDependency when the mode's collaborators or parse are
// missing, kInvalidArgument for inconsistent requests, and propagates
// sub-module errors.
RewardResult compute_rewards(const RewardRequest& request, const RewardDependencies& deps,
                             const RewardOptions& options = {});

struct BatchItem {
  std::optional<RewardResult> result;
  std::optional<ErrorCode> error_code;
  std::string error_message;
};

// Scores each request independently; a failure is recorded on its item and
// never affects the others. Runs up to `workers` requests concurrently.
std::vector<BatchItem> compute_rewards_batch(std::span<const RewardRequest> requests,
                                             const RewardDependencies& deps,
                                             const RewardOptions& options = {},
                                             std::size_t workers = 1);

}  // namespace discoreward
