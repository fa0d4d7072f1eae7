#include "discoreward/reward_engine.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "discoreward/segmenter.hpp"

namespace discoreward {

void LengthPenaltyConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "length penalty alpha must be in [0, 1]");
  }
  if (desired_length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "desired length must be at least 1 token");
  }
}

double apply_length_penalty(double score, std::size_t response_length,
                            const LengthPenaltyConfig& config) {
  config.validate();
  if (!(score >= 0.0)) {
    throw Error(ErrorCode::kNegativeScore, "episodic score must be non-negative");
  }
  const double desired = static_cast<double>(config.desired_length);
  const double shortfall =
      std::max(0.0, (desired - static_cast<double>(response_length)) / desired);
  return score * (1.0 - config.alpha * shortfall);
}

std::string_view to_string(RewardMode mode) noexcept {
  switch (mode) {
    case RewardMode::kSurface: return "surface";
    case RewardMode::kGraph: return "graph";
    case RewardMode::kBlended: return "blended";
  }
  return "graph";
}

RewardMode parse_reward_mode(std::string_view name) {
  if (name == "surface") return RewardMode::kSurface;
  if (name == "graph") return RewardMode::kGraph;
  if (name == "blended") return RewardMode::kBlended;
  throw Error(ErrorCode::kInvalidArgument, "unknown reward mode '" + std::string(name) + "'");
}

double RewardTensor::dense_total() const noexcept {
  return static_cast<double>(dense_indices.size()) * dense_value;
}

RewardTensor assemble(double episodic, std::span<const std::size_t> motif_tokens, std::size_t n,
                      DenseNormalizer normalizer) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "reward tensor needs at least one token");
  RewardTensor tensor;
  tensor.dense_indices.assign(motif_tokens.begin(), motif_tokens.end());
  std::sort(tensor.dense_indices.begin(), tensor.dense_indices.end());
  tensor.dense_indices.erase(std::unique(tensor.dense_indices.begin(), tensor.dense_indices.end()),
                             tensor.dense_indices.end());
  if (!tensor.dense_indices.empty() && tensor.dense_indices.back() >= n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "motif token " + std::to_string(tensor.dense_indices.back()) +
                    " is outside a sequence of " + std::to_string(n) + " tokens");
  }

  const std::size_t denominator =
      normalizer == DenseNormalizer::kSequenceLength ? n : tensor.dense_indices.size();
  tensor.dense_value = denominator == 0 ? 0.0 : 1.0 / (2.0 * static_cast<double>(denominator));
  tensor.rewards.assign(n, 0.0);
  for (std::size_t i : tensor.dense_indices) tensor.rewards[i] = tensor.dense_value;
  tensor.rewards[n - 1] += episodic;
  tensor.episodic = episodic;
  return tensor;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kMissingDependency, what);
}

}  // namespace

RewardResult compute_rewards(const RewardRequest& request, const RewardDependencies& deps,
                             const RewardOptions& options) {
  const bool needs_surface = request.mode != RewardMode::kGraph;
  const bool needs_graph = request.mode != RewardMode::kSurface;
  if (needs_surface) {
    if (!request.instruction) {
      throw Error(ErrorCode::kInvalidArgument, "surface scoring needs a writing instruction");
    }
    require(deps.evaluator != nullptr, "surface scoring needs an evaluator client");
  }
  if (needs_graph) {
    require(deps.classifier != nullptr, "graph scoring needs a classifier model");
    require(deps.motifs != nullptr, "graph scoring needs a distinctive motif set");
    require(request.document.has_value() || static_cast<bool>(deps.parse_provider),
            "graph scoring needs a discourse parse or a parse provider");
  }
  if (!(options.blend_weight >= 0.0 && options.blend_weight <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "blend weight must be in [0, 1]");
  }

  std::optional<DiscourseDocument> provided;
  if (!request.document && deps.parse_provider && (needs_graph || deps.motifs)) {
    provided = deps.parse_provider(request);
  }
  const DiscourseDocument* doc = request.document ? &*request.document : provided ? &*provided : nullptr;

  const std::string& text = request.text.empty() && doc ? doc->source_text : request.text;
  if (doc && doc->source_text != text) {
    throw Error(ErrorCode::kInvalidArgument,
                "request text differs from the text of its discourse parse");
  }

  TokenSequence tokens;
  if (request.token_offsets) {
    tokens = TokenSequence::from_offsets(text, *request.token_offsets);
  } else if (doc) {
    tokens = doc->tokens;
  } else {
    tokens = tokenize(text);
  }
  if (tokens.empty()) throw Error(ErrorCode::kEmptyDocument, "response has no tokens");

  RewardResult result;
  RewardDiagnostics& diag = result.diagnostics;
  diag.num_tokens = tokens.size();
  diag.segment_count = doc ? doc->segments.size() : 0;

  double surface = 0.0;
  double graph = 0.0;
  if (needs_surface) {
    diag.surface = deps.evaluator->evaluate(*request.instruction, text);
    surface = diag.surface->value;
  }
  if (needs_graph) {
    const auto counts = segment_motif_counts(*doc, deps.motifs->k());
    diag.graph = predict(*deps.classifier, aggregate(counts, *deps.motifs));
    graph = diag.graph->p_human;
  }
  switch (request.mode) {
    case RewardMode::kSurface: diag.raw_episodic = surface; break;
    case RewardMode::kGraph: diag.raw_episodic = graph; break;
    case RewardMode::kBlended:
      diag.raw_episodic =
          options.blend_weight * (surface / 5.0) + (1.0 - options.blend_weight) * graph;
      break;
  }

  const LengthPenaltyConfig penalty{options.alpha, request.desired_length};
  const double episodic = apply_length_penalty(diag.raw_episodic, tokens.size(), penalty);
  diag.penalty_factor = apply_length_penalty(1.0, tokens.size(), penalty);

  std::vector<std::size_t> motif_tokens;
  if (doc && deps.motifs) {
    const EduTokenMap map = align_tokens(tokens, doc->all_edus());
    motif_tokens = motif_token_indices(*doc, map, *deps.motifs, deps.motifs->k());
  }
  result.tensor = assemble(episodic, motif_tokens, tokens.size(), options.normalizer);
  result.tensor.source = request.mode;
  diag.motif_token_count = result.tensor.dense_count();
  diag.motif_coverage =
      static_cast<double>(diag.motif_token_count) / static_cast<double>(tokens.size());
  return result;
}

std::vector<BatchItem> compute_rewards_batch(std::span<const RewardRequest> requests,
                                             const RewardDependencies& deps,
                                             const RewardOptions& options, std::size_t workers) {
  std::vector<BatchItem> items(requests.size());
  auto score_one = [&](std::size_t i) {
    try {
      items[i].result = compute_rewards(requests[i], deps, options);
    } catch (const Error& e) {
      items[i].error_code = e.code();
      items[i].error_message = e.what();
    } catch (const std::exception& e) {
      items[i].error_code = ErrorCode::kInvalidArgument;
      items[i].error_message = e.what();
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, requests.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < requests.size(); ++i) score_one(i);
    return items;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < requests.size(); i = next++) score_one(i);
    });
  }
  pool.clear();
  return items;
}

}  // namespace discoreward
