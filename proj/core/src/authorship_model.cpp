#include "discoreward/authorship_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "discoreward/error.hpp"
#include "versioning.hpp"

namespace discoreward {
namespace {

constexpr const char* kModelFormat = "discoreward.classifier";

// Feature vector as seen by the model: motif values (incl. OOV) then dense.
template <typename F>
void for_each_feature(const LabeledExample& ex, F&& f) {
  std::size_t i = 0;
  for (double v : ex.motifs.values) f(i++, v);
  for (double v : ex.dense) f(i++, v);
}

double log1p_exp(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double objective(std::span<const LabeledExample> examples, const std::vector<double>& w,
                 double b, double l2) {
  double loss = 0.0;
  for (const auto& ex : examples) {
    double z = b;
    for_each_feature(ex, [&](std::size_t i, double v) { z += w[i] * v; });
    loss += log1p_exp(ex.human ? -z : z);
  }
  loss /= static_cast<double>(examples.size());
  double norm = 0.0;
  for (double x : w) norm += x * x;
  return loss + 0.5 * l2 * norm;
}

// Uniform in [-scale, scale] from the raw mt19937_64 stream so the draw is
// identical across standard library implementations.
double uniform_symmetric(std::mt19937_64& rng, double scale) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * scale;
}

void check_examples(std::span<const LabeledExample> examples) {
  if (examples.empty()) throw Error(ErrorCode::kSingleClassCorpus, "no training examples");
  const bool has_human = std::any_of(examples.begin(), examples.end(),
                                     [](const LabeledExample& e) { return e.human; });
  const bool has_machine = std::any_of(examples.begin(), examples.end(),
                                       [](const LabeledExample& e) { return !e.human; });
  if (!has_human || !has_machine) {
    throw Error(ErrorCode::kSingleClassCorpus, "training needs both human and machine examples");
  }
  const auto& first = examples.front();
  if (first.motifs.values.empty()) {
    throw Error(ErrorCode::kWidthMismatch, "motif vector has no OOV bucket");
  }
  for (const auto& ex : examples) {
    if (ex.motifs.values.size() != first.motifs.values.size() ||
        ex.dense.size() != first.dense.size()) {
      throw Error(ErrorCode::kWidthMismatch, "examples have inconsistent feature widths");
    }
    if (ex.motifs.vocab_fingerprint != first.motifs.vocab_fingerprint) {
      throw Error(ErrorCode::kFingerprintMismatch,
                  "examples were built over different motif vocabularies");
    }
  }
}

}  // namespace

double max_stable_learning_rate(std::span<const LabeledExample> examples, double l2) {
  double max_norm = 0.0;
  for (const auto& ex : examples) {
    double norm = 1.0;
    for_each_feature(ex, [&](std::size_t, double v) { norm += v * v; });
    max_norm = std::max(max_norm, norm);
  }
  return 1.0 / (0.25 * max_norm + l2);
}

ClassifierModel train(std::span<const LabeledExample> examples, const TrainingConfig& config,
                      TrainingReport* report) {
  check_examples(examples);
  if (config.epochs < 0 || !(config.learning_rate > 0) || config.l2 < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid training hyperparameters");
  }

  ClassifierModel model;
  model.vocab_fingerprint = examples.front().motifs.vocab_fingerprint;
  model.vocabulary_size = examples.front().motifs.values.size() - 1;
  model.dense_width = examples.front().dense.size();
  model.training = config;

  std::mt19937_64 rng(config.seed);
  model.weights.resize(model.width());
  for (double& w : model.weights) w = uniform_symmetric(rng, config.init_scale);

  const double n = static_cast<double>(examples.size());
  std::vector<double> grad(model.width());
  if (report) report->loss.clear();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (report) report->loss.push_back(objective(examples, model.weights, model.bias, config.l2));
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (const auto& ex : examples) {
      double z = model.bias;
      for_each_feature(ex, [&](std::size_t i, double v) { z += model.weights[i] * v; });
      const double residual = sigmoid(z) - (ex.human ? 1.0 : 0.0);
      for_each_feature(ex, [&](std::size_t i, double v) { grad[i] += residual * v; });
      grad_bias += residual;
    }
    for (std::size_t i = 0; i < grad.size(); ++i) {
      model.weights[i] -= config.learning_rate * (grad[i] / n + config.l2 * model.weights[i]);
    }
    model.bias -= config.learning_rate * grad_bias / n;
  }
  if (report) report->loss.push_back(objective(examples, model.weights, model.bias, config.l2));
  return model;
}

double sigmoid(double logit) noexcept {
  static const double kMax = std::nextafter(1.0, 0.0);
  static const double kMin = std::numeric_limits<double>::denorm_min();
  double p;
  if (logit >= 0) {
    p = 1.0 / (1.0 + std::exp(-logit));
  } else {
    const double e = std::exp(logit);
    p = e / (1.0 + e);
  }
  return std::clamp(p, kMin, kMax);
}

Prediction predict(const ClassifierModel& model, const MotifVector& motifs,
                   std::span<const double> dense) {
  if (motifs.vocab_fingerprint != model.vocab_fingerprint) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "motif vector vocabulary " + motifs.vocab_fingerprint +
                    " does not match model vocabulary " + model.vocab_fingerprint);
  }
  if (motifs.values.size() != model.vocabulary_size + 1 || dense.size() != model.dense_width) {
    throw Error(ErrorCode::kWidthMismatch, "feature width does not match the model");
  }
  double z = model.bias;
  std::size_t i = 0;
  for (double v : motifs.values) z += model.weights[i++] * v;
  for (double v : dense) z += model.weights[i++] * v;
  return {z, sigmoid(z)};
}

std::string serialize_model(const ClassifierModel& model) {
  nlohmann::ordered_json out;
  out["format"] = kModelFormat;
  out["version"] = detail::kFileFormatVersion;
  out["vocab_fingerprint"] = model.vocab_fingerprint;
  out["vocabulary_size"] = model.vocabulary_size;
  out["dense_width"] = model.dense_width;
  out["bias"] = model.bias;
  out["weights"] = model.weights;
  out["training"] = {{"epochs", model.training.epochs},
                     {"learning_rate", model.training.learning_rate},
                     {"l2", model.training.l2},
                     {"seed", model.training.seed},
                     {"init_scale", model.training.init_scale}};
  return out.dump(2) + "\n";
}

ClassifierModel parse_model(std::string_view text) {
  const auto root = detail::parse_versioned(text, kModelFormat);
  ClassifierModel model;
  try {
    model.vocab_fingerprint = root.at("vocab_fingerprint").get<std::string>();
    model.vocabulary_size = root.at("vocabulary_size").get<std::size_t>();
    model.dense_width = root.at("dense_width").get<std::size_t>();
    model.bias = root.at("bias").get<double>();
    model.weights = root.at("weights").get<std::vector<double>>();
    const auto& t = root.at("training");
    model.training.epochs = t.at("epochs").get<int>();
    model.training.learning_rate = t.at("learning_rate").get<double>();
    model.training.l2 = t.at("l2").get<double>();
    model.training.seed = t.at("seed").get<std::uint64_t>();
    model.training.init_scale = t.at("init_scale").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptFile, std::string("model file: ") + e.what());
  }
  if (model.weights.size() != model.width()) {
    throw Error(ErrorCode::kCorruptFile, "model weight count does not match its declared width");
  }
  if (model.vocab_fingerprint.size() != 16) {
    throw Error(ErrorCode::kCorruptFile, "model fingerprint is malformed");
  }
  return model;
}

void save_model(const ClassifierModel& model, const std::string& path) {
  detail::write_file(path, serialize_model(model));
}

ClassifierModel load_model(const std::string& path) {
  return parse_model(detail::read_file(path));
}

ClassifierModel load_model(const std::string& path, const DistinctiveMotifSet& motifs) {
  ClassifierModel model = load_model(path);
  if (model.vocab_fingerprint != motifs.fingerprint() || model.vocabulary_size != motifs.size()) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "model " + path + " was trained on a different motif vocabulary");
  }
  return model;
}

}  // namespace discoreward
