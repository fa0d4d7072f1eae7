#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "discoreward/motif_engine.hpp"

namespace discoreward {

struct TrainingConfig {
  int epochs = 1000;
  double learning_rate = 1.0;
  double l2 = 1e-3;
  std::uint64_t seed = 42;
  double init_scale = 0.01;  // initial weights ~ U(-init_scale, init_scale)

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

struct LabeledExample {
  MotifVector motifs;
  std::vector<double> dense;  // optional external features (e.g. a text embedding)
  bool human = false;
};

// Linear human-vs-machine model over [motif vector | OOV | dense features].
struct ClassifierModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::string vocab_fingerprint;
  std::size_t vocabulary_size = 0;
  std::size_t dense_width = 0;
  TrainingConfig training;

  std::size_t width() const noexcept { return vocabulary_size + 1 + dense_width; }

  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;
};

struct Prediction {
  double logit = 0.0;
  double p_human = 0.5;
};

struct TrainingReport {
  std::vector<double> loss;  // objective before each epoch, then after the last
};

// Learning rate at or below which full-batch descent on the regularized
// logistic objective cannot increase the loss: 1 / (max ||x||^2 / 4 + l2),
// where x includes the bias input.
double max_stable_learning_rate(std::span<const LabeledExample> examples, double l2);

// Full-batch gradient descent on mean logistic loss + (l2/2)||w||^2 (bias is
// not regularized). Deterministic for a fixed seed. Throws
// kSingleClassCorpus, kWidthMismatch or kFingerprintMismatch.
ClassifierModel train(std::span<const LabeledExample> examples, const TrainingConfig& config = {},
                      TrainingReport* report = nullptr);

double sigmoid(double logit) noexcept;

// Throws kFingerprintMismatch when the vector was built over another
// vocabulary and kWidthMismatch when the dense width differs.
Prediction predict(const ClassifierModel& model, const MotifVector& motifs,
                   std::span<const double> dense = {});

std::string serialize_model(const ClassifierModel& model);
ClassifierModel parse_model(std::string_view text);
void save_model(const ClassifierModel& model, const std::string& path);
ClassifierModel load_model(const std::string& path);
// Also checks the model against the motif set it will be used with.
ClassifierModel load_model(const std::string& path, const DistinctiveMotifSet& motifs);

}  // namespace discoreward
