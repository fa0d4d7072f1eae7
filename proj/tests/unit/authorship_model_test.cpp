#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "discoreward/authorship_model.hpp"
#include "discoreward/error.hpp"
#include "support/fixtures.hpp"

namespace discoreward {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("discoreward_" + name + "_" + std::to_string(::getpid()));
}

MotifVector vec(const DistinctiveMotifSet& vocab, std::vector<double> values) {
  return {std::move(values), vocab.fingerprint()};
}

double accuracy(const ClassifierModel& model, const std::vector<LabeledExample>& examples) {
  int correct = 0;
  for (const auto& e : examples) {
    correct += (predict(model, e.motifs, e.dense).p_human > 0.5) == e.human;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

// Independent one-feature logistic fit (Newton's method) on the share of A.
struct OneFeatureFit {
  double w = 0.0;
  double b = 0.0;
};

double one_feature_loss(const std::vector<LabeledExample>& examples, double l2, double w,
                        double b) {
  double loss = 0.5 * l2 * w * w;
  for (const auto& e : examples) {
    const double z = w * e.motifs.values[0] + b;
    const double y = e.human ? 1.0 : 0.0;
    loss += (std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y * z) /
            static_cast<double>(examples.size());
  }
  return loss;
}

OneFeatureFit newton_fit(const std::vector<LabeledExample>& examples, double l2) {
  OneFeatureFit f;
  const double n = static_cast<double>(examples.size());
  for (int it = 0; it < 200; ++it) {
    double gw = l2 * f.w;
    double gb = 0.0;
    double hww = l2;
    double hwb = 0.0;
    double hbb = 0.0;
    for (const auto& e : examples) {
      const double x = e.motifs.values[0];
      const double p = 1.0 / (1.0 + std::exp(-(f.w * x + f.b)));
      const double r = p - (e.human ? 1.0 : 0.0);
      const double s = p * (1.0 - p);
      gw += r * x / n;
      gb += r / n;
      hww += s * x * x / n;
      hwb += s * x / n;
      hbb += s / n;
    }
    const double det = hww * hbb - hwb * hwb;
    const double dw = (hbb * gw - hwb * gb) / det;
    const double db = (hww * gb - hwb * gw) / det;
    const double current = one_feature_loss(examples, l2, f.w, f.b);
    double step = 1.0;
    while (step > 1e-12 &&
           one_feature_loss(examples, l2, f.w - step * dw, f.b - step * db) > current) {
      step /= 2;
    }
    f.w -= step * dw;
    f.b -= step * db;
  }
  return f;
}

TEST(SigmoidTest, ReferenceValues) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(2.0), 0.8807970779778823, 1e-15);
  EXPECT_NEAR(sigmoid(-2.0), 1.0 - 0.8807970779778823, 1e-15);
  EXPECT_GT(sigmoid(-800.0), 0.0);
  EXPECT_LT(sigmoid(800.0), 1.0);
  EXPECT_TRUE(std::isfinite(sigmoid(-1e308)));
}

TEST(PredictTest, ZeroModelIsHalf) {
  const auto vocab = testing::make_vocab({"A", "B"}, {});
  ClassifierModel model;
  model.vocabulary_size = 2;
  model.weights.assign(3, 0.0);
  model.vocab_fingerprint = vocab.fingerprint();
  const auto p = predict(model, vec(vocab, {0.3, 0.7, 0.0}));
  EXPECT_EQ(p.logit, 0.0);
  EXPECT_EQ(p.p_human, 0.5);
}

TEST(PredictTest, SingleWeight) {
  const auto vocab = testing::make_vocab({}, {});
  ClassifierModel model;
  model.vocabulary_size = 0;
  model.weights = {2.0};
  model.vocab_fingerprint = vocab.fingerprint();
  const auto p = predict(model, vec(vocab, {1.0}));
  EXPECT_EQ(p.logit, 2.0);
  EXPECT_NEAR(p.p_human, 0.8808, 5e-5);
}

TEST(PredictTest, DenseFeaturesAndMismatches) {
  const auto vocab = testing::make_vocab({"A"}, {});
  ClassifierModel model;
  model.vocabulary_size = 1;
  model.dense_width = 2;
  model.weights = {1.0, 0.0, 0.5, -1.0};
  model.bias = 0.25;
  model.vocab_fingerprint = vocab.fingerprint();
  const std::vector<double> dense = {2.0, 1.0};
  EXPECT_DOUBLE_EQ(predict(model, vec(vocab, {1.0, 0.0}), dense).logit, 1.0 + 1.0 - 1.0 + 0.25);
  EXPECT_EQ(code_of([&] { (void)predict(model, vec(vocab, {1.0, 0.0})); }),
            ErrorCode::kWidthMismatch);
  const auto other = testing::make_vocab({"B"}, {});
  EXPECT_EQ(code_of([&] { (void)predict(model, vec(other, {1.0, 0.0}), dense); }),
            ErrorCode::kFingerprintMismatch);
}

TEST(TrainTest, SeparablePair) {
  const auto vocab = testing::make_vocab({"A", "B"}, {});
  const std::vector<LabeledExample> examples = {{vec(vocab, {1.0, 0.0, 0.0}), {}, true},
                                                {vec(vocab, {0.0, 1.0, 0.0}), {}, false}};
  const auto model = train(examples);
  EXPECT_EQ(accuracy(model, examples), 1.0);
  EXPECT_EQ(model.training.epochs, 1000);
  EXPECT_EQ(model.vocab_fingerprint, vocab.fingerprint());
}

TEST(TrainTest, SyntheticCorpusMatchesOneFeatureFit) {
  const auto vocab = testing::make_vocab({"A", "B"}, {"A"});
  const auto examples = testing::synthetic_authorship_corpus(vocab, 1);
  const auto model = train(examples);
  const double acc = accuracy(model, examples);
  EXPECT_GE(acc, 0.95);

  const auto fit = newton_fit(examples, 1e-3);
  int oracle_correct = 0;
  int agree = 0;
  for (const auto& e : examples) {
    const bool oracle_human = fit.w * e.motifs.values[0] + fit.b > 0.0;
    oracle_correct += oracle_human == e.human;
    agree += oracle_human == (predict(model, e.motifs).p_human > 0.5);
  }
  EXPECT_GE(oracle_correct / 200.0, 0.95);
  EXPECT_GE(agree / 200.0, 0.95);
  // Both fits agree that A indicates human authorship.
  EXPECT_GT(fit.w, 0.0);
  EXPECT_GT(model.weights[0], 0.0);
}

TEST(TrainTest, SeedDeterministic) {
  const auto vocab = testing::make_vocab({"A", "B"}, {"A"});
  const auto examples = testing::synthetic_authorship_corpus(vocab, 2);
  EXPECT_EQ(train(examples), train(examples));
  TrainingConfig other;
  other.seed = 7;
  EXPECT_NE(train(examples).weights, train(examples, other).weights);
}

TEST(TrainTest, IdenticalVectorsGivePrior) {
  const auto vocab = testing::make_vocab({"A", "B"}, {});
  std::vector<LabeledExample> examples;
  for (int i = 0; i < 4; ++i) examples.push_back({vec(vocab, {0.5, 0.5, 0.0}), {}, i != 0});
  TrainingConfig cfg;
  cfg.epochs = 20000;
  const auto model = train(examples, cfg);
  for (double w : model.weights) EXPECT_NEAR(w, 0.0, 1e-3);
  EXPECT_NEAR(predict(model, examples[0].motifs).p_human, 0.75, 1e-3);
}

TEST(TrainTest, LossIsMonotoneAtStableRate) {
  const auto vocab = testing::make_vocab({"A", "B"}, {"A"});
  const auto examples = testing::synthetic_authorship_corpus(vocab, 3);
  TrainingConfig cfg;
  cfg.learning_rate = max_stable_learning_rate(examples, cfg.l2);
  cfg.epochs = 300;
  TrainingReport report;
  (void)train(examples, cfg, &report);
  ASSERT_EQ(report.loss.size(), 301u);
  for (std::size_t i = 1; i < report.loss.size(); ++i) {
    EXPECT_LE(report.loss[i], report.loss[i - 1] + 1e-15) << i;
  }
  EXPECT_LT(report.loss.back(), report.loss.front());
}

TEST(TrainTest, StrongerRegularizationShrinksWeights) {
  const auto vocab = testing::make_vocab({"A", "B"}, {"A"});
  const auto examples = testing::synthetic_authorship_corpus(vocab, 4);
  double previous = INFINITY;
  for (double l2 : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    TrainingConfig cfg;
    cfg.l2 = l2;
    cfg.epochs = 3000;
    cfg.learning_rate = max_stable_learning_rate(examples, l2);
    const auto model = train(examples, cfg);
    double norm = 0.0;
    for (double w : model.weights) norm += w * w;
    EXPECT_LT(norm, previous) << l2;
    previous = norm;
  }
}

TEST(TrainTest, DenseFeaturesAreLearned) {
  const auto vocab = testing::make_vocab({"A"}, {});
  std::vector<LabeledExample> examples;
  for (int i = 0; i < 20; ++i) {
    const bool human = i % 2 == 0;
    examples.push_back({vec(vocab, {0.5, 0.5}), {human ? 1.0 : -1.0}, human});
  }
  const auto model = train(examples);
  EXPECT_EQ(model.dense_width, 1u);
  EXPECT_EQ(accuracy(model, examples), 1.0);
}

TEST(TrainTest, Errors) {
  const auto vocab = testing::make_vocab({"A"}, {});
  const std::vector<LabeledExample> one_class = {{vec(vocab, {1.0, 0.0}), {}, true},
                                                 {vec(vocab, {0.0, 1.0}), {}, true}};
  EXPECT_EQ(code_of([&] { (void)train(one_class); }), ErrorCode::kSingleClassCorpus);
  EXPECT_EQ(code_of([&] { (void)train(std::vector<LabeledExample>{}); }),
            ErrorCode::kSingleClassCorpus);
  const std::vector<LabeledExample> ragged = {{vec(vocab, {1.0, 0.0}), {}, true},
                                              {vec(vocab, {0.0, 1.0}), {1.0}, false}};
  EXPECT_EQ(code_of([&] { (void)train(ragged); }), ErrorCode::kWidthMismatch);
  const auto other = testing::make_vocab({"B"}, {});
  const std::vector<LabeledExample> mixed = {{vec(vocab, {1.0, 0.0}), {}, true},
                                             {vec(other, {0.0, 1.0}), {}, false}};
  EXPECT_EQ(code_of([&] { (void)train(mixed); }), ErrorCode::kFingerprintMismatch);
  TrainingConfig bad;
  bad.learning_rate = 0.0;
  const std::vector<LabeledExample> ok = {{vec(vocab, {1.0, 0.0}), {}, true},
                                          {vec(vocab, {0.0, 1.0}), {}, false}};
  EXPECT_EQ(code_of([&] { (void)train(ok, bad); }), ErrorCode::kInvalidArgument);
}

TEST(ModelStoreTest, RoundTripPredictionsBitIdentical) {
  const auto vocab = testing::make_vocab({"A", "B"}, {"A"});
  const auto examples = testing::synthetic_authorship_corpus(vocab, 5);
  const auto model = train(examples);
  const auto path = temp_file("model.json");
  save_model(model, path.string());
  const auto back = load_model(path.string(), vocab);
  std::filesystem::remove(path);
  EXPECT_EQ(back, model);
  for (const auto& e : examples) {
    const auto a = predict(model, e.motifs);
    const auto b = predict(back, e.motifs);
    EXPECT_EQ(a.logit, b.logit);
    EXPECT_EQ(a.p_human, b.p_human);
  }
}

TEST(ModelStoreTest, CorruptAndVersionedFiles) {
  const auto vocab = testing::make_vocab({"A", "B"}, {"A"});
  const auto model = train(testing::synthetic_authorship_corpus(vocab, 6));
  const auto text = serialize_model(model);
  for (std::size_t cut : {std::size_t{0}, std::size_t{1}, text.size() / 3, text.size() - 3}) {
    EXPECT_EQ(code_of([&] { (void)parse_model(text.substr(0, cut)); }), ErrorCode::kCorruptFile)
        << cut;
  }
  auto newer = text;
  newer.replace(newer.find("\"1.0\""), 5, "\"2.0\"");
  EXPECT_EQ(code_of([&] { (void)parse_model(newer); }), ErrorCode::kVersionMismatch);
  auto wrong_format = text;
  wrong_format.replace(wrong_format.find("discoreward.classifier"), 22, "discoreward.motif_set");
  EXPECT_EQ(code_of([&] { (void)parse_model(wrong_format); }), ErrorCode::kCorruptFile);

  const auto path = temp_file("model2.json");
  save_model(model, path.string());
  const auto other = testing::make_vocab({"A", "C"}, {"A"});
  EXPECT_EQ(code_of([&] { (void)load_model(path.string(), other); }),
            ErrorCode::kFingerprintMismatch);
  std::filesystem::remove(path);
}

TEST(ModelTest, DuplicatedDocumentSameLogit) {
  const auto vocab = testing::make_vocab({"A", "B"}, {"A"});
  const auto examples = testing::synthetic_authorship_corpus(vocab, 7);
  const auto model = train(examples);
  const auto copy = examples[3].motifs;
  EXPECT_EQ(predict(model, copy).logit, predict(model, examples[3].motifs).logit);
}

}  // namespace
}  // namespace discoreward
