// Prints one PASS/FAIL line per acceptance criterion and exits non-zero when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <unistd.h>
#include <nlohmann/json.hpp>

#include "discoreward/analysis.hpp"
#include "discoreward/authorship_model.hpp"
#include "discoreward/error.hpp"
#include "discoreward/hypergraph.hpp"
#include "discoreward/motif_engine.hpp"
#include "discoreward/reward_engine.hpp"
#include "discoreward/rl_math.hpp"
#include "discoreward/service.hpp"
#include "discoreward/surface_evaluator.hpp"
#include "oracles/motif_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/service_fixture.hpp"

namespace dr = discoreward;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
std::optional<dr::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const dr::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

Outcome motif_oracle_equivalence() {
  Outcome out;
  std::mt19937_64 rng(20240601);
  const auto start = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t edus = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const auto tree = dr::oracle::random_tree(rng, edus);
    const auto counts = dr::enumerate_motifs(dr::build_hypergraph(tree), 3);
    const std::map<std::string, std::uint64_t> got(counts.entries().begin(), counts.entries().end());
    mismatches += got != dr::oracle::brute_force_motifs(tree, 3);
  }
  const double elapsed = seconds_since(start);
  out.check(mismatches == 0, std::to_string(mismatches) + " mismatching trees");
  out.check(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
  if (out.pass) out.detail = "200 trees, 0 mismatches, " + std::to_string(elapsed) + " s";
  return out;
}

Outcome dense_reward_conservation() {
  Outcome out;
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000 && out.pass; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4096)(rng);
    std::set<std::size_t> chosen;
    const std::size_t picks = std::uniform_int_distribution<std::size_t>(0, n + 5)(rng);
    std::vector<std::size_t> motif;
    for (std::size_t p = 0; p < picks; ++p) {
      const std::size_t idx = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      chosen.insert(idx);
      motif.push_back(idx);  // duplicates allowed; set semantics expected
    }
    const double episodic = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
    const auto t = dr::assemble(episodic, motif, n);
    const double unit = 1.0 / (2.0 * static_cast<double>(n));
    const std::size_t k = chosen.size();

    out.check(t.rewards.size() == n, "tensor length");
    out.check(t.dense_count() == k, "dense count");
    long double sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const double dense = chosen.count(i) ? unit : 0.0;
      const double expected = i + 1 == n ? dense + episodic : dense;
      out.check(t.rewards[i] == expected, "entry " + std::to_string(i) + " of case " + std::to_string(trial));
      sum += dense;
    }
    const long double exact = static_cast<long double>(k) / (2.0L * static_cast<long double>(n));
    const double tolerance = 4 * std::numeric_limits<double>::epsilon() * static_cast<double>(exact);
    out.check(std::fabs(static_cast<double>(sum - exact)) <= tolerance,
              "dense sum differs from k/(2n) in case " + std::to_string(trial));
    out.check(static_cast<double>(sum) <= 0.5, "dense sum above 1/2");
  }
  if (out.pass) out.detail = "1000 cases";
  return out;
}

Outcome length_penalty() {
  Outcome out;
  int points = 0;
  for (double so : {0.0, 0.7, 2.0, 4.0, 5.0}) {
    for (std::size_t ld : {1u, 10u, 333u, 1000u, 4096u}) {
      for (double alpha : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        for (std::size_t lr : {0u, 1u, 5u, 250u, 999u, 1000u, 1001u, 5000u}) {
          ++points;
          const long double shortfall = std::max(
              0.0L, (static_cast<long double>(ld) - static_cast<long double>(lr)) / static_cast<long double>(ld));
          const long double expected = so * (1.0L - alpha * shortfall);
          const double got = dr::apply_length_penalty(so, lr, {alpha, ld});
          out.check(std::fabs(got - static_cast<double>(expected)) <= 1e-9, "formula mismatch");
          if (lr >= ld) out.check(got == so, "not identity for L_r >= L_d");
        }
      }
    }
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const double so = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
    const double alpha = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const std::size_t ld = std::uniform_int_distribution<std::size_t>(1, 3000)(rng);
    double previous = -1.0;
    for (std::size_t lr = 0; lr <= ld + 20; ++lr) {
      const double v = dr::apply_length_penalty(so, lr, {alpha, ld});
      out.check(v >= previous, "not monotone in L_r");
      previous = v;
    }
  }
  if (out.pass) out.detail = std::to_string(points) + " grid points, monotone";
  return out;
}

Outcome ppo_kernels() {
  Outcome out;
  std::mt19937_64 rng(9);
  const double eps = 0.2;
  for (int i = 0; i < 10000; ++i) {
    const double r = std::uniform_real_distribution<double>(0.05, 3.0)(rng);
    const double a = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    const double direct = std::min(r * a, std::clamp(r, 1.0 - eps, 1.0 + eps) * a);
    out.check(std::fabs(dr::rl::clipped_surrogate(r, a, eps) - direct) <= 1e-12, "surrogate mismatch");
    if (std::fabs(r - 0.8) < 1e-5 || std::fabs(r - 1.2) < 1e-5) continue;
    const double h = 1e-6;
    const double fd = (dr::rl::clipped_surrogate(r + h, a, eps) - dr::rl::clipped_surrogate(r - h, a, eps)) / (2 * h);
    const bool clipped = (a > 0 && r > 1 + eps) || (a < 0 && r < 1 - eps);
    out.check(std::fabs(fd - (clipped ? 0.0 : a)) <= 1e-4, "finite-difference gradient");
  }
  out.check(dr::rl::clipped_surrogate(1.5, 1.0, 0.2) == 1.2, "clip example 1.5 -> 1.2");
  out.check(dr::rl::clipped_surrogate(0.5, -1.0, 0.2) == -0.8, "clip example 0.5 -> -0.8");
  out.check(dr::rl::one_step_advantage(1.0, 1.0, 0.5, 0.7) == 0.8, "advantage example 0.8");
  out.check(dr::rl::prob_ratio(std::log(2.0), 0.0) == 2.0, "ratio example 2.0");
  out.check(dr::rl::prob_ratio(-std::log(4.0), 0.0) == 0.25, "ratio example 0.25");
  const std::vector<double> rewards = {0.0, 0.0, 1.0};
  const std::vector<double> kl = {0.1, 0.1, 0.1};
  out.check(dr::rl::kl_penalized_rewards(rewards, kl, 0.03) == std::vector<double>{-0.003, -0.003, 0.997},
            "kl example");
  if (out.pass) out.detail = "10000 random points, examples exact";
  return out;
}

Outcome mfidf_selection() {
  Outcome out;
  const std::vector<dr::MotifCounts> human = {dr::testing::counts({{"A", 3}, {"B", 1}}),
                                              dr::testing::counts({{"A", 4}, {"C", 1}})};
  const std::vector<dr::MotifCounts> machine = {dr::testing::counts({{"A", 1}, {"B", 3}}),
                                                dr::testing::counts({{"B", 4}, {"C", 1}})};
  const auto d = dr::compute_distinctive(human, machine, 3);
  const double tol = 1e-9;
  out.check(d.size() == 3, "vocabulary size");
  if (!out.pass) return out;
  // Hand computation: IDF(A)=IDF(B)=1, IDF(C)=ln(4/3)+1; class means of MF-IDF.
  out.check(std::fabs(d.entries()[0].delta - 0.65) <= tol, "delta(A)");
  out.check(std::fabs(d.entries()[1].delta + 0.65) <= tol, "delta(B)");
  out.check(std::fabs(d.entries()[2].delta) <= tol, "delta(C)");
  out.check(std::fabs(d.mean_delta()) <= tol, "mean delta");
  out.check(std::fabs(d.threshold() - 0.5307227776030219) <= tol, "threshold");
  out.check(d.distinctive_keys() == std::vector<std::string>{"A"}, "distinctive set");
  if (out.pass) out.detail = "distinctive {A}, threshold 0.530723";
  return out;
}

Outcome authorship_classifier() {
  Outcome out;
  const auto vocab = dr::testing::make_vocab({"A", "B"}, {"A"});
  const auto examples = dr::testing::synthetic_authorship_corpus(vocab, 1);
  dr::TrainingConfig cfg;
  cfg.epochs = 1000;
  const auto model = dr::train(examples, cfg);
  int correct = 0;
  for (const auto& e : examples) correct += (dr::predict(model, e.motifs).p_human > 0.5) == e.human;
  const double acc = correct / static_cast<double>(examples.size());
  out.check(acc >= 0.95, "training accuracy " + std::to_string(acc));
  out.check(dr::train(examples, cfg) == model, "training is not seed-deterministic");

  const auto path = std::filesystem::temp_directory_path() /
                    ("discoreward_acceptance_model_" + std::to_string(::getpid()) + ".json");
  dr::save_model(model, path.string());
  const auto loaded = dr::load_model(path.string(), vocab);
  std::filesystem::remove(path);
  for (const auto& e : examples) {
    const auto a = dr::predict(model, e.motifs);
    const auto b = dr::predict(loaded, e.motifs);
    out.check(a.logit == b.logit && a.p_human == b.p_human, "reloaded predictions differ");
  }
  if (out.pass) out.detail = "accuracy " + std::to_string(acc);
  return out;
}

Outcome evaluator_parsing() {
  Outcome out;
  std::ifstream in(std::string(DISCOREWARD_TEST_DATA_DIR) + "/evaluator_replies.json");
  if (!in) return {false, "fixture file missing"};
  const auto cases = nlohmann::json::parse(in);
  out.check(cases.size() >= 10, "fewer than 10 fixtures");
  for (const auto& c : cases) {
    const auto raw = c.at("raw").get<std::string>();
    const auto name = c.at("name").get<std::string>();
    if (c.contains("scores")) {
      const auto& s = c.at("scores");
      const dr::EvaluatorScores expected{s.at("flow").get<int>(), s.at("organization").get<int>(),
                                         s.at("balance").get<int>()};
      std::optional<dr::EvaluatorScores> got;
      const auto err = error_of([&] { got = dr::parse_evaluation(raw); });
      out.check(!err && got == expected, name);
    } else {
      const auto err = error_of([&] { (void)dr::parse_evaluation(raw); });
      out.check(err && dr::error_code_name(*err) == c.at("error").get<std::string>(), name);
    }
  }
  out.check(dr::mean_score({4, 3, 5}) == 4.0, "mean (4,3,5)");
  if (out.pass) out.detail = std::to_string(cases.size()) + " fixtures";
  return out;
}

Outcome service_equivalence() {
  Outcome out;
  const auto fixture = dr::testing::make_service_fixture(5);
  auto service = std::make_shared<const dr::ScoreService>(fixture.classifier, fixture.motifs, nullptr);
  const std::size_t malformed = 6;
  const std::string body = dr::testing::score_body(fixture.documents, "graph", malformed);
  const auto reply = service->handle_score(body);
  out.check(reply.status == 200, "status " + std::to_string(reply.status));
  if (!out.pass) return out;
  const auto results = nlohmann::json::parse(reply.body).at("results");
  out.check(results.size() == 16, "result count");
  for (std::size_t i = 0; i < results.size() && i < 16; ++i) {
    out.check(results[i].at("doc_id") == fixture.documents[i].doc_id, "order not preserved");
    if (i == malformed) {
      out.check(results[i].contains("error"), "malformed document produced a result");
      continue;
    }
    const auto expected = dr::testing::direct_result(fixture.documents[i], dr::RewardMode::kGraph,
                                                     service->dependencies(), service->options());
    const auto diff = dr::testing::compare_result(results[i].dump(), expected);
    out.check(diff.empty(), "document " + std::to_string(i) + ": " + diff);
  }
  const auto clean = nlohmann::json::parse(
      service->handle_score(dr::testing::score_body(fixture.documents, "graph")).body);
  for (std::size_t i = 0; i < 16; ++i) {
    if (i != malformed) {
      out.check(clean.at("results")[i] == results[i], "malformed document perturbed another");
    }
  }

  dr::HttpServer server(service, 8);
  const int port = server.start("127.0.0.1", 0);
  std::vector<std::vector<std::string>> seen(8);
  {
    std::vector<std::jthread> clients;
    for (int c = 0; c < 8; ++c) {
      clients.emplace_back([&, c] {
        httplib::Client client("127.0.0.1", port);
        for (int b = 0; b < 10; ++b) {
          const auto res = client.Post("/v1/score", body, "application/json");
          seen[c].push_back(res && res->status == 200 ? res->body : std::string("failed"));
        }
      });
    }
  }
  server.stop();
  for (const auto& per_client : seen) {
    for (const auto& response : per_client) {
      out.check(response == reply.body, "concurrent response differs");
    }
  }
  if (out.pass) out.detail = "16 documents, 8 clients x 10 batches";
  return out;
}

Outcome motif_trend_synthetic() {
  Outcome out;
  const auto vocab = dr::testing::make_vocab({"A", "B", "C"}, {"A"});
  std::vector<std::vector<dr::MotifCounts>> rising;
  std::vector<std::vector<dr::MotifCounts>> flat;
  for (std::uint64_t step = 0; step < 25; ++step) {
    rising.push_back({dr::testing::counts({{"A", step}, {"B", 12}}), dr::testing::counts({{"C", 3}, {"Q", 1}})});
    flat.push_back({dr::testing::counts({{"A", 4}, {"B", 12}}), dr::testing::counts({{"C", 3}})});
  }
  const auto up = dr::motif_trend(rising, vocab);
  for (std::size_t i = 1; i < up.size(); ++i) {
    out.check(up[i].proportion > up[i - 1].proportion, "series not strictly increasing");
  }
  const auto level = dr::motif_trend(flat, vocab);
  for (const auto& p : level) out.check(p.proportion == level[0].proportion, "flat series varies");
  if (out.pass) out.detail = "25 batches";
  return out;
}

Outcome pearson_utility() {
  Outcome out;
  const std::vector<double> xs = {1, 2, 3, 4, 5, 6};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(2 * x + 3);
  out.check(std::fabs(dr::pearson(xs, ys) - 1.0) <= 1e-12, "linear example");
  out.check(std::fabs(dr::pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) + 1.0) <= 1e-12,
            "anti-correlated example");
  out.check(std::fabs(dr::pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 1, 4, 3}) - 0.6) <= 1e-12,
            "0.6 example");
  const auto err = error_of([] { (void)dr::pearson(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}); });
  out.check(err == dr::ErrorCode::kZeroVariance, "constant input");
  if (out.pass) out.detail = "3 examples, ZeroVariance";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Motif oracle equivalence", motif_oracle_equivalence},
      {"Dense-reward conservation", dense_reward_conservation},
      {"Length penalty", length_penalty},
      {"PPO kernels", ppo_kernels},
      {"MF-IDF distinctive selection", mfidf_selection},
      {"Authorship classifier", authorship_classifier},
      {"Evaluator parsing", evaluator_parsing},
      {"Service equivalence + concurrency", service_equivalence},
      {"Motif trend, synthetic", motif_trend_synthetic},
      {"Pearson utility", pearson_utility},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %s  (%s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
