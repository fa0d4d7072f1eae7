#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "discoreward/authorship_model.hpp"
#include "discoreward/config.hpp"
#include "discoreward/motif_engine.hpp"
#include "discoreward/reward_engine.hpp"
#include "discoreward/surface_evaluator.hpp"

namespace discoreward {

struct ServiceOptions {
  RewardOptions reward;
  RewardMode default_mode = RewardMode::kGraph;
  std::size_t default_desired_length = 1;
  SegmentPolicy segment_policy;
  std::size_t workers = 4;  // documents scored concurrently within one batch
};

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// Request handling behind the HTTP endpoints. All state is fixed at
// construction, so one instance can serve any number of threads.
//
//   POST /v1/score   {"mode"?, "alpha"?, "documents": [{"doc_id", "text",
//                     "tokens"?, "parse"?, "desired_length"?, "instruction"?}]}
//                 -> {"results": [{"doc_id", "episodic", "num_tokens",
//                     "dense": [{"index", "value"}], "diagnostics"} |
//                     {"doc_id", "error": {"code", "message"}}]}
//   POST /v1/motifs  {"documents": [{"doc_id", "text"?, "parse"}]}
//   GET  /healthz
//
// Unknown fields are ignored. See docs/http_api.md for the full schema.
class ScoreService {
 public:
  ScoreService(std::shared_ptr<const ClassifierModel> classifier,
               std::shared_ptr<const DistinctiveMotifSet> motifs,
               std::shared_ptr<EvaluatorClient> evaluator, ServiceOptions options = {});

  HttpReply handle_score(std::string_view body) const;
  HttpReply handle_motifs(std::string_view body) const;
  HttpReply handle_health() const;

  const ServiceOptions& options() const noexcept { return options_; }
  RewardDependencies dependencies() const;

 private:
  std::shared_ptr<const ClassifierModel> classifier_;
  std::shared_ptr<const DistinctiveMotifSet> motifs_;
  std::shared_ptr<EvaluatorClient> evaluator_;
  ServiceOptions options_;
};

// Embedded HTTP server exposing a ScoreService.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<const ScoreService> service, std::size_t threads = 8);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and starts serving on a background thread. Port 0 picks a free
  // port. Returns the bound port; throws kIo when binding fails.
  int start(const std::string& host, int port);
  // Binds and serves on the calling thread until stop() is called.
  void run(const std::string& host, int port);
  void stop();
  int port() const noexcept { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

// Settings for `discoreward serve`, read from a KeyValueConfig. Recognized
// keys: host, port, mode, model, motifs, desired_length, alpha, k, endpoint,
// evaluator_model, timeout_ms, max_retries, max_in_flight, temperature,
// threads, workers, dense_normalizer, blend_weight, enforce_segments.
struct ServiceSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  RewardMode mode = RewardMode::kGraph;
  std::string model_path;
  std::string motifs_path;
  std::size_t desired_length = 1;
  double alpha = 1.0;
  int k = kDefaultMotifSize;
  EvaluatorClientConfig evaluator;
  std::size_t threads = 8;
  std::size_t workers = 4;
  DenseNormalizer normalizer = DenseNormalizer::kSequenceLength;
  double blend_weight = 0.5;
  bool enforce_segments = true;

  static ServiceSettings from_config(const KeyValueConfig& config);
  ServiceOptions service_options() const;
};

}  // namespace discoreward
