#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace discoreward {

// Integer ratings in [0, 5] for the three rubric aspects.
struct EvaluatorScores {
  int flow = 0;
  int organization = 0;
  int balance = 0;

  friend bool operator==(const EvaluatorScores&, const EvaluatorScores&) = default;
};

double mean_score(const EvaluatorScores& scores) noexcept;

struct SurfaceScore {
  double value = 0.0;  // mean of the three aspects; 0 when degraded
  EvaluatorScores raw;
  int attempts = 0;
  bool degraded = false;
  std::string last_error;  // set when at least one attempt failed
};

struct EvaluatorClientConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:30000/v1/chat/completions
  std::string model = "evaluator";
  std::chrono::milliseconds timeout{120000};
  int max_retries = 2;
  int max_in_flight = 8;
  double temperature = 0.0;

  // Throws kInvalidArgument when retries < 0 or in-flight < 1.
  void validate() const;
};

// The grading rubric sent ahead of every essay.
std::string_view rubric_text() noexcept;

// Prompt layout (byte-stable):
//   <rubric>\n\n### Instruction\n<instruction>\n\n### Essay\n<essay>\n
// Throws kEmptyEssay when the essay is empty or whitespace only.
std::string build_prompt(std::string_view instruction, std::string_view essay);

// Extracts the first well-formed JSON object holding integer "flow",
// "organization" and "balance" keys. Leading prose and extra keys are
// ignored; the "<EOE>" marker must start within 64 characters after the
// object's closing brace. Throws kMalformedObject, kMissingKey,
// kMissingTerminator, kNonInteger or kOutOfRange.
EvaluatorScores parse_evaluation(std::string_view raw);

inline constexpr std::size_t kTerminatorWindow = 64;
inline constexpr std::string_view kTerminator = "<EOE>";

// Canonical reply for `scores`; parse_evaluation(render_evaluation(s)) == s.
std::string render_evaluation(const EvaluatorScores& scores);

struct ChatRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.0;
};

// {"model": ..., "messages": [{"role": "user", "content": prompt}], "temperature": ...}
std::string chat_request_body(const ChatRequest& request);

// Reply text from a completion response: choices[0].message.content,
// choices[0].text, or a top-level "text"/"content" string.
// Throws kTransport when none is present.
std::string extract_reply_text(std::string_view response_body);

// Sends one prompt and returns the model's reply text. Implementations throw
// Error(kTransport) for connection failures and non-2xx responses.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

class HttpChatTransport final : public ChatTransport {
 public:
  // Only plain http:// endpoints are supported.
  HttpChatTransport(std::string endpoint, std::chrono::milliseconds timeout);
  std::string complete(const ChatRequest& request) override;

 private:
  std::string host_;
  int port_ = 80;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

struct MockReply {
  std::string text;
  bool transport_failure = false;
};

// Deterministic in-process evaluator. Tracks call counts and the highest
// number of concurrent calls it has seen.
class MockChatTransport final : public ChatTransport {
 public:
  using Responder = std::function<MockReply(const ChatRequest&)>;

  explicit MockChatTransport(Responder responder,
                             std::chrono::milliseconds latency = std::chrono::milliseconds{0});

  // Replays `replies` in order, then repeats the last one.
  static std::shared_ptr<MockChatTransport> scripted(std::vector<MockReply> replies);
  // Always answers with the canonical reply for `scores`.
  static std::shared_ptr<MockChatTransport> fixed(const EvaluatorScores& scores,
                                                  std::chrono::milliseconds latency = {});

  std::string complete(const ChatRequest& request) override;

  std::size_t calls() const noexcept { return calls_.load(); }
  std::size_t max_concurrency() const noexcept { return max_concurrency_.load(); }

 private:
  Responder responder_;
  std::chrono::milliseconds latency_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_concurrency_{0};
};

// Shareable client; at most config.max_in_flight transport calls run at once.
class EvaluatorClient {
 public:
  EvaluatorClient(EvaluatorClientConfig config, std::shared_ptr<ChatTransport> transport);

  // Convenience: HTTP transport built from config.endpoint.
  static std::shared_ptr<EvaluatorClient> over_http(const EvaluatorClientConfig& config);

  // Up to 1 + max_retries attempts. Parse failures retry and, once attempts
  // run out, yield a degraded score of 0. When every attempt failed in the
  // transport the last transport error is rethrown.
  SurfaceScore evaluate(std::string_view instruction, std::string_view essay);

  const EvaluatorClientConfig& config() const noexcept { return config_; }

 private:
  std::string call(const ChatRequest& request);

  EvaluatorClientConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  std::mutex mutex_;
  std::condition_variable slot_freed_;
  int in_flight_ = 0;
};

SurfaceScore evaluate(std::string_view instruction, std::string_view essay,
                      EvaluatorClient& client);

}  // namespace discoreward
