#include <thread>

#include <httplib.h>

#include "discoreward/error.hpp"
#include "discoreward/surface_evaluator.hpp"

namespace discoreward {

HttpChatTransport::HttpChatTransport(std::string endpoint, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  constexpr std::string_view kScheme = "http://";
  if (endpoint.rfind(kScheme, 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "evaluator endpoint must start with http://");
  }
  const std::string rest = endpoint.substr(kScheme.size());
  const auto slash = rest.find('/');
  const std::string authority = rest.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = authority.rfind(':');
  host_ = authority.substr(0, colon);
  if (colon != std::string::npos) {
    try {
      port_ = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in endpoint " + endpoint);
    }
  }
  if (host_.empty()) throw Error(ErrorCode::kInvalidArgument, "no host in endpoint " + endpoint);
}

std::string HttpChatTransport::complete(const ChatRequest& request) {
  httplib::Client client(host_, port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  const auto response = client.Post(path_, chat_request_body(request), "application/json");
  if (!response) {
    throw Error(ErrorCode::kTransport,
                "evaluator request failed: " + httplib::to_string(response.error()));
  }
  if (response->status < 200 || response->status >= 300) {
    throw Error(ErrorCode::kTransport,
                "evaluator returned HTTP " + std::to_string(response->status));
  }
  return extract_reply_text(response->body);
}

MockChatTransport::MockChatTransport(Responder responder, std::chrono::milliseconds latency)
    : responder_(std::move(responder)), latency_(latency) {}

std::shared_ptr<MockChatTransport> MockChatTransport::scripted(std::vector<MockReply> replies) {
  if (replies.empty()) throw Error(ErrorCode::kInvalidArgument, "scripted mock needs replies");
  struct Script {
    std::mutex mutex;
    std::vector<MockReply> replies;
    std::size_t next = 0;
  };
  auto script = std::make_shared<Script>();
  script->replies = std::move(replies);
  return std::make_shared<MockChatTransport>([script](const ChatRequest&) {
    std::lock_guard lock(script->mutex);
    const std::size_t i = std::min(script->next, script->replies.size() - 1);
    ++script->next;
    return script->replies[i];
  });
}

std::shared_ptr<MockChatTransport> MockChatTransport::fixed(const EvaluatorScores& scores,
                                                            std::chrono::milliseconds latency) {
  const std::string reply = render_evaluation(scores);
  return std::make_shared<MockChatTransport>(
      [reply](const ChatRequest&) { return MockReply{reply, false}; }, latency);
}

std::string MockChatTransport::complete(const ChatRequest& request) {
  ++calls_;
  const std::size_t now = ++in_flight_;
  std::size_t seen = max_concurrency_.load();
  while (now > seen && !max_concurrency_.compare_exchange_weak(seen, now)) {
  }
  struct Leave {
    std::atomic<std::size_t>& counter;
    ~Leave() { --counter; }
  } leave{in_flight_};

  if (latency_.count() > 0) std::this_thread::sleep_for(latency_);
  MockReply reply = responder_(request);
  if (reply.transport_failure) throw Error(ErrorCode::kTransport, "mock transport failure");
  return std::move(reply.text);
}

}  // namespace discoreward
