#include "discoreward/surface_evaluator.hpp"

#include <algorithm>
#include <optional>

#include <nlohmann/json.hpp>

#include "discoreward/error.hpp"

namespace discoreward {
namespace {

constexpr std::string_view kRubric = R"RUBRIC(You will act as an English instructor and evaluate the quality of an essay or story written by a student in response to given instructions. When grading, consider the following discourse aspects of the text.
- Logical Flow and Structure (flow): Assess the logical progression of ideas and the overall organization of the text, ensuring that it is easy to follow and well-structured.
- Hierarchical Organization (organization): Examine the organization of ideas in a hierarchical manner, from general to specific, ensuring that each section supports the main argument or narrative.
- Balance and Emphasis (balance): Ensure that important ideas are appropriately emphasized and that there is a balance in the coverage of different points or sections of the text.

For each aspect, you need to assign an integer score from 0 (worst quality) to 5 (best quality).
When assigning the score, carefully consider which specific parts of the text relate to each aspect.

Assign lower scores when:
- The text is poorly structured and do not conform to the standard of an English essay or a story.
- The text contains a lot of non-sensical words such as special tokens or programming code.
- The text contains a lot of non-English words.
- The text does not fully answer the writing instruction with full content, and therefore, is unfinished.

Your evaluation output should conform to the following JSON format:
{
  "flow": int,
  "organization": int,
  "balance": int
}

Write <EOE> after outputting the JSON result.)RUBRIC";

constexpr std::string_view kAspects[] = {"flow", "organization", "balance"};

// Index one past the '}' matching the '{' at `open`, honoring JSON strings.
std::optional<std::size_t> matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::nullopt;
}

bool has_all_aspects(const nlohmann::json& object) {
  return std::all_of(std::begin(kAspects), std::end(kAspects),
                     [&](std::string_view key) { return object.contains(std::string(key)); });
}

int aspect_value(const nlohmann::json& object, std::string_view key) {
  const auto& v = object.at(std::string(key));
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kNonInteger, "'" + std::string(key) + "' is not an integer");
  }
  const auto value = v.template get<long long>();
  if (value < 0 || value > 5) {
    throw Error(ErrorCode::kOutOfRange,
                "'" + std::string(key) + "' = " + std::to_string(value) + " is outside [0, 5]");
  }
  return static_cast<int>(value);
}

}  // namespace

double mean_score(const EvaluatorScores& s) noexcept {
  return static_cast<double>(s.flow + s.organization + s.balance) / 3.0;
}

void EvaluatorClientConfig::validate() const {
  if (max_retries < 0) throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
  if (max_in_flight < 1) throw Error(ErrorCode::kInvalidArgument, "max_in_flight must be >= 1");
  if (timeout.count() <= 0) throw Error(ErrorCode::kInvalidArgument, "timeout must be positive");
}

std::string_view rubric_text() noexcept { return kRubric; }

std::string build_prompt(std::string_view instruction, std::string_view essay) {
  if (essay.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyEssay, "essay is empty");
  }
  std::string prompt;
  prompt.reserve(kRubric.size() + instruction.size() + essay.size() + 40);
  prompt.append(kRubric);
  prompt.append("\n\n### Instruction\n");
  prompt.append(instruction);
  prompt.append("\n\n### Essay\n");
  prompt.append(essay);
  prompt.append("\n");
  return prompt;
}

EvaluatorScores parse_evaluation(std::string_view raw) {
  bool saw_object = false;
  std::optional<nlohmann::json> chosen;
  std::size_t object_end = 0;

  for (std::size_t open = raw.find('{'); open != std::string_view::npos;
       open = raw.find('{', open + 1)) {
    const auto close = matching_brace(raw, open);
    if (!close) continue;
    auto parsed = nlohmann::json::parse(raw.substr(open, *close - open), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) continue;
    saw_object = true;
    if (has_all_aspects(parsed)) {
      chosen = std::move(parsed);
      object_end = *close;
      break;
    }
  }
  if (!chosen) {
    if (saw_object) {
      throw Error(ErrorCode::kMissingKey, "no object carries flow, organization and balance");
    }
    throw Error(ErrorCode::kMalformedObject, "reply contains no well-formed JSON object");
  }

  const std::size_t marker = raw.find(kTerminator, object_end);
  if (marker == std::string_view::npos || marker - object_end > kTerminatorWindow) {
    throw Error(ErrorCode::kMissingTerminator, "no <EOE> marker follows the score object");
  }

  EvaluatorScores scores;
  scores.flow = aspect_value(*chosen, "flow");
  scores.organization = aspect_value(*chosen, "organization");
  scores.balance = aspect_value(*chosen, "balance");
  return scores;
}

std::string render_evaluation(const EvaluatorScores& s) {
  return "{\"flow\":" + std::to_string(s.flow) + ",\"organization\":" +
         std::to_string(s.organization) + ",\"balance\":" + std::to_string(s.balance) +
         "}\n<EOE>";
}

std::string chat_request_body(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model;
  body["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"}, {"content", request.prompt}}});
  body["temperature"] = request.temperature;
  return body.dump();
}

std::string extract_reply_text(std::string_view response_body) {
  const auto body = nlohmann::json::parse(response_body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::kTransport, "evaluator response is not a JSON object");
  }
  if (const auto choices = body.find("choices");
      choices != body.end() && choices->is_array() && !choices->empty()) {
    const auto& first = (*choices)[0];
    if (const auto msg = first.find("message"); msg != first.end() && msg->is_object()) {
      if (const auto c = msg->find("content"); c != msg->end() && c->is_string()) {
        return c->get<std::string>();
      }
    }
    if (const auto t = first.find("text"); t != first.end() && t->is_string()) {
      return t->get<std::string>();
    }
  }
  for (const char* key : {"text", "content"}) {
    if (const auto t = body.find(key); t != body.end() && t->is_string()) {
      return t->get<std::string>();
    }
  }
  throw Error(ErrorCode::kTransport, "evaluator response carries no reply text");
}

EvaluatorClient::EvaluatorClient(EvaluatorClientConfig config,
                                 std::shared_ptr<ChatTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  config_.validate();
  if (!transport_) throw Error(ErrorCode::kInvalidArgument, "evaluator transport is null");
}

std::shared_ptr<EvaluatorClient> EvaluatorClient::over_http(const EvaluatorClientConfig& config) {
  return std::make_shared<EvaluatorClient>(
      config, std::make_shared<HttpChatTransport>(config.endpoint, config.timeout));
}

std::string EvaluatorClient::call(const ChatRequest& request) {
  {
    std::unique_lock lock(mutex_);
    slot_freed_.wait(lock, [this] { return in_flight_ < config_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    EvaluatorClient* self;
    ~Release() {
      {
        std::lock_guard lock(self->mutex_);
        --self->in_flight_;
      }
      self->slot_freed_.notify_one();
    }
  } release{this};
  return transport_->complete(request);
}

SurfaceScore EvaluatorClient::evaluate(std::string_view instruction, std::string_view essay) {
  const ChatRequest request{config_.model, build_prompt(instruction, essay), config_.temperature};
  SurfaceScore result;
  bool any_reply = false;
  std::optional<Error> last_transport_error;

  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    result.attempts = attempt + 1;
    std::string reply;
    try {
      reply = call(request);
      any_reply = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransport) throw;
      last_transport_error = e;
      result.last_error = e.what();
      continue;
    }
    try {
      result.raw = parse_evaluation(reply);
      result.value = mean_score(result.raw);
      result.degraded = false;
      return result;
    } catch (const Error& e) {
      result.last_error = std::string(error_code_name(e.code())) + ": " + e.what();
    }
  }

  if (!any_reply && last_transport_error) throw *last_transport_error;
  result.degraded = true;
  result.value = 0.0;
  result.raw = {};
  return result;
}

SurfaceScore evaluate(std::string_view instruction, std::string_view essay,
                      EvaluatorClient& client) {
  return client.evaluate(instruction, essay);
}

}  // namespace discoreward
