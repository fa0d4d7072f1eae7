#include "discoreward/service.hpp"

#include <variant>

#include "discoreward/error.hpp"
#include "discoreward/version.hpp"
#include "json_codec.hpp"

namespace discoreward {
namespace {

using detail::Json;
using detail::OrderedJson;

HttpReply error_reply(int status, std::string_view code, const std::string& message) {
  OrderedJson body;
  body["error"] = {{"code", code}, {"message", message}};
  return {status, body.dump()};
}

OrderedJson error_object(ErrorCode code, const std::string& message) {
  return OrderedJson{{"code", error_code_name(code)}, {"message", message}};
}

// Body-level validation shared by the POST endpoints. Returns the documents
// array or an error reply.
std::variant<Json, HttpReply> documents_of(std::string_view body) {
  Json root = Json::parse(body, nullptr, false);
  if (root.is_discarded()) return error_reply(400, "MalformedInput", "body is not valid JSON");
  if (!root.is_object()) return error_reply(400, "MalformedInput", "body must be a JSON object");
  const auto docs = root.find("documents");
  if (docs == root.end() || !docs->is_array()) {
    return error_reply(400, "MalformedInput", "body needs a 'documents' array");
  }
  if (docs->empty()) return error_reply(400, "MalformedInput", "'documents' is empty");
  return root;
}

std::string doc_id_of(const Json& entry) {
  if (entry.is_object()) {
    if (const auto id = entry.find("doc_id"); id != entry.end() && id->is_string()) {
      return id->get<std::string>();
    }
  }
  return {};
}

DiscourseDocument parse_field(const Json& entry, const std::string& doc_id,
                              const SegmentPolicy& policy) {
  Json record = entry.at("parse");
  if (!record.is_object()) throw Error(ErrorCode::kMalformedInput, "'parse' must be an object");
  if (!record.contains("doc_id")) record["doc_id"] = doc_id;
  if (!record.contains("text")) {
    const auto text = entry.find("text");
    if (text == entry.end() || !text->is_string()) {
      throw Error(ErrorCode::kMalformedInput, "'parse' has no text and the document has none");
    }
    record["text"] = *text;
  }
  return detail::document_from_json(record, policy);
}

RewardRequest request_from_json(const Json& entry, RewardMode mode, const ServiceOptions& options) {
  if (!entry.is_object()) throw Error(ErrorCode::kMalformedInput, "document entry must be an object");
  RewardRequest req;
  req.mode = mode;
  req.doc_id = doc_id_of(entry);
  req.desired_length = options.default_desired_length;
  if (const auto t = entry.find("text"); t != entry.end()) {
    if (!t->is_string()) throw Error(ErrorCode::kMalformedInput, "'text' must be a string");
    req.text = t->get<std::string>();
  }
  if (const auto t = entry.find("tokens"); t != entry.end() && !t->is_null()) {
    req.token_offsets = detail::offsets_from_json(*t);
  }
  if (const auto d = entry.find("desired_length"); d != entry.end() && !d->is_null()) {
    if (!d->is_number_integer() || d->get<long long>() < 1) {
      throw Error(ErrorCode::kInvalidArgument, "'desired_length' must be a positive integer");
    }
    req.desired_length = d->get<std::size_t>();
  }
  if (const auto i = entry.find("instruction"); i != entry.end() && !i->is_null()) {
    if (!i->is_string()) throw Error(ErrorCode::kMalformedInput, "'instruction' must be a string");
    req.instruction = i->get<std::string>();
  }
  if (entry.contains("parse") && !entry.at("parse").is_null()) {
    req.document = parse_field(entry, req.doc_id, options.segment_policy);
  }
  if (req.text.empty() && !req.document) {
    throw Error(ErrorCode::kMalformedInput, "document has neither 'text' nor 'parse'");
  }
  return req;
}

OrderedJson result_to_json(const std::string& doc_id, const RewardResult& r) {
  OrderedJson out;
  out["doc_id"] = doc_id;
  out["episodic"] = r.tensor.episodic;
  out["num_tokens"] = r.tensor.size();
  OrderedJson dense = OrderedJson::array();
  for (std::size_t i : r.tensor.dense_indices) {
    dense.push_back(OrderedJson{{"index", i}, {"value", r.tensor.dense_value}});
  }
  out["dense"] = std::move(dense);

  const auto& d = r.diagnostics;
  OrderedJson diag;
  diag["mode"] = to_string(r.tensor.source);
  diag["raw_episodic"] = d.raw_episodic;
  diag["penalty_factor"] = d.penalty_factor;
  diag["segment_count"] = d.segment_count;
  diag["motif_token_count"] = d.motif_token_count;
  diag["motif_coverage"] = d.motif_coverage;
  if (d.graph) {
    diag["logit"] = d.graph->logit;
    diag["p_human"] = d.graph->p_human;
  }
  if (d.surface) {
    diag["surface"] = {{"value", d.surface->value},
                       {"flow", d.surface->raw.flow},
                       {"organization", d.surface->raw.organization},
                       {"balance", d.surface->raw.balance},
                       {"attempts", d.surface->attempts},
                       {"degraded", d.surface->degraded}};
  }
  out["diagnostics"] = std::move(diag);
  return out;
}

}  // namespace

ScoreService::ScoreService(std::shared_ptr<const ClassifierModel> classifier,
                           std::shared_ptr<const DistinctiveMotifSet> motifs,
                           std::shared_ptr<EvaluatorClient> evaluator, ServiceOptions options)
    : classifier_(std::move(classifier)),
      motifs_(std::move(motifs)),
      evaluator_(std::move(evaluator)),
      options_(std::move(options)) {
  if (classifier_ && motifs_ && classifier_->vocab_fingerprint != motifs_->fingerprint()) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "classifier and motif set were built over different vocabularies");
  }
}

RewardDependencies ScoreService::dependencies() const {
  RewardDependencies deps;
  deps.classifier = classifier_.get();
  deps.motifs = motifs_.get();
  deps.evaluator = evaluator_.get();
  return deps;
}

HttpReply ScoreService::handle_score(std::string_view body) const {
  auto parsed = documents_of(body);
  if (auto* reply = std::get_if<HttpReply>(&parsed)) return *reply;
  const Json& root = std::get<Json>(parsed);

  RewardMode mode = options_.default_mode;
  if (const auto m = root.find("mode"); m != root.end() && !m->is_null()) {
    if (!m->is_string()) return error_reply(400, "MalformedInput", "'mode' must be a string");
    try {
      mode = parse_reward_mode(m->get<std::string>());
    } catch (const Error& e) {
      return error_reply(400, "InvalidArgument", e.what());
    }
  }
  RewardOptions reward = options_.reward;
  if (const auto a = root.find("alpha"); a != root.end() && !a->is_null()) {
    if (!a->is_number() || a->get<double>() < 0.0 || a->get<double>() > 1.0) {
      return error_reply(400, "InvalidArgument", "'alpha' must be a number in [0, 1]");
    }
    reward.alpha = a->get<double>();
  }
  if (mode != RewardMode::kGraph && !evaluator_) {
    return error_reply(503, "MissingDependency", "no evaluator endpoint is configured");
  }
  if (mode != RewardMode::kSurface && (!classifier_ || !motifs_)) {
    return error_reply(503, "MissingDependency", "no classifier model or motif set is loaded");
  }

  const Json& docs = root.at("documents");
  std::vector<RewardRequest> requests(docs.size());
  std::vector<std::optional<OrderedJson>> early_errors(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    try {
      requests[i] = request_from_json(docs[i], mode, options_);
    } catch (const Error& e) {
      early_errors[i] = error_object(e.code(), e.what());
    } catch (const Json::exception& e) {
      early_errors[i] = error_object(ErrorCode::kMalformedInput, e.what());
    }
  }

  std::vector<RewardRequest> runnable;
  std::vector<std::size_t> slot;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!early_errors[i]) {
      runnable.push_back(std::move(requests[i]));
      slot.push_back(i);
    }
  }
  const auto items = compute_rewards_batch(runnable, dependencies(), reward, options_.workers);

  std::vector<OrderedJson> results(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (early_errors[i]) {
      results[i] = OrderedJson{{"doc_id", doc_id_of(docs[i])}, {"error", *early_errors[i]}};
    }
  }
  for (std::size_t j = 0; j < items.size(); ++j) {
    const std::size_t i = slot[j];
    const std::string id = runnable[j].doc_id;
    if (items[j].result) {
      results[i] = result_to_json(id, *items[j].result);
    } else {
      results[i] = OrderedJson{{"doc_id", id},
                               {"error", error_object(*items[j].error_code, items[j].error_message)}};
    }
  }

  OrderedJson out;
  out["results"] = results;
  return {200, out.dump()};
}

HttpReply ScoreService::handle_motifs(std::string_view body) const {
  auto parsed = documents_of(body);
  if (auto* reply = std::get_if<HttpReply>(&parsed)) return *reply;
  if (!motifs_) return error_reply(503, "MissingDependency", "no motif set is loaded");
  const Json& docs = std::get<Json>(parsed).at("documents");

  OrderedJson results = OrderedJson::array();
  for (const auto& entry : docs) {
    const std::string id = doc_id_of(entry);
    try {
      if (!entry.is_object() || !entry.contains("parse")) {
        throw Error(ErrorCode::kMalformedInput, "document needs a 'parse'");
      }
      const DiscourseDocument doc = parse_field(entry, id, options_.segment_policy);
      const auto counts = segment_motif_counts(doc, motifs_->k());
      const MotifVector vec = aggregate(counts, *motifs_);
      MotifCounts total;
      for (const auto& c : counts) total.merge(c);

      OrderedJson r;
      r["doc_id"] = id;
      r["vocab_fingerprint"] = vec.vocab_fingerprint;
      r["motif_vector"] = std::vector<double>(vec.values.begin(), vec.values.end() - 1);
      r["oov"] = vec.oov();
      r["total_motifs"] = total.total();
      OrderedJson counts_json = OrderedJson::object();
      for (const auto& [key, n] : total.entries()) counts_json[key] = n;
      r["counts"] = std::move(counts_json);
      results.push_back(std::move(r));
    } catch (const Error& e) {
      results.push_back(OrderedJson{{"doc_id", id}, {"error", error_object(e.code(), e.what())}});
    } catch (const Json::exception& e) {
      results.push_back(
          OrderedJson{{"doc_id", id}, {"error", error_object(ErrorCode::kMalformedInput, e.what())}});
    }
  }
  OrderedJson out;
  out["results"] = std::move(results);
  return {200, out.dump()};
}

HttpReply ScoreService::handle_health() const {
  OrderedJson out;
  out["status"] = "ok";
  out["version"] = kVersion;
  out["model_fingerprint"] = classifier_ ? Json(classifier_->vocab_fingerprint) : Json(nullptr);
  out["motif_fingerprint"] = motifs_ ? Json(motifs_->fingerprint()) : Json(nullptr);
  out["evaluator"] = static_cast<bool>(evaluator_);
  return {200, out.dump()};
}

ServiceSettings ServiceSettings::from_config(const KeyValueConfig& config) {
  ServiceSettings s;
  if (auto v = config.get("host")) s.host = *v;
  if (auto v = config.get_int("port")) s.port = static_cast<int>(*v);
  if (auto v = config.get("mode")) s.mode = parse_reward_mode(*v);
  if (auto v = config.get("model")) s.model_path = *v;
  if (auto v = config.get("motifs")) s.motifs_path = *v;
  if (auto v = config.get_int("desired_length")) {
    if (*v < 1) throw Error(ErrorCode::kInvalidArgument, "desired_length must be >= 1");
    s.desired_length = static_cast<std::size_t>(*v);
  }
  if (auto v = config.get_double("alpha")) s.alpha = *v;
  if (auto v = config.get_int("k")) s.k = static_cast<int>(*v);
  if (auto v = config.get("endpoint")) s.evaluator.endpoint = *v;
  if (auto v = config.get("evaluator_model")) s.evaluator.model = *v;
  if (auto v = config.get_int("timeout_ms")) s.evaluator.timeout = std::chrono::milliseconds(*v);
  if (auto v = config.get_int("max_retries")) s.evaluator.max_retries = static_cast<int>(*v);
  if (auto v = config.get_int("max_in_flight")) s.evaluator.max_in_flight = static_cast<int>(*v);
  if (auto v = config.get_double("temperature")) s.evaluator.temperature = *v;
  if (auto v = config.get_int("threads")) s.threads = static_cast<std::size_t>(std::max(1LL, *v));
  if (auto v = config.get_int("workers")) s.workers = static_cast<std::size_t>(std::max(1LL, *v));
  if (auto v = config.get("dense_normalizer")) {
    if (*v == "sequence") s.normalizer = DenseNormalizer::kSequenceLength;
    else if (*v == "motif") s.normalizer = DenseNormalizer::kMotifTokens;
    else throw Error(ErrorCode::kInvalidArgument, "dense_normalizer must be 'sequence' or 'motif'");
  }
  if (auto v = config.get_double("blend_weight")) s.blend_weight = *v;
  if (auto v = config.get_bool("enforce_segments")) s.enforce_segments = *v;
  return s;
}

ServiceOptions ServiceSettings::service_options() const {
  ServiceOptions o;
  o.reward.alpha = alpha;
  o.reward.normalizer = normalizer;
  o.reward.blend_weight = blend_weight;
  o.default_mode = mode;
  o.default_desired_length = desired_length;
  o.segment_policy.enforce = enforce_segments;
  o.workers = workers;
  return o;
}

}  // namespace discoreward
