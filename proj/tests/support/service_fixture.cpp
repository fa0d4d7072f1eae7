#include "service_fixture.hpp"

#include <random>

#include <nlohmann/json.hpp>

#include "discoreward/document_io.hpp"
#include "fixtures.hpp"

namespace discoreward::testing {

ServiceFixture make_service_fixture(std::uint64_t seed, std::size_t documents) {
  std::mt19937_64 rng(seed);
  std::vector<MotifCounts> human;
  std::vector<MotifCounts> machine;
  std::vector<DiscourseDocument> training;
  for (int i = 0; i < 40; ++i) {
    training.push_back(random_document(rng, "train" + std::to_string(i), 1, 8));
    (i % 2 == 0 ? human : machine).push_back(document_motif_counts(training.back(), 3));
  }
  auto motifs = std::make_shared<DistinctiveMotifSet>(compute_distinctive(human, machine, 3));

  std::vector<LabeledExample> examples;
  for (std::size_t i = 0; i < training.size(); ++i) {
    examples.push_back({aggregate(segment_motif_counts(training[i], 3), *motifs), {}, i % 2 == 0});
  }
  TrainingConfig cfg;
  cfg.epochs = 200;
  auto classifier = std::make_shared<ClassifierModel>(train(examples, cfg));

  ServiceFixture f;
  f.motifs = motifs;
  f.classifier = classifier;
  for (std::size_t i = 0; i < documents; ++i) {
    f.documents.push_back(random_document(rng, "doc" + std::to_string(i), 1, 8));
  }
  return f;
}

std::string score_body(const std::vector<DiscourseDocument>& docs, const std::string& mode,
                       std::optional<std::size_t> malformed) {
  nlohmann::json body;
  body["mode"] = mode;
  body["client_tag"] = "ignored";
  auto list = nlohmann::json::array();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    nlohmann::json parse = nlohmann::json::parse(serialize_document(docs[i]));
    parse.erase("doc_id");
    parse.erase("text");
    if (malformed && *malformed == i) {
      parse["segments"][0]["tree"] = {
          {"relation", "Contrast"},
          {"children",
           {{{"nuclearity", "S"}, {"node", {{"edu", 0}}}},
            {{"nuclearity", "S"}, {"node", {{"edu", 1}}}}}}};
    }
    list.push_back({{"doc_id", docs[i].doc_id},
                    {"text", docs[i].source_text},
                    {"instruction", "Write a short essay."},
                    {"parse", parse}});
  }
  body["documents"] = list;
  return body.dump();
}

RewardResult direct_result(const DiscourseDocument& doc, RewardMode mode,
                           const RewardDependencies& deps, const ServiceOptions& options) {
  RewardRequest req;
  req.doc_id = doc.doc_id;
  req.text = doc.source_text;
  req.document = parse_document(serialize_document(doc), DocumentFormat::kJsonLine,
                                options.segment_policy);
  req.desired_length = options.default_desired_length;
  req.mode = mode;
  req.instruction = "Write a short essay.";
  return compute_rewards(req, deps, options.reward);
}

std::string compare_result(const std::string& result_json, const RewardResult& expected) {
  const auto r = nlohmann::json::parse(result_json);
  if (r.contains("error")) return "unexpected error " + r.at("error").dump();
  if (r.at("episodic").get<double>() != expected.tensor.episodic) return "episodic differs";
  if (r.at("num_tokens").get<std::size_t>() != expected.tensor.size()) return "length differs";
  const auto& dense = r.at("dense");
  if (dense.size() != expected.tensor.dense_indices.size()) return "dense count differs";
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i].at("index").get<std::size_t>() != expected.tensor.dense_indices[i]) {
      return "dense index differs";
    }
    if (dense[i].at("value").get<double>() != expected.tensor.dense_value) {
      return "dense value differs";
    }
  }
  const auto& diag = r.at("diagnostics");
  if (diag.at("raw_episodic").get<double>() != expected.diagnostics.raw_episodic) {
    return "raw episodic differs";
  }
  if (expected.diagnostics.graph &&
      diag.at("p_human").get<double>() != expected.diagnostics.graph->p_human) {
    return "p_human differs";
  }
  return {};
}

}  // namespace discoreward::testing
