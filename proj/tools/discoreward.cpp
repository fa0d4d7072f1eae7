// Command-line front end: corpus validation, motif-set and classifier
// building, batch scoring, the HTTP service, and CSV reports.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "discoreward/analysis.hpp"
#include "discoreward/authorship_model.hpp"
#include "discoreward/config.hpp"
#include "discoreward/document_io.hpp"
#include "discoreward/error.hpp"
#include "discoreward/motif_engine.hpp"
#include "discoreward/service.hpp"
#include "discoreward/version.hpp"

namespace dr = discoreward;
using Json = nlohmann::json;

namespace {

// Flags shared by every subcommand. Unset flags leave config values alone.
struct CommonFlags {
  std::string config_path;
  std::optional<std::string> mode;
  std::optional<std::string> model;
  std::optional<std::string> motifs;
  std::optional<long long> desired_length;
  std::optional<double> alpha;
  std::optional<std::string> endpoint;
  std::optional<int> port;
  std::optional<int> k;
};

void add_common_flags(CLI::App& app, CommonFlags& f) {
  app.add_option("--config", f.config_path, "key = value settings file")->check(CLI::ExistingFile);
  app.add_option("--mode", f.mode, "reward mode: surface, graph or blended");
  app.add_option("--model", f.model, "classifier model file");
  app.add_option("--motifs", f.motifs, "distinctive motif set file");
  app.add_option("--desired-length", f.desired_length, "desired response length in tokens");
  app.add_option("--alpha", f.alpha, "length penalty strength in [0, 1]");
  app.add_option("--endpoint", f.endpoint, "evaluator chat completions URL");
  app.add_option("--port", f.port, "HTTP port");
  app.add_option("--k", f.k, "motif size");
}

dr::ServiceSettings resolve_settings(const CommonFlags& f) {
  dr::KeyValueConfig config;
  if (!f.config_path.empty()) config = dr::KeyValueConfig::load(f.config_path);
  if (f.mode) config.set("mode", *f.mode);
  if (f.model) config.set("model", *f.model);
  if (f.motifs) config.set("motifs", *f.motifs);
  if (f.desired_length) config.set("desired_length", std::to_string(*f.desired_length));
  if (f.alpha) config.set("alpha", std::to_string(*f.alpha));
  if (f.endpoint) config.set("endpoint", *f.endpoint);
  if (f.port) config.set("port", std::to_string(*f.port));
  if (f.k) config.set("k", std::to_string(*f.k));
  auto settings = dr::ServiceSettings::from_config(config);
  if (f.alpha) settings.alpha = *f.alpha;  // avoid the decimal round trip
  return settings;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

dr::SegmentPolicy policy_of(const dr::ServiceSettings& s) {
  dr::SegmentPolicy p;
  p.enforce = s.enforce_segments;
  return p;
}

const std::string& require_path(const std::string& path, const char* what) {
  if (path.empty()) {
    throw dr::Error(dr::ErrorCode::kMissingDependency,
                    std::string("no ") + what + " file given (use --" + what + " or the config)");
  }
  return path;
}

std::ostream& output_stream(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw dr::Error(dr::ErrorCode::kIo, "cannot write '" + path + "'");
  return file;
}

std::vector<dr::MotifCounts> corpus_counts(const std::vector<dr::DiscourseDocument>& docs, int k) {
  std::vector<dr::MotifCounts> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(dr::document_motif_counts(d, k));
  return out;
}

int run_validate(const std::vector<std::string>& files, const dr::ServiceSettings& settings) {
  std::size_t records = 0;
  std::size_t invalid = 0;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw dr::Error(dr::ErrorCode::kIo, "cannot open '" + path + "'");
    for (const auto& line : dr::read_corpus_lines(in, policy_of(settings))) {
      ++records;
      if (line.error_code) {
        ++invalid;
        std::cout << path << ":" << line.line_number << ": " << dr::error_code_name(*line.error_code)
                  << ": " << line.error_message << "\n";
      }
    }
  }
  std::cout << records << " records, " << invalid << " invalid\n";
  return invalid == 0 ? 0 : 1;
}

int run_distinctive(const std::string& corpus, const std::string& out_path,
                    const dr::ServiceSettings& settings) {
  const auto docs = dr::load_corpus(corpus, policy_of(settings));
  std::vector<dr::MotifCounts> human;
  std::vector<dr::MotifCounts> machine;
  for (const auto& d : docs) {
    if (d.author_label == dr::AuthorLabel::kHuman) human.push_back(dr::document_motif_counts(d, settings.k));
    if (d.author_label == dr::AuthorLabel::kMachine) machine.push_back(dr::document_motif_counts(d, settings.k));
  }
  const auto dset = dr::compute_distinctive(human, machine, settings.k);
  dr::save_motif_set(dset, out_path);
  std::cout << "vocabulary " << dset.size() << ", distinctive " << dset.distinctive_keys().size()
            << ", threshold " << format_double(dset.threshold()) << ", fingerprint "
            << dset.fingerprint() << "\n";
  return 0;
}

int run_train(const std::string& corpus, const std::string& out_path, const dr::TrainingConfig& training,
              const dr::ServiceSettings& settings) {
  const auto dset = dr::load_motif_set(require_path(settings.motifs_path, "motifs"));
  const auto docs = dr::load_corpus(corpus, policy_of(settings));
  std::vector<dr::LabeledExample> examples;
  for (const auto& d : docs) {
    if (d.author_label != dr::AuthorLabel::kHuman && d.author_label != dr::AuthorLabel::kMachine) continue;
    dr::LabeledExample e;
    e.motifs = dr::aggregate(dr::segment_motif_counts(d, dset.k()), dset);
    e.human = d.author_label == dr::AuthorLabel::kHuman;
    examples.push_back(std::move(e));
  }
  const auto model = dr::train(examples, training);
  std::size_t correct = 0;
  for (const auto& e : examples) correct += (dr::predict(model, e.motifs).p_human > 0.5) == e.human;
  dr::save_model(model, out_path);
  std::cout << "examples " << examples.size() << ", training accuracy "
            << format_double(static_cast<double>(correct) / static_cast<double>(examples.size())) << "\n";
  return 0;
}

std::shared_ptr<dr::ScoreService> make_service(const dr::ServiceSettings& settings) {
  std::shared_ptr<const dr::DistinctiveMotifSet> motifs;
  std::shared_ptr<const dr::ClassifierModel> classifier;
  if (!settings.motifs_path.empty()) {
    motifs = std::make_shared<const dr::DistinctiveMotifSet>(dr::load_motif_set(settings.motifs_path));
  }
  if (!settings.model_path.empty()) {
    classifier = motifs ? std::make_shared<const dr::ClassifierModel>(dr::load_model(settings.model_path, *motifs))
                        : std::make_shared<const dr::ClassifierModel>(dr::load_model(settings.model_path));
  }
  std::shared_ptr<dr::EvaluatorClient> evaluator;
  if (!settings.evaluator.endpoint.empty()) evaluator = dr::EvaluatorClient::over_http(settings.evaluator);
  return std::make_shared<dr::ScoreService>(classifier, motifs, evaluator, settings.service_options());
}

// A score input is either a request body (one JSON object with "documents")
// or a corpus file with one document record per line.
std::string score_body_from_file(const std::string& path, const std::optional<std::string>& instruction) {
  std::ifstream in(path);
  if (!in) throw dr::Error(dr::ErrorCode::kIo, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  const Json whole = Json::parse(content, nullptr, false);
  if (whole.is_object() && whole.contains("documents")) return content;

  Json docs = Json::array();
  std::istringstream lines(content);
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record = Json::parse(line, nullptr, false);
    if (!record.is_object()) {
      throw dr::Error(dr::ErrorCode::kMalformedInput, path + ":" + std::to_string(number) + ": not a JSON object");
    }
    Json entry;
    entry["doc_id"] = record.value("doc_id", "");
    entry["text"] = record.value("text", "");
    if (record.contains("tokens")) entry["tokens"] = record["tokens"];
    if (record.contains("segments")) entry["parse"] = record;
    if (instruction) entry["instruction"] = *instruction;
    docs.push_back(std::move(entry));
  }
  return Json{{"documents", std::move(docs)}}.dump();
}

int run_score(const std::string& input, const std::string& out_path,
              const std::optional<std::string>& instruction, const dr::ServiceSettings& settings) {
  const auto service = make_service(settings);
  const auto reply = service->handle_score(score_body_from_file(input, instruction));
  if (reply.status != 200) {
    std::cerr << "error (" << reply.status << "): " << reply.body << "\n";
    return 1;
  }
  std::ofstream file;
  std::ostream& out = output_stream(out_path, file);
  int failures = 0;
  const auto response = nlohmann::ordered_json::parse(reply.body);
  for (const auto& result : response.at("results")) {
    failures += result.contains("error");
    out << result.dump() << "\n";
  }
  return failures == 0 ? 0 : 1;
}

int run_serve(const dr::ServiceSettings& settings) {
  const auto service = make_service(settings);
  dr::HttpServer server(service, settings.threads);
  std::cerr << "discoreward " << dr::kVersion << " serving on " << settings.host << ":" << settings.port
            << "\n";
  server.run(settings.host, settings.port);
  return 0;
}

int run_report_trend(const std::vector<std::string>& batches, const std::string& out_path,
                     const dr::ServiceSettings& settings) {
  const auto dset = dr::load_motif_set(require_path(settings.motifs_path, "motifs"));
  std::vector<std::vector<dr::MotifCounts>> counts;
  for (const auto& path : batches) counts.push_back(corpus_counts(dr::load_corpus(path, policy_of(settings)), dset.k()));
  std::ofstream file;
  std::ostream& out = output_stream(out_path, file);
  out << "batch_index,proportion,empty\n";
  for (const auto& p : dr::motif_trend(counts, dset)) {
    out << p.batch_index << "," << format_double(p.proportion) << "," << (p.empty ? 1 : 0) << "\n";
  }
  return 0;
}

dr::MotifVector corpus_vector(const std::string& path, const dr::DistinctiveMotifSet& dset,
                              const dr::ServiceSettings& settings) {
  std::vector<dr::MotifCounts> segments;
  for (const auto& d : dr::load_corpus(path, policy_of(settings))) {
    for (auto& c : dr::segment_motif_counts(d, dset.k())) segments.push_back(std::move(c));
  }
  return dr::aggregate(segments, dset);
}

int run_report_diff(const std::string& before, const std::string& after, const std::string& out_path,
                    const dr::ServiceSettings& settings) {
  const auto dset = dr::load_motif_set(require_path(settings.motifs_path, "motifs"));
  const auto rows = dr::distribution_diff(corpus_vector(before, dset, settings),
                                          corpus_vector(after, dset, settings), dset);
  std::ofstream file;
  std::ostream& out = output_stream(out_path, file);
  out << "key,before,after,delta\n";
  for (const auto& r : rows) {
    std::string key = r.key;
    if (key.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : key) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      key = quoted + "\"";
    }
    out << key << "," << format_double(r.before) << "," << format_double(r.after) << ","
        << format_double(r.delta) << "\n";
  }
  return 0;
}

int run_corr(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dr::Error(dr::ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<double> xs;
  std::vector<double> ys;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream fields(line);
    std::string a;
    std::string b;
    std::string extra;
    if (!(fields >> a)) continue;
    const bool two = static_cast<bool>(fields >> b) && !(fields >> extra);
    double x = 0.0;
    double y = 0.0;
    const auto px = std::from_chars(a.data(), a.data() + a.size(), x);
    const auto py = std::from_chars(b.data(), b.data() + b.size(), y);
    const bool numeric = two && px.ec == std::errc{} && px.ptr == a.data() + a.size() &&
                         py.ec == std::errc{} && py.ptr == b.data() + b.size();
    if (!numeric) {
      if (xs.empty() && ys.empty() && two) continue;  // header row
      throw dr::Error(dr::ErrorCode::kMalformedInput,
                      path + ":" + std::to_string(number) + ": expected two numeric columns");
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  const double r = dr::pearson(xs, ys);
  std::cout << "n=" << xs.size() << " r=" << format_double(r) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discourse-structure reward engine"};
  app.set_version_flag("--version", std::string(dr::kVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  int exit_code = 0;
  std::function<int(const dr::ServiceSettings&)> action;

  std::vector<std::string> validate_files;
  auto* validate = app.add_subcommand("validate", "Check corpus files against the document schema");
  validate->add_option("files", validate_files, "corpus files")->required()->check(CLI::ExistingFile);
  add_common_flags(*validate, flags);
  validate->callback([&] { action = [&](const auto& s) { return run_validate(validate_files, s); }; });

  std::string corpus;
  std::string output;
  auto* distinctive = app.add_subcommand("distinctive", "Build a distinctive motif set from a labeled corpus");
  distinctive->add_option("corpus", corpus, "labeled corpus")->required()->check(CLI::ExistingFile);
  distinctive->add_option("-o,--output", output, "motif set file to write")->required();
  add_common_flags(*distinctive, flags);
  distinctive->callback([&] { action = [&](const auto& s) { return run_distinctive(corpus, output, s); }; });

  dr::TrainingConfig training;
  auto* train = app.add_subcommand("train", "Train the authorship classifier");
  train->add_option("corpus", corpus, "labeled corpus")->required()->check(CLI::ExistingFile);
  train->add_option("-o,--output", output, "model file to write")->required();
  train->add_option("--epochs", training.epochs, "gradient descent epochs")->capture_default_str();
  train->add_option("--learning-rate", training.learning_rate, "step size")->capture_default_str();
  train->add_option("--l2", training.l2, "L2 penalty on the weights")->capture_default_str();
  train->add_option("--seed", training.seed, "initialization seed")->capture_default_str();
  add_common_flags(*train, flags);
  train->callback([&] { action = [&](const auto& s) { return run_train(corpus, output, training, s); }; });

  std::optional<std::string> instruction;
  auto* score = app.add_subcommand("score", "Score documents and print one reward tensor per line");
  score->add_option("input", corpus, "corpus file or score request body")->required()->check(CLI::ExistingFile);
  score->add_option("-o,--output", output, "result file (default stdout)");
  score->add_option("--instruction", instruction, "instruction attached to every corpus document");
  add_common_flags(*score, flags);
  score->callback([&] { action = [&](const auto& s) { return run_score(corpus, output, instruction, s); }; });

  auto* serve = app.add_subcommand("serve", "Run the HTTP scoring service");
  add_common_flags(*serve, flags);
  serve->callback([&] { action = [&](const auto& s) { return run_serve(s); }; });

  auto* report = app.add_subcommand("report", "Emit CSV reports");
  report->require_subcommand(1);
  std::vector<std::string> batches;
  auto* trend = report->add_subcommand("trend", "Distinctive motif share per batch");
  trend->add_option("batches", batches, "one corpus file per batch")->required()->check(CLI::ExistingFile);
  trend->add_option("-o,--output", output, "CSV file (default stdout)");
  add_common_flags(*trend, flags);
  trend->callback([&] { action = [&](const auto& s) { return run_report_trend(batches, output, s); }; });

  std::string before;
  std::string after;
  auto* diff = report->add_subcommand("diff", "Motif distribution change between two corpora");
  diff->add_option("before", before, "corpus before")->required()->check(CLI::ExistingFile);
  diff->add_option("after", after, "corpus after")->required()->check(CLI::ExistingFile);
  diff->add_option("-o,--output", output, "CSV file (default stdout)");
  add_common_flags(*diff, flags);
  diff->callback([&] { action = [&](const auto& s) { return run_report_diff(before, after, output, s); }; });

  std::string pairs;
  auto* corr = app.add_subcommand("corr", "Pearson correlation of a two-column file");
  corr->add_option("file", pairs, "two numeric columns")->required()->check(CLI::ExistingFile);
  corr->callback([&] { action = [&](const auto&) { return run_corr(pairs); }; });

  CLI11_PARSE(app, argc, argv);

  try {
    exit_code = action(resolve_settings(flags));
  } catch (const dr::Error& e) {
    std::cerr << "error: " << dr::error_code_name(e.code()) << ": " << e.what() << "\n";
    exit_code = 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    exit_code = 2;
  }
  return exit_code;
}
