#include "fixtures.hpp"

#include <algorithm>

#include "../oracles/motif_oracle.hpp"

namespace discoreward::testing {

DiscourseDocument doc_from_edus(const std::string& id, const std::vector<std::string>& edu_texts,
                                DiscourseNode tree, std::optional<AuthorLabel> label) {
  std::string text;
  SegmentSpec spec;
  for (const auto& e : edu_texts) {
    if (!text.empty()) text += ' ';
    spec.edu_spans.push_back({text.size(), text.size() + e.size()});
    text += e;
  }
  spec.chars = {0, text.size()};
  spec.tree = std::move(tree);
  return build_document(id, text, {std::move(spec)}, label);
}

DiscourseDocument random_document(std::mt19937_64& rng, const std::string& id,
                                  std::size_t segments, std::size_t max_edus) {
  static const std::vector<std::string> vocab = {"the", "cat", "sat", "because", "rain",
                                                 "however", "we", "argue", "that", "ideas"};
  std::string text;
  std::vector<SegmentSpec> specs;
  for (std::size_t s = 0; s < segments; ++s) {
    SegmentSpec spec;
    spec.chars.begin = text.size();
    const std::size_t edus = std::uniform_int_distribution<std::size_t>(1, max_edus)(rng);
    for (std::size_t e = 0; e < edus; ++e) {
      if (!text.empty()) text += ' ';
      const std::size_t begin = text.size();
      const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
      for (std::size_t w = 0; w < n; ++w) {
        if (w) text += ' ';
        text += vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
      }
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) text += ",";
      spec.edu_spans.push_back({begin, text.size()});
    }
    spec.tree = oracle::random_tree(rng, edus);
    specs.push_back(std::move(spec));
  }
  for (std::size_t s = 0; s < specs.size(); ++s) {
    specs[s].chars.end = s + 1 < specs.size() ? specs[s + 1].chars.begin : text.size();
  }
  SegmentPolicy relaxed;
  relaxed.enforce = false;
  return build_document(id, text, std::move(specs), std::nullopt, std::nullopt, relaxed);
}

MotifCounts counts(std::initializer_list<std::pair<std::string, std::uint64_t>> entries) {
  MotifCounts c;
  for (const auto& [k, n] : entries) c.add(k, n);
  return c;
}

DistinctiveMotifSet make_vocab(std::vector<std::string> keys,
                               const std::vector<std::string>& distinctive, int k) {
  std::sort(keys.begin(), keys.end());
  std::vector<MotifStats> entries;
  for (const auto& key : keys) {
    MotifStats s;
    s.key = key;
    s.document_frequency = 1;
    s.idf = 1.0;
    const bool d = std::find(distinctive.begin(), distinctive.end(), key) != distinctive.end();
    s.delta = d ? 1.0 : 0.0;
    s.human_mean = s.delta;
    s.distinctive = d;
    entries.push_back(std::move(s));
  }
  return DistinctiveMotifSet(k, std::move(entries), 0.0, 0.5, 1, 1);
}

DiscourseNode elaboration_joint_tree() {
  return DiscourseNode::relation(
      "Elaboration",
      {nucleus(DiscourseNode::leaf(0)),
       satellite(DiscourseNode::relation(
           "Joint", {nucleus(DiscourseNode::leaf(1)), nucleus(DiscourseNode::leaf(2))}))});
}

std::vector<LabeledExample> synthetic_authorship_corpus(const DistinctiveMotifSet& vocab,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> human_a(25.0);
  std::poisson_distribution<int> machine_a(5.0);
  std::poisson_distribution<int> other(50.0);
  std::poisson_distribution<int> unseen(8.0);
  std::vector<LabeledExample> out;
  for (int i = 0; i < 200; ++i) {
    const bool human = i < 100;
    MotifCounts c;
    c.add("A", static_cast<std::uint64_t>(human ? human_a(rng) : machine_a(rng)));
    c.add("B", static_cast<std::uint64_t>(other(rng)));
    c.add("Z", static_cast<std::uint64_t>(unseen(rng)));
    const std::vector<MotifCounts> segs = {c};
    out.push_back({aggregate(segs, vocab), {}, human});
  }
  return out;
}

std::string words(std::size_t n, const std::string& stem) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += stem + std::to_string(i);
  }
  return out;
}

}  // namespace discoreward::testing
