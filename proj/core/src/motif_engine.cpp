#include "discoreward/motif_engine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "discoreward/error.hpp"

namespace discoreward {
namespace {

std::string escape_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    if (c == '\\' || c == '(' || c == ')' || c == ',' || c == ':' || c == '*') out += '\\';
    out += c;
  }
  // Keep a relation literally named LEAF distinct from an EDU leaf.
  if (out == kLeafLabel) out.insert(out.begin(), '\\');
  return out;
}

std::string encode(const MotifPattern& pattern, std::size_t i) {
  const PatternNode& node = pattern.nodes[i];
  std::string out = node.leaf ? std::string(kLeafLabel) : escape_label(node.label);
  if (!node.leaf && node.multinuclear) out += '*';
  if (node.children.empty()) return out;

  std::vector<std::string> parts;
  parts.reserve(node.children.size());
  for (const auto& [nuclearity, child] : node.children) {
    parts.push_back(std::string(to_string(nuclearity)) + ":" + encode(pattern, child));
  }
  std::sort(parts.begin(), parts.end());
  out += '(';
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (p > 0) out += ',';
    out += parts[p];
  }
  out += ')';
  return out;
}

MotifPattern pattern_of(const HyperGraph& graph, const std::vector<std::size_t>& nodes) {
  MotifPattern pattern;
  pattern.nodes.resize(nodes.size());
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < nodes.size(); ++i) slot.emplace(nodes[i], i);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const HyperNode& h = graph.node(nodes[i]);
    PatternNode& p = pattern.nodes[i];
    p.leaf = h.kind == HyperNodeKind::kEduLeaf;
    p.label = h.label;
    p.multinuclear = h.multinuclear;
    for (const auto& child : graph.children(nodes[i])) {
      if (const auto it = slot.find(child.node); it != slot.end()) {
        p.children.emplace_back(child.nuclearity, it->second);
      }
    }
  }
  return pattern;
}

// Each connected rooted subtree is reached by exactly one include/exclude
// decision sequence over the growing frontier.
class InstanceEnumerator {
 public:
  InstanceEnumerator(const HyperGraph& graph, std::size_t k,
                     const std::function<void(const MotifInstance&)>& visit)
      : graph_(graph), k_(k), visit_(visit) {}

  void run(std::size_t root) {
    chosen_.assign(1, root);
    frontier_.clear();
    for (const auto& c : graph_.children(root)) frontier_.push_back(c.node);
    extend(0);
  }

 private:
  void extend(std::size_t pos) {
    if (chosen_.size() == k_) {
      MotifInstance instance;
      instance.nodes = chosen_;
      instance.key = canonicalize(pattern_of(graph_, chosen_));
      visit_(instance);
      return;
    }
    if (pos == frontier_.size()) return;

    const std::size_t v = frontier_[pos];
    const std::size_t frontier_size = frontier_.size();
    chosen_.push_back(v);
    for (const auto& c : graph_.children(v)) frontier_.push_back(c.node);
    extend(pos + 1);
    frontier_.resize(frontier_size);
    chosen_.pop_back();

    extend(pos + 1);
  }

  const HyperGraph& graph_;
  std::size_t k_;
  const std::function<void(const MotifInstance&)>& visit_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> frontier_;
};

void check_k(int k) {
  if (k < 2 || k > kMaxMotifSize) {
    throw Error(ErrorCode::kInvalidK, "motif size must be in [2, " +
                                          std::to_string(kMaxMotifSize) + "], got " +
                                          std::to_string(k));
  }
}

}  // namespace

std::string canonicalize(const MotifPattern& pattern) {
  if (pattern.nodes.empty()) return {};
  return encode(pattern, 0);
}

void for_each_motif_instance(const HyperGraph& graph, int k,
                             const std::function<void(const MotifInstance&)>& visit) {
  check_k(k);
  InstanceEnumerator enumerator(graph, static_cast<std::size_t>(k), visit);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (graph.node(v).kind == HyperNodeKind::kRelationEdge) enumerator.run(v);
  }
}

void MotifCounts::add(const std::string& key, std::uint64_t n) {
  if (n == 0) return;
  counts_[key] += n;
  total_ += n;
}

void MotifCounts::merge(const MotifCounts& other) {
  for (const auto& [key, n] : other.counts_) add(key, n);
}

std::uint64_t MotifCounts::count(const std::string& key) const {
  const auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

MotifCounts enumerate_motifs(const HyperGraph& graph, int k) {
  MotifCounts counts;
  for_each_motif_instance(graph, k, [&](const MotifInstance& m) { counts.add(m.key); });
  return counts;
}

std::vector<MotifCounts> segment_motif_counts(const DiscourseDocument& doc, int k) {
  std::vector<MotifCounts> out;
  out.reserve(doc.segments.size());
  for (const auto& s : doc.segments) out.push_back(enumerate_motifs(build_hypergraph(s.tree), k));
  return out;
}

MotifCounts document_motif_counts(const DiscourseDocument& doc, int k) {
  MotifCounts total;
  for (const auto& c : segment_motif_counts(doc, k)) total.merge(c);
  return total;
}

std::string vocabulary_fingerprint(int k, std::span<const std::string> vocabulary) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  feed("k=" + std::to_string(k) + "\n");
  for (const auto& key : vocabulary) {
    feed(key);
    feed("\n");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
  return out;
}

DistinctiveMotifSet::DistinctiveMotifSet(int k, std::vector<MotifStats> entries,
                                         double mean_delta, double std_delta,
                                         std::size_t human_documents,
                                         std::size_t machine_documents)
    : k_(k),
      entries_(std::move(entries)),
      mean_delta_(mean_delta),
      std_delta_(std_delta),
      human_documents_(human_documents),
      machine_documents_(machine_documents) {
  check_k(k);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0 && !(entries_[i - 1].key < entries_[i].key)) {
      throw Error(ErrorCode::kInvariantViolation, "motif vocabulary is not sorted and unique");
    }
    if (entries_[i].distinctive != (entries_[i].delta > threshold())) {
      throw Error(ErrorCode::kInvariantViolation,
                  "distinctive flag of '" + entries_[i].key + "' disagrees with the threshold");
    }
  }
  fingerprint_ = vocabulary_fingerprint(k_, vocabulary());
}

std::vector<std::string> DistinctiveMotifSet::vocabulary() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.key);
  return out;
}

std::vector<std::string> DistinctiveMotifSet::distinctive_keys() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.distinctive) out.push_back(e.key);
  }
  return out;
}

std::optional<std::size_t> DistinctiveMotifSet::index_of(std::string_view key) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                   [](const MotifStats& s, std::string_view k) { return s.key < k; });
  if (it == entries_.end() || it->key != key) return std::nullopt;
  return static_cast<std::size_t>(it - entries_.begin());
}

bool DistinctiveMotifSet::is_distinctive(std::string_view key) const {
  const auto i = index_of(key);
  return i && entries_[*i].distinctive;
}

DistinctiveMotifSet compute_distinctive(std::span<const MotifCounts> human_docs,
                                        std::span<const MotifCounts> machine_docs, int k) {
  if (human_docs.empty() || machine_docs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "need at least one human and one machine document");
  }
  check_k(k);

  std::map<std::string, std::size_t> df;
  auto count_df = [&df](std::span<const MotifCounts> docs) {
    for (const auto& d : docs) {
      for (const auto& [key, n] : d.entries()) ++df[key];
    }
  };
  count_df(human_docs);
  count_df(machine_docs);

  const double n_docs = static_cast<double>(human_docs.size() + machine_docs.size());
  auto class_mean = [](std::span<const MotifCounts> docs, const std::string& key, double idf) {
    double sum = 0.0;
    for (const auto& d : docs) {
      if (d.total() == 0) continue;
      const double mf = static_cast<double>(d.count(key)) / static_cast<double>(d.total());
      sum += mf * idf;
    }
    return sum / static_cast<double>(docs.size());
  };

  std::vector<MotifStats> entries;
  entries.reserve(df.size());
  for (const auto& [key, frequency] : df) {
    MotifStats s;
    s.key = key;
    s.document_frequency = frequency;
    s.idf = std::log(n_docs / (1.0 + static_cast<double>(frequency))) + 1.0;
    s.human_mean = class_mean(human_docs, key, s.idf);
    s.machine_mean = class_mean(machine_docs, key, s.idf);
    s.delta = s.human_mean - s.machine_mean;
    entries.push_back(std::move(s));
  }

  double mean = 0.0;
  double stddev = 0.0;
  if (!entries.empty()) {
    for (const auto& e : entries) mean += e.delta;
    mean /= static_cast<double>(entries.size());
    double ss = 0.0;
    for (const auto& e : entries) ss += (e.delta - mean) * (e.delta - mean);
    stddev = std::sqrt(ss / static_cast<double>(entries.size()));
  }
  for (auto& e : entries) e.distinctive = e.delta > mean + stddev;

  return DistinctiveMotifSet(k, std::move(entries), mean, stddev, human_docs.size(),
                             machine_docs.size());
}

MotifVector aggregate(std::span<const MotifCounts> segments, const DistinctiveMotifSet& vocab) {
  MotifVector out;
  out.vocab_fingerprint = vocab.fingerprint();
  out.values.assign(vocab.size() + 1, 0.0);
  std::vector<std::uint64_t> sums(vocab.size() + 1, 0);
  std::uint64_t total = 0;
  for (const auto& counts : segments) {
    for (const auto& [key, n] : counts.entries()) {
      const auto i = vocab.index_of(key);
      sums[i ? *i : vocab.size()] += n;
      total += n;
    }
  }
  if (total == 0) return out;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    out.values[i] = static_cast<double>(sums[i]) / static_cast<double>(total);
  }
  return out;
}

std::vector<std::size_t> motif_token_indices(const DiscourseDocument& doc, const EduTokenMap& map,
                                             const DistinctiveMotifSet& dset, int k) {
  check_k(k);
  std::vector<bool> marked(doc.tokens.size(), false);
  if (dset.distinctive_keys().empty()) return {};

  std::size_t edu_offset = 0;
  for (const auto& segment : doc.segments) {
    const HyperGraph graph = build_hypergraph(segment.tree);
    for_each_motif_instance(graph, k, [&](const MotifInstance& m) {
      if (!dset.is_distinctive(m.key)) return;
      for (std::size_t v : m.nodes) {
        const HyperNode& node = graph.node(v);
        if (node.kind != HyperNodeKind::kEduLeaf) continue;
        const std::size_t edu = edu_offset + node.edu;
        if (edu >= map.edu_count()) continue;
        for (std::size_t t : map.tokens_of_edu[edu]) {
          if (t < marked.size()) marked[t] = true;
        }
      }
    });
    edu_offset += segment.edus.size();
  }

  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < marked.size(); ++t) {
    if (marked[t]) out.push_back(t);
  }
  return out;
}

}  // namespace discoreward
