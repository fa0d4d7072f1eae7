#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discoreward/discourse_tree.hpp"
#include "discoreward/hypergraph.hpp"

namespace discoreward {

inline constexpr int kDefaultMotifSize = 3;
inline constexpr int kMaxMotifSize = 5;
inline constexpr std::string_view kLeafLabel = "LEAF";
inline constexpr std::string_view kOovKey = "<OOV>";

// Rooted labeled pattern; nodes[0] is the root.
struct PatternNode {
  std::string label;  // relation name or "LEAF"
  bool leaf = false;
  bool multinuclear = false;
  std::vector<std::pair<Nuclearity, std::size_t>> children;
};

struct MotifPattern {
  std::vector<PatternNode> nodes;
};

// Canonical string for a pattern, independent of sibling order. Grammar:
//   node  := label ['*'] ['(' child (',' child)* ')']
//   child := ('N' | 'S') ':' node
// Children are sorted by their encoded string, '*' marks a multinuclear
// relation and labels escape the characters \ ( ) , : * with a backslash.
std::string canonicalize(const MotifPattern& pattern);

// One occurrence of a size-k motif: `nodes` lists graph node ids with the
// pattern root first.
struct MotifInstance {
  std::vector<std::size_t> nodes;
  std::string key;
};

// Calls `visit` once per connected rooted subpattern with exactly k nodes.
// Throws kInvalidK unless 2 <= k <= kMaxMotifSize.
void for_each_motif_instance(const HyperGraph& graph, int k,
                             const std::function<void(const MotifInstance&)>& visit);

// Sparse motif histogram. Zero counts are never stored.
class MotifCounts {
 public:
  void add(const std::string& key, std::uint64_t n = 1);
  void merge(const MotifCounts& other);

  std::uint64_t count(const std::string& key) const;
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return counts_.empty(); }
  const std::map<std::string, std::uint64_t>& entries() const noexcept { return counts_; }

  friend bool operator==(const MotifCounts&, const MotifCounts&) = default;

 private:
  std::map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

MotifCounts enumerate_motifs(const HyperGraph& graph, int k = kDefaultMotifSize);

// Per-segment counts of a parsed document.
std::vector<MotifCounts> segment_motif_counts(const DiscourseDocument& doc,
                                              int k = kDefaultMotifSize);

// Counts summed over all segments.
MotifCounts document_motif_counts(const DiscourseDocument& doc, int k = kDefaultMotifSize);

struct MotifStats {
  std::string key;
  std::size_t document_frequency = 0;
  double idf = 0.0;
  double human_mean = 0.0;    // mean MF-IDF over human documents
  double machine_mean = 0.0;  // mean MF-IDF over machine documents
  double delta = 0.0;         // human_mean - machine_mean
  bool distinctive = false;

  friend bool operator==(const MotifStats&, const MotifStats&) = default;
};

// Motif vocabulary with MF-IDF statistics and the human-distinctive subset.
class DistinctiveMotifSet {
 public:
  DistinctiveMotifSet() = default;
  // Entries must be sorted by key without duplicates and their distinctive
  // flags must agree with delta > threshold; otherwise kInvariantViolation.
  DistinctiveMotifSet(int k, std::vector<MotifStats> entries, double mean_delta,
                      double std_delta, std::size_t human_documents,
                      std::size_t machine_documents);

  int k() const noexcept { return k_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<MotifStats>& entries() const noexcept { return entries_; }
  std::vector<std::string> vocabulary() const;
  std::vector<std::string> distinctive_keys() const;

  std::optional<std::size_t> index_of(std::string_view key) const;
  bool is_distinctive(std::string_view key) const;

  double mean_delta() const noexcept { return mean_delta_; }
  double std_delta() const noexcept { return std_delta_; }
  double threshold() const noexcept { return mean_delta_ + std_delta_; }
  std::size_t human_documents() const noexcept { return human_documents_; }
  std::size_t machine_documents() const noexcept { return machine_documents_; }

  // FNV-1a 64 over k and the ordered vocabulary, as 16 hex digits.
  const std::string& fingerprint() const noexcept { return fingerprint_; }

  friend bool operator==(const DistinctiveMotifSet&, const DistinctiveMotifSet&) = default;

 private:
  int k_ = kDefaultMotifSize;
  std::vector<MotifStats> entries_;
  double mean_delta_ = 0.0;
  double std_delta_ = 0.0;
  std::size_t human_documents_ = 0;
  std::size_t machine_documents_ = 0;
  std::string fingerprint_;
};

std::string vocabulary_fingerprint(int k, std::span<const std::string> vocabulary);

// MF(m,d) = count/total, IDF(m) = ln(N / (1 + df(m))) + 1 over all N documents,
// delta = mean human MF-IDF - mean machine MF-IDF, and a motif is distinctive
// when delta > mean(delta) + population stddev(delta). Throws kEmptyCorpus
// unless both classes have at least one document.
DistinctiveMotifSet compute_distinctive(std::span<const MotifCounts> human_docs,
                                        std::span<const MotifCounts> machine_docs,
                                        int k = kDefaultMotifSize);

// L1-normalized motif distribution over a frozen vocabulary; the final entry
// is the out-of-vocabulary bucket.
struct MotifVector {
  std::vector<double> values;
  std::string vocab_fingerprint;

  std::size_t vocabulary_size() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double oov() const { return values.back(); }

  friend bool operator==(const MotifVector&, const MotifVector&) = default;
};

MotifVector aggregate(std::span<const MotifCounts> segments, const DistinctiveMotifSet& vocab);

// Sorted token indices of every EDU that is a leaf of at least one distinctive
// motif instance.
std::vector<std::size_t> motif_token_indices(const DiscourseDocument& doc, const EduTokenMap& map,
                                             const DistinctiveMotifSet& dset, int k);

// Persistence of the motif set (versioned JSON, see docs/file_formats.md).
std::string serialize_motif_set(const DistinctiveMotifSet& dset);
DistinctiveMotifSet parse_motif_set(std::string_view text);
void save_motif_set(const DistinctiveMotifSet& dset, const std::string& path);
DistinctiveMotifSet load_motif_set(const std::string& path);

}  // namespace discoreward
