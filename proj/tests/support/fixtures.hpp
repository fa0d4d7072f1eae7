#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "discoreward/authorship_model.hpp"
#include "discoreward/discourse_tree.hpp"
#include "discoreward/motif_engine.hpp"

namespace discoreward::testing {

// Single-segment document whose EDUs are `edu_texts` joined by single spaces.
DiscourseDocument doc_from_edus(const std::string& id, const std::vector<std::string>& edu_texts,
                                DiscourseNode tree,
                                std::optional<AuthorLabel> label = std::nullopt);

// Random document with `segments` segments, each holding a random tree over
// 1..max_edus EDUs of a few words each. Segment sizes are not policy-checked.
DiscourseDocument random_document(std::mt19937_64& rng, const std::string& id,
                                  std::size_t segments, std::size_t max_edus);

MotifCounts counts(std::initializer_list<std::pair<std::string, std::uint64_t>> entries);

// Vocabulary over `keys` (sorted internally) where exactly `distinctive` are
// flagged distinctive.
DistinctiveMotifSet make_vocab(std::vector<std::string> keys,
                               const std::vector<std::string>& distinctive, int k = 3);

// Example tree Elaboration(N=leaf0, S=Joint(N=leaf1, N=leaf2)).
DiscourseNode elaboration_joint_tree();

// 100 human then 100 machine examples over `vocab` (which must contain A and
// B). Motif A appears five times as often in human documents.
std::vector<LabeledExample> synthetic_authorship_corpus(const DistinctiveMotifSet& vocab,
                                                        std::uint64_t seed);

std::string words(std::size_t n, const std::string& stem = "w");

}  // namespace discoreward::testing
