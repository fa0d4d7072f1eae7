#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "discoreward/discourse_tree.hpp"

namespace discoreward {

enum class HyperNodeKind { kEduLeaf, kRelationEdge };

// A relation becomes a single hyperedge node joining all of its children, so
// multinuclear relations (Joint, List, ...) stay one unit regardless of arity.
struct HyperNode {
  HyperNodeKind kind = HyperNodeKind::kEduLeaf;
  std::string label;  // relation name, or "LEAF"
  std::size_t arity = 0;
  bool multinuclear = false;  // more than one Nucleus child
  std::size_t edu = 0;        // segment-local EDU index, leaves only
};

struct HyperChild {
  std::size_t node;
  Nuclearity nuclearity;
};

// Rooted, tree-shaped recursive hypergraph. Nodes are stored in preorder with
// the root at index 0.
class HyperGraph {
 public:
  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

  std::size_t size() const noexcept { return nodes_.size(); }
  const HyperNode& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<HyperChild>& children(std::size_t i) const { return children_[i]; }
  std::size_t parent(std::size_t i) const { return parent_[i]; }
  std::size_t root() const noexcept { return 0; }

  std::size_t add_node(HyperNode node, std::size_t parent, Nuclearity nuclearity);

 private:
  std::vector<HyperNode> nodes_;
  std::vector<std::vector<HyperChild>> children_;
  std::vector<std::size_t> parent_;
};

HyperGraph build_hypergraph(const DiscourseNode& tree);

}  // namespace discoreward
