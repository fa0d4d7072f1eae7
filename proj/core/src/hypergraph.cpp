#include "discoreward/hypergraph.hpp"

#include <algorithm>

namespace discoreward {
namespace {

void transcribe(const DiscourseNode& node, std::size_t parent, Nuclearity nuclearity,
                HyperGraph& graph) {
  HyperNode h;
  if (node.is_leaf()) {
    h.kind = HyperNodeKind::kEduLeaf;
    h.label = "LEAF";
    h.edu = node.edu();
  } else {
    h.kind = HyperNodeKind::kRelationEdge;
    h.label = node.label();
    h.arity = node.children().size();
    h.multinuclear = std::count_if(node.children().begin(), node.children().end(),
                                   [](const DiscourseChild& c) {
                                     return c.nuclearity == Nuclearity::kNucleus;
                                   }) > 1;
  }
  const std::size_t id = graph.add_node(std::move(h), parent, nuclearity);
  for (const auto& child : node.children()) transcribe(child.node, id, child.nuclearity, graph);
}

}  // namespace

std::size_t HyperGraph::add_node(HyperNode node, std::size_t parent, Nuclearity nuclearity) {
  const std::size_t id = nodes_.size();
  nodes_.push_back(std::move(node));
  children_.emplace_back();
  parent_.push_back(parent);
  if (parent != kNoParent) children_[parent].push_back({id, nuclearity});
  return id;
}

HyperGraph build_hypergraph(const DiscourseNode& tree) {
  HyperGraph graph;
  transcribe(tree, HyperGraph::kNoParent, Nuclearity::kNucleus, graph);
  return graph;
}

}  // namespace discoreward
