#pragma once

#include <map>
#include <string>
#include <vector>

#include "stcausal/em.hpp"

namespace stcausal {

struct PathwayNode {
  int sensor = -1;
  int category = -1;
  bool operator<(const PathwayNode& o) const {
    return sensor != o.sensor ? sensor < o.sensor : category < o.category;
  }
  bool operator==(const PathwayNode&) const = default;
};

struct PathwayEdge {
  int from = -1;  // node indices; edge points cause -> effect
  int to = -1;
  int cluster = 0;
  double weight = 0.0;  // originating cluster's weight
  int hop = 1;
};

struct PathwayGraph {
  std::vector<PathwayNode> nodes;
  std::vector<PathwayEdge> edges;
  int root = 0;
};

// A trained model plus its held-out accuracies; expansion stops at nodes
// where the local-only model beats the full one.
struct NodeModel {
  CausalModel model;
  double full_accuracy = 0.0;
  double local_accuracy = 0.0;
};

// Breadth-first multi-hop expansion from the root; each node is expanded at
// most once and edges never exceed max_hops. Reaching a node with no model
// throws Errc::MissingModel.
PathwayGraph expand_pathway(const std::map<PathwayNode, NodeModel>& models,
                            PathwayNode root, int max_hops = 3);

std::string pathway_to_dot(const PathwayGraph& graph,
                           const std::vector<SensorMeta>& sensors);

}  // namespace stcausal
