#include "stcausal/pathway.hpp"

#include <deque>
#include <set>
#include <sstream>

#include "stcausal/error.hpp"

namespace stcausal {

PathwayGraph expand_pathway(const std::map<PathwayNode, NodeModel>& models,
                            PathwayNode root, int max_hops) {
  PathwayGraph graph;
  std::map<PathwayNode, int> node_index;
  auto index_of = [&](PathwayNode n) {
    auto it = node_index.find(n);
    if (it != node_index.end()) return it->second;
    int idx = static_cast<int>(graph.nodes.size());
    graph.nodes.push_back(n);
    node_index[n] = idx;
    return idx;
  };

  graph.root = index_of(root);
  std::set<PathwayNode> expanded;
  std::deque<std::pair<PathwayNode, int>> queue;  // (node, depth)
  queue.emplace_back(root, 0);
  std::set<std::tuple<int, int, int>> edge_seen;  // (from, to, cluster)

  while (!queue.empty()) {
    auto [node, depth] = queue.front();
    queue.pop_front();
    if (depth >= max_hops || expanded.count(node)) continue;
    expanded.insert(node);

    auto it = models.find(node);
    if (it == models.end())
      throw Error(Errc::MissingModel, "no model for sensor " +
                                          std::to_string(node.sensor) + " category " +
                                          std::to_string(node.category));
    const NodeModel& nm = it->second;
    // Local history explains the node better: the pathway stops here.
    if (nm.local_accuracy > nm.full_accuracy) continue;

    int to = index_of(node);
    for (int k = 0; k < nm.model.n_clusters; ++k) {
      const ParentSpec& parents = nm.model.clusters[k].parents;
      for (const NeighborRef& nb : parents.neighbors) {
        PathwayNode cause{nb.sensor, nb.category};
        int from = index_of(cause);
        if (edge_seen.insert({from, to, k}).second)
          graph.edges.push_back({from, to, k, nm.model.cluster_weight(k), depth + 1});
        queue.emplace_back(cause, depth + 1);
      }
    }
  }
  return graph;
}

std::string pathway_to_dot(const PathwayGraph& graph,
                           const std::vector<SensorMeta>& sensors) {
  std::ostringstream os;
  os << "digraph pathway {\n";
  os << "  rankdir=LR;\n";
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const PathwayNode& n = graph.nodes[i];
    std::string label = (n.sensor >= 0 && n.sensor < static_cast<int>(sensors.size())
                             ? sensors[n.sensor].sensor_id
                             : "s" + std::to_string(n.sensor)) +
                        "\\n" + std::string(kCategoryNames[n.category]);
    os << "  n" << i << " [label=\"" << label << "\""
       << (static_cast<int>(i) == graph.root ? ", shape=doublecircle" : "") << "];\n";
  }
  for (const PathwayEdge& e : graph.edges) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * e.weight);
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << buf << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace stcausal
