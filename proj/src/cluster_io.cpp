#include "perccode/cluster_io.hpp"

#include <sstream>

#include "perccode/errors.hpp"

namespace perccode {
namespace {

nlohmann::json node_to_json(const Cluster& cluster, std::int32_t index) {
  const ClusterNode& node = cluster.node(index);
  nlohmann::json out = {{"gen", node.generation}};
  if (node.has_left()) out["left"] = node_to_json(cluster, node.left);
  if (node.has_right()) out["right"] = node_to_json(cluster, node.right);
  return out;
}

void check_node(const nlohmann::json& obj, std::int32_t expected_gen) {
  if (!obj.is_object()) throw FormatError("cluster node must be a JSON object");
  for (const auto& [key, unused] : obj.items()) {
    if (key != "gen" && key != "left" && key != "right") {
      throw FormatError("unknown cluster node key '" + key + "'");
    }
  }
  const auto gen_it = obj.find("gen");
  if (gen_it == obj.end() || !gen_it->is_number_integer()) {
    throw FormatError("cluster node lacks an integer 'gen'");
  }
  if (gen_it->get<std::int64_t>() != expected_gen) {
    throw FormatError("node generation " + gen_it->dump() + " does not match its depth " +
                      std::to_string(expected_gen));
  }
}

// Rebuilds breadth-first, left before right, so a parsed cluster has the same
// node layout as one grown by sampling.
std::vector<ClusterNode> parse_nodes(const nlohmann::json& root) {
  std::vector<ClusterNode> nodes;
  std::vector<const nlohmann::json*> objects;
  check_node(root, 0);
  nodes.push_back(ClusterNode{0});
  objects.push_back(&root);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::int32_t gen = nodes[i].generation;
    for (const char* side : {"left", "right"}) {
      const auto it = objects[i]->find(side);
      if (it == objects[i]->end()) continue;
      check_node(*it, gen + 1);
      const auto child = static_cast<std::int32_t>(nodes.size());
      (side[0] == 'l' ? nodes[i].left : nodes[i].right) = child;
      nodes.push_back(ClusterNode{gen + 1});
      objects.push_back(&*it);
    }
  }
  return nodes;
}

}  // namespace

nlohmann::json cluster_to_json(const Cluster& cluster) {
  return {{"format", kClusterFormat},
          {"depth_bound", cluster.depth_bound()},
          {"root", node_to_json(cluster, 0)}};
}

Cluster cluster_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw FormatError("cluster document must be a JSON object");
  if (const auto it = doc.find("format"); it != doc.end() && *it != kClusterFormat) {
    throw FormatError("unsupported cluster format " + it->dump());
  }
  const auto depth = doc.find("depth_bound");
  if (depth == doc.end() || !depth->is_number_integer() || depth->get<std::int64_t>() < 0) {
    throw FormatError("cluster document needs a non-negative integer 'depth_bound'");
  }
  const auto root = doc.find("root");
  if (root == doc.end()) throw FormatError("cluster document lacks 'root'");
  return Cluster(depth->get<int>(), parse_nodes(*root));
}

std::string cluster_to_dot(const Cluster& cluster) {
  std::ostringstream out;
  out << "digraph cluster {\n"
      << "  // depth_bound=" << cluster.depth_bound() << "\n"
      << "  node [shape=circle];\n";
  const auto nodes = cluster.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const bool leaf = nodes[i].childless() && nodes[i].generation < cluster.depth_bound();
    out << "  n" << i << " [label=\"" << nodes[i].generation << "\"" << (leaf ? ", shape=box" : "")
        << "];\n";
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].has_left()) out << "  n" << i << " -> n" << nodes[i].left << " [label=\"0\"];\n";
    if (nodes[i].has_right()) out << "  n" << i << " -> n" << nodes[i].right << " [label=\"1\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace perccode
