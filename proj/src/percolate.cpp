#include "perccode/percolate.hpp"

#include <map>
#include <numeric>
#include <string>

#include "perccode/errors.hpp"

namespace perccode {

Cluster::Cluster(int depth_bound, std::vector<ClusterNode> nodes)
    : depth_bound_(depth_bound), nodes_(std::move(nodes)) {
  if (depth_bound_ < 0) throw FormatError("depth_bound must be >= 0");
  if (nodes_.empty()) throw FormatError("cluster has no root");
  if (nodes_.front().generation != 0) throw FormatError("root must sit at generation 0");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  std::vector<bool> has_parent(nodes_.size(), false);
  for (std::int32_t i = 0; i < n; ++i) {
    const ClusterNode& node = nodes_[static_cast<std::size_t>(i)];
    if (node.generation > depth_bound_) {
      throw FormatError("node " + std::to_string(i) + " lies below the depth bound");
    }
    for (const std::int32_t child : {node.left, node.right}) {
      if (child == ClusterNode::kNone) continue;
      if (child <= i || child >= n) {
        throw FormatError("node " + std::to_string(i) + " has an invalid child index");
      }
      auto seen = has_parent[static_cast<std::size_t>(child)];
      if (seen) throw FormatError("node " + std::to_string(child) + " has two parents");
      seen = true;
      if (nodes_[static_cast<std::size_t>(child)].generation != node.generation + 1) {
        throw FormatError("child generation must be parent generation + 1");
      }
    }
    if (i > 0 && !has_parent[static_cast<std::size_t>(i)]) {
      throw FormatError("node " + std::to_string(i) + " is detached from the root");
    }
  }
}

Cluster Cluster::root_only(int depth_bound) {
  return Cluster(Trusted{}, depth_bound < 0 ? 0 : depth_bound, {ClusterNode{}});
}

Cluster Cluster::from_codewords(int depth_bound, std::span<const std::string> codewords) {
  // Path strings of every prefix, in breadth-first (length, then lexicographic) order.
  std::map<std::pair<std::size_t, std::string>, std::int32_t> order;
  order[{0, ""}] = 0;
  for (const std::string& word : codewords) {
    if (word.size() > static_cast<std::size_t>(depth_bound)) {
      throw FormatError("codeword '" + word + "' is longer than the depth bound");
    }
    for (std::size_t len = 0; len <= word.size(); ++len) {
      const std::string prefix = word.substr(0, len);
      if (len > 0 && prefix.back() != '0' && prefix.back() != '1') {
        throw FormatError("codeword '" + word + "' contains a non-binary digit");
      }
      order.emplace(std::pair{len, prefix}, 0);
    }
  }
  std::map<std::string, std::int32_t> index;
  std::vector<ClusterNode> nodes;
  nodes.reserve(order.size());
  for (const auto& [key, unused] : order) {
    index[key.second] = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(ClusterNode{static_cast<std::int32_t>(key.first)});
  }
  for (const auto& [path, i] : index) {
    if (path.empty()) continue;
    const std::int32_t parent = index.at(path.substr(0, path.size() - 1));
    auto& slot = path.back() == '0' ? nodes[static_cast<std::size_t>(parent)].left
                                    : nodes[static_cast<std::size_t>(parent)].right;
    slot = i;
  }
  return Cluster(depth_bound, std::move(nodes));
}

std::uint64_t GenerationTally::leaf_total() const noexcept {
  return std::accumulate(leaf_counts.begin(), leaf_counts.end(), std::uint64_t{0});
}

GenerationTally tally(const Cluster& cluster) {
  const int depth = cluster.depth_bound();
  GenerationTally t;
  t.depth_bound = depth;
  t.node_counts.assign(static_cast<std::size_t>(depth) + 1, 0);
  t.leaf_counts.assign(static_cast<std::size_t>(depth), 0);
  for (const ClusterNode& node : cluster.nodes()) {
    const auto gen = static_cast<std::size_t>(node.generation);
    ++t.node_counts[gen];
    if (node.generation < depth && node.childless()) ++t.leaf_counts[gen];
  }
  return t;
}

bool survived(const GenerationTally& tally) noexcept {
  return !tally.node_counts.empty() && tally.node_counts.back() > 0;
}

}  // namespace perccode
