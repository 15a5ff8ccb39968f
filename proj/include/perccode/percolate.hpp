#pragma once

// Root clusters of bond percolation on a perfect binary tree truncated at a
// depth bound. The cluster is grown generation by generation from the root,
// so edges outside the cluster are never drawn.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "perccode/params.hpp"
#include "perccode/rng.hpp"

namespace perccode {

struct ClusterNode {
  static constexpr std::int32_t kNone = -1;

  std::int32_t generation = 0;
  std::int32_t left = kNone;   // index into Cluster::nodes()
  std::int32_t right = kNone;

  bool has_left() const noexcept { return left != kNone; }
  bool has_right() const noexcept { return right != kNone; }
  bool childless() const noexcept { return left == kNone && right == kNone; }

  friend bool operator==(const ClusterNode&, const ClusterNode&) = default;
};

/// Immutable root-anchored cluster. Node 0 is the root; every child has a
/// larger index than its parent and sits exactly one generation deeper.
class Cluster {
 public:
  /// Validates the node table; throws FormatError on a malformed tree.
  Cluster(int depth_bound, std::vector<ClusterNode> nodes);

  /// Prefix closure of a set of '0'/'1' codewords: each codeword becomes a
  /// childless node reached by left (0) / right (1) turns from the root.
  static Cluster from_codewords(int depth_bound, std::span<const std::string> codewords);

  /// The root alone.
  static Cluster root_only(int depth_bound);

  int depth_bound() const noexcept { return depth_bound_; }
  std::span<const ClusterNode> nodes() const noexcept { return nodes_; }
  const ClusterNode& root() const noexcept { return nodes_.front(); }
  const ClusterNode& node(std::int32_t index) const { return nodes_.at(static_cast<std::size_t>(index)); }
  std::size_t size() const noexcept { return nodes_.size(); }

  friend bool operator==(const Cluster&, const Cluster&) = default;

 private:
  struct Trusted {};
  Cluster(Trusted, int depth_bound, std::vector<ClusterNode> nodes) noexcept
      : depth_bound_(depth_bound), nodes_(std::move(nodes)) {}

  template <class EdgeOpen>
  friend Cluster grow_cluster(int depth_bound, EdgeOpen&& edge_open);

  int depth_bound_;
  std::vector<ClusterNode> nodes_;
};

/// Breadth-first growth from the root. For each node above the depth bound the
/// left edge is queried before the right one; `edge_open(h)` receives the
/// heap index h of the child in the full tree (root = 0, children of k are
/// 2k+1 and 2k+2). Heap indices wrap past depth 63, which only matters to
/// callers that enumerate edges explicitly.
template <class EdgeOpen>
Cluster grow_cluster(int depth_bound, EdgeOpen&& edge_open) {
  if (depth_bound < 0) depth_bound = 0;
  std::vector<ClusterNode> nodes{ClusterNode{}};
  std::vector<std::uint64_t> heap{0};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::int32_t gen = nodes[i].generation;
    if (gen >= depth_bound) continue;
    const std::uint64_t h = heap[i];
    if (edge_open(2 * h + 1)) {
      nodes[i].left = static_cast<std::int32_t>(nodes.size());
      nodes.push_back(ClusterNode{gen + 1});
      heap.push_back(2 * h + 1);
    }
    if (edge_open(2 * h + 2)) {
      nodes[i].right = static_cast<std::int32_t>(nodes.size());
      nodes.push_back(ClusterNode{gen + 1});
      heap.push_back(2 * h + 2);
    }
  }
  return Cluster(Cluster::Trusted{}, depth_bound, std::move(nodes));
}

/// One realisation of the root cluster. An edge is open iff the next uniform
/// drawn from `stream` is < p. Draw order is breadth-first, left before right.
template <UniformSource Stream>
Cluster sample_cluster(const ModelParams& params, int depth_bound, Stream& stream) {
  const double p = params.p();
  return grow_cluster(depth_bound, [&](std::uint64_t) { return static_cast<double>(stream()) < p; });
}

inline Cluster sample_cluster(const ModelParams& params, int depth_bound, std::uint64_t seed,
                              std::uint64_t index) {
  SampleStream stream(seed, index);
  return sample_cluster(params, depth_bound, stream);
}

/// Per-generation node counts N_0..N_D and leaf counts L_0..L_{D-1}.
/// Nodes at the depth bound D are never leaves.
struct GenerationTally {
  int depth_bound = 0;
  std::vector<std::uint64_t> node_counts;
  std::vector<std::uint64_t> leaf_counts;

  std::uint64_t leaf_total() const noexcept;

  friend bool operator==(const GenerationTally&, const GenerationTally&) = default;
};

GenerationTally tally(const Cluster& cluster);

/// True iff the cluster reaches the depth bound.
bool survived(const GenerationTally& tally) noexcept;

}  // namespace perccode
