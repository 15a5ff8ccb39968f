#pragma once

// Cluster dump formats.
//
// JSON:
//   {"format": "perccode-cluster/1",
//    "depth_bound": 3,
//    "root": {"gen": 0, "left": {"gen": 1}, "right": {"gen": 1, "right": {...}}}}
// A node object always carries "gen"; "left" / "right" are present only for
// open edges.
//
// DOT: a `digraph cluster` with one vertex per node labelled by its
// generation and edges labelled 0 (left) or 1 (right).

#include <string>

#include "json.hpp"
#include "perccode/percolate.hpp"

namespace perccode {

inline constexpr const char* kClusterFormat = "perccode-cluster/1";

nlohmann::json cluster_to_json(const Cluster& cluster);

/// Throws FormatError on schema violations.
Cluster cluster_from_json(const nlohmann::json& doc);

std::string cluster_to_dot(const Cluster& cluster);

}  // namespace perccode
