#pragma once

#include <array>
#include <string>
#include <vector>

#include "perccode/percolate.hpp"

namespace testsupport {

// The seven-leaf example code (left = 0, right = 1).
inline const std::vector<std::string> kExampleWords = {"00", "0100", "0101", "1010", "1011", "110", "1110"};

inline perccode::Cluster example_cluster(int depth_bound = 5) {
  return perccode::Cluster::from_codewords(depth_bound, kExampleWords);
}

// Replays a fixed sequence of uniforms, then fails loudly if overrun.
class ScriptedStream {
 public:
  explicit ScriptedStream(std::vector<double> values) : values_(std::move(values)) {}
  double operator()() {
    if (next_ >= values_.size()) throw std::out_of_range("scripted stream exhausted");
    return values_[next_++];
  }
  std::size_t consumed() const { return next_; }

 private:
  std::vector<double> values_;
  std::size_t next_ = 0;
};

}  // namespace testsupport
