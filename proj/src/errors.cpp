#include "perccode/errors.hpp"

#include <array>
#include <charconv>

namespace perccode {

std::string format_real(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

}  // namespace perccode
