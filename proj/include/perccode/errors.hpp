#pragma once

#include <stdexcept>
#include <string>

namespace perccode {

// Argument outside the region where a formula or series converges.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quantity not defined for the given input (e.g. entropy of a leafless cluster).
class UndefinedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Requested exact computation exceeds its size cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class IOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed cluster / codebook documents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form, for diagnostics.
std::string format_real(double value);

}  // namespace perccode
