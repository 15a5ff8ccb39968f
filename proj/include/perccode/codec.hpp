#pragma once

// The prefix code read off a cluster: each leaf is a symbol whose codeword is
// the root-to-leaf path, left turn = '0', right turn = '1'.

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perccode/percolate.hpp"

namespace perccode {

/// Binary word stored as ASCII '0'/'1'; leading zeros are significant and the
/// empty word is allowed.
class Codeword {
 public:
  Codeword() = default;
  /// Throws std::invalid_argument on characters other than '0' and '1'.
  explicit Codeword(std::string_view bits);

  std::string_view bits() const noexcept { return bits_; }
  std::size_t length() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool is_prefix_of(const Codeword& other) const noexcept;

  friend auto operator<=>(const Codeword&, const Codeword&) = default;

 private:
  std::string bits_;
};

struct CodeEntry {
  Codeword codeword;
  int generation = 0;  // == codeword.length()

  friend bool operator==(const CodeEntry&, const CodeEntry&) = default;
};

/// Codewords in lexicographic order; entry i is presented as symbol s_{i+1}.
class CodeBook {
 public:
  CodeBook() = default;
  /// Sorts the words; throws std::invalid_argument on duplicates.
  explicit CodeBook(std::vector<Codeword> words);

  std::span<const CodeEntry> entries() const noexcept { return entries_; }
  const CodeEntry& operator[](std::size_t i) const { return entries_.at(i); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const CodeBook&, const CodeBook&) = default;

 private:
  std::vector<CodeEntry> entries_;
};

/// One entry per leaf (nodes at the depth bound are not leaves).
CodeBook extract_codebook(const Cluster& cluster);

double kraft_sum(const CodeBook& book) noexcept;

bool is_prefix_free(const CodeBook& book) noexcept;

/// Greedy left-to-right parse into entry indices. Throws DecodeError when the
/// book is not prefix-free, when a position matches no codeword, when the
/// input ends inside a codeword, or on non-binary characters.
std::vector<std::size_t> decode(const CodeBook& book, std::string_view bits);

/// Concatenated codewords; throws IndexError on an index >= book.size().
std::string encode(const CodeBook& book, std::span<const std::size_t> symbols);

/// Normalised Bernoulli weights p^len / sum(p^len), one per entry.
/// Throws UndefinedError if the weights sum to zero.
std::vector<double> bernoulli_weights(const CodeBook& book, double p);

// Text format: '#' comment lines and blank lines are ignored; every other line
// holds a codeword ('-' for the empty word) optionally followed by whitespace
// and that symbol's probability. Lines are written in lexicographic order.

/// Writes the book; with `p` set, adds the normalised Bernoulli probability column.
void write_codebook(std::ostream& out, const CodeBook& book, std::optional<double> p = std::nullopt);

/// Throws FormatError on malformed lines; the probability column is validated
/// as a number but not retained.
CodeBook read_codebook(std::istream& in);

}  // namespace perccode
