#include "perccode/codec.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "perccode/errors.hpp"

namespace perccode {

Codeword::Codeword(std::string_view bits) : bits_(bits) {
  if (bits_.find_first_not_of("01") != std::string::npos) {
    throw std::invalid_argument("codeword '" + bits_ + "' contains a non-binary digit");
  }
}

bool Codeword::is_prefix_of(const Codeword& other) const noexcept {
  return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

CodeBook::CodeBook(std::vector<Codeword> words) {
  std::sort(words.begin(), words.end());
  if (const auto dup = std::adjacent_find(words.begin(), words.end()); dup != words.end()) {
    throw std::invalid_argument("duplicate codeword '" + std::string(dup->bits()) + "'");
  }
  entries_.reserve(words.size());
  for (auto& word : words) {
    const int gen = static_cast<int>(word.length());
    entries_.push_back({std::move(word), gen});
  }
}

CodeBook extract_codebook(const Cluster& cluster) {
  const auto nodes = cluster.nodes();
  // Children always follow their parent, so paths fill in a single forward pass.
  std::vector<std::string> path(nodes.size());
  std::vector<Codeword> words;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ClusterNode& node = nodes[i];
    if (node.has_left()) path[static_cast<std::size_t>(node.left)] = path[i] + '0';
    if (node.has_right()) path[static_cast<std::size_t>(node.right)] = path[i] + '1';
    if (node.childless() && node.generation < cluster.depth_bound()) {
      words.emplace_back(path[i]);
    }
    std::string().swap(path[i]);
  }
  return CodeBook(std::move(words));
}

double kraft_sum(const CodeBook& book) noexcept {
  double sum = 0.0;
  for (const CodeEntry& e : book.entries()) sum += std::ldexp(1.0, -static_cast<int>(e.codeword.length()));
  return sum;
}

bool is_prefix_free(const CodeBook& book) noexcept {
  // In lexicographic order a word prefixing any other also prefixes its successor.
  const auto entries = book.entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i - 1].codeword.is_prefix_of(entries[i].codeword)) return false;
  }
  return true;
}

namespace {

// Binary trie over the book; terminal[k] is the entry index ending at node k.
struct Trie {
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::array<std::size_t, 2>> next{{kNone, kNone}};
  std::vector<std::size_t> terminal{kNone};

  explicit Trie(const CodeBook& book) {
    for (std::size_t e = 0; e < book.size(); ++e) {
      std::size_t at = 0;
      for (const char c : book[e].codeword.bits()) {
        const int bit = c - '0';
        if (next[at][bit] == kNone) {
          next[at][bit] = next.size();
          next.push_back({kNone, kNone});
          terminal.push_back(kNone);
        }
        at = next[at][bit];
      }
      terminal[at] = e;
    }
  }
};

}  // namespace

std::vector<std::size_t> decode(const CodeBook& book, std::string_view bits) {
  std::vector<std::size_t> symbols;
  if (bits.empty()) return symbols;
  if (book.empty()) throw DecodeError("cannot decode with an empty codebook");
  if (!is_prefix_free(book)) throw DecodeError("codebook is not prefix-free");
  if (book[0].codeword.empty()) {
    throw DecodeError("the empty codeword cannot delimit a non-empty bitstream");
  }
  const Trie trie(book);
  std::size_t at = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const char c = bits[i];
    if (c != '0' && c != '1') {
      throw DecodeError("invalid bit character at position " + std::to_string(i));
    }
    at = trie.next[at][c - '0'];
    if (at == Trie::kNone) {
      throw DecodeError("no codeword matches the input starting at position " + std::to_string(start));
    }
    if (trie.terminal[at] != Trie::kNone) {
      symbols.push_back(trie.terminal[at]);
      at = 0;
      start = i + 1;
    }
  }
  if (at != 0) {
    throw DecodeError("input ends inside a codeword starting at position " + std::to_string(start));
  }
  return symbols;
}

std::string encode(const CodeBook& book, std::span<const std::size_t> symbols) {
  std::string out;
  for (const std::size_t s : symbols) {
    if (s >= book.size()) {
      throw IndexError("symbol index " + std::to_string(s) + " out of range for a book of " +
                       std::to_string(book.size()) + " entries");
    }
    out += book[s].codeword.bits();
  }
  return out;
}

std::vector<double> bernoulli_weights(const CodeBook& book, double p) {
  std::vector<double> weights;
  weights.reserve(book.size());
  double total = 0.0;
  for (const CodeEntry& e : book.entries()) {
    weights.push_back(std::pow(p, e.generation));
    total += weights.back();
  }
  if (total <= 0.0) throw UndefinedError("codeword weights sum to zero");
  for (double& w : weights) w /= total;
  return weights;
}

void write_codebook(std::ostream& out, const CodeBook& book, std::optional<double> p) {
  std::vector<double> weights;
  if (p) weights = bernoulli_weights(book, *p);
  for (std::size_t i = 0; i < book.size(); ++i) {
    const auto bits = book[i].codeword.bits();
    out << (bits.empty() ? std::string_view("-") : bits);
    if (p) {
      out << '\t' << format_real(weights[i]);
    }
    out << '\n';
  }
}

CodeBook read_codebook(std::istream& in) {
  std::vector<Codeword> words;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word) || word.front() == '#') continue;
    std::string prob;
    std::string extra;
    fields >> prob >> extra;
    const auto where = " on line " + std::to_string(line_no);
    if (!extra.empty()) throw FormatError("too many fields" + where);
    if (!prob.empty()) {
      double value = 0.0;
      const auto res = std::from_chars(prob.data(), prob.data() + prob.size(), value);
      if (res.ec != std::errc{} || res.ptr != prob.data() + prob.size() || !(value >= 0.0 && value <= 1.0)) {
        throw FormatError("invalid probability '" + prob + "'" + where);
      }
    }
    if (word == "-") word.clear();
    try {
      words.emplace_back(word);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what() + where);
    }
  }
  try {
    return CodeBook(std::move(words));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace perccode
