// SPDX-License-Identifier: Apache-2.0
#include "semcomm/classical/huffman.hpp"

#include <algorithm>
#include <fstream>
#include <queue>

#include "semcomm/classical/char_alphabet.hpp"
#include "semcomm/error.hpp"

namespace semcomm::classical {

namespace {

struct BuildNode {
  std::uint64_t freq;
  std::uint64_t serial;  // tie-break: stable, lower serial wins
  int left = -1, right = -1;
  int symbol = -1;
};

}  // namespace

HuffmanCode HuffmanCode::build(const std::map<char, std::uint64_t>& frequencies) {
  std::vector<char> symbols;
  std::vector<std::uint64_t> freqs;
  for (const auto& [c, f] : frequencies) {
    if (f > 0) {
      symbols.push_back(c);
      freqs.push_back(f);
    }
  }
  if (symbols.empty())
    throw Error(Errc::empty_input, "huffman: no character with positive frequency");

  std::vector<std::size_t> lengths(symbols.size(), 0);
  if (symbols.size() == 1) {
    lengths[0] = 1;
  } else {
    std::vector<BuildNode> nodes;
    nodes.reserve(symbols.size() * 2);
    auto cmp = [&nodes](int a, int b) {
      if (nodes[a].freq != nodes[b].freq) return nodes[a].freq > nodes[b].freq;
      return nodes[a].serial > nodes[b].serial;
    };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> heap(cmp);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      nodes.push_back(BuildNode{freqs[i], i, -1, -1, static_cast<int>(i)});
      heap.push(static_cast<int>(i));
    }
    std::uint64_t serial = symbols.size();
    while (heap.size() > 1) {
      const int a = heap.top();
      heap.pop();
      const int b = heap.top();
      heap.pop();
      nodes.push_back(BuildNode{nodes[a].freq + nodes[b].freq, serial++, a, b, -1});
      heap.push(static_cast<int>(nodes.size() - 1));
    }
    // Depth-first walk assigns code lengths.
    std::vector<std::pair<int, std::size_t>> stack{{heap.top(), 0}};
    while (!stack.empty()) {
      auto [id, depth] = stack.back();
      stack.pop_back();
      const BuildNode& n = nodes[id];
      if (n.symbol >= 0) {
        lengths[static_cast<std::size_t>(n.symbol)] = depth;
      } else {
        stack.push_back({n.left, depth + 1});
        stack.push_back({n.right, depth + 1});
      }
    }
  }

  HuffmanCode code;
  code.finalize_from_lengths(symbols, lengths);
  return code;
}

void HuffmanCode::finalize_from_lengths(const std::vector<char>& symbols,
                                        const std::vector<std::size_t>& lengths) {
  std::vector<std::size_t> order(symbols.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (lengths[a] != lengths[b]) return lengths[a] < lengths[b];
    return symbols[a] < symbols[b];
  });

  symbols_.clear();
  codes_.clear();
  symbol_index_.fill(-1);
  std::uint64_t next = 0;
  std::size_t prev_len = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::size_t i = order[rank];
    const std::size_t len = lengths[i];
    next <<= (len - prev_len);
    prev_len = len;
    BitStream bits(len);
    for (std::size_t b = 0; b < len; ++b) bits[b] = (next >> (len - 1 - b)) & 1;
    symbol_index_[static_cast<unsigned char>(symbols[i])] =
        static_cast<int>(symbols_.size());
    symbols_.push_back(symbols[i]);
    codes_.push_back(std::move(bits));
    ++next;
  }

  decode_tree_.assign(1, TreeNode{});
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    int node = 0;
    for (std::size_t b = 0; b < codes_[i].size(); ++b) {
      int& child = codes_[i][b] ? decode_tree_[node].right : decode_tree_[node].left;
      if (child == -1) {
        child = static_cast<int>(decode_tree_.size());
        decode_tree_.push_back(TreeNode{});
      }
      node = child;
    }
    decode_tree_[node].symbol = static_cast<int>(i);
  }
}

HuffmanCode HuffmanCode::from_corpus_lines(const std::vector<std::string>& lines) {
  const CharAlphabet& a = char_alphabet();
  std::map<char, std::uint64_t> freq;
  for (const auto& line : lines)
    for (char c : a.sanitize(line)) ++freq[c];
  return build(freq);
}

bool HuffmanCode::has_code(char c) const {
  return symbol_index_[static_cast<unsigned char>(c)] >= 0;
}

const BitStream& HuffmanCode::code(char c) const {
  const int i = symbol_index_[static_cast<unsigned char>(c)];
  if (i < 0) throw Error(Errc::invalid_argument, std::string("no code for character: ") + c);
  return codes_[static_cast<std::size_t>(i)];
}

std::size_t HuffmanCode::code_length(char c) const { return code(c).size(); }

BitStream HuffmanCode::encode(const std::string& text, std::size_t* substituted) const {
  const CharAlphabet& a = char_alphabet();
  std::size_t subs = 0;
  BitStream out;
  for (char raw : text) {
    char c = a.contains(raw) ? raw : ' ';
    if (!has_code(c)) c = ' ';  // unseen alphabet char falls back to space
    if (c != raw) ++subs;
    if (!has_code(c))
      throw Error(Errc::invalid_argument, "huffman table lacks the space fallback");
    const BitStream& bits = code(c);
    out.insert(out.end(), bits.begin(), bits.end());
  }
  if (substituted) *substituted = subs;
  return out;
}

HuffmanCode::DecodeResult HuffmanCode::decode(const BitStream& bits, bool lenient) const {
  DecodeResult res;
  int node = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const int child = bits[i] ? decode_tree_[node].right : decode_tree_[node].left;
    if (child == -1) {
      if (lenient) {
        res.truncated = true;
        return res;
      }
      throw Error(Errc::format, "corrupt bitstream");
    }
    node = child;
    if (decode_tree_[node].symbol >= 0) {
      res.text.push_back(symbols_[static_cast<std::size_t>(decode_tree_[node].symbol)]);
      node = 0;
    }
  }
  res.truncated = node != 0;
  return res;
}

double HuffmanCode::expected_length(const std::map<char, std::uint64_t>& frequencies) const {
  double total = 0.0, weighted = 0.0;
  for (const auto& [c, f] : frequencies) {
    if (f == 0) continue;
    weighted += static_cast<double>(f) * static_cast<double>(code_length(c));
    total += static_cast<double>(f);
  }
  if (total == 0.0) throw Error(Errc::empty_input, "empty frequency table");
  return weighted / total;
}

void HuffmanCode::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open huffman table for writing: " + path);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    std::string sym;
    switch (symbols_[i]) {
      case ' ': sym = "\\s"; break;
      case '\t': sym = "\\t"; break;
      case '\n': sym = "\\n"; break;
      case '\\': sym = "\\\\"; break;
      default: sym = std::string(1, symbols_[i]);
    }
    out << sym << '\t';
    for (auto b : codes_[i]) out << (b ? '1' : '0');
    out << '\n';
  }
}

HuffmanCode HuffmanCode::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open huffman table: " + path);
  std::vector<char> symbols;
  std::vector<std::size_t> lengths;
  std::vector<BitStream> codes;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(Errc::format, "malformed huffman table");
    const std::string sym = line.substr(0, tab);
    char c;
    if (sym == "\\s") c = ' ';
    else if (sym == "\\t") c = '\t';
    else if (sym == "\\n") c = '\n';
    else if (sym == "\\\\") c = '\\';
    else if (sym.size() == 1) c = sym[0];
    else throw Error(Errc::format, "malformed huffman table symbol");
    BitStream bits;
    for (char b : line.substr(tab + 1)) {
      if (b != '0' && b != '1') throw Error(Errc::format, "malformed huffman bitstring");
      bits.push_back(b == '1');
    }
    if (bits.empty()) throw Error(Errc::format, "malformed huffman bitstring");
    symbols.push_back(c);
    lengths.push_back(bits.size());
    codes.push_back(std::move(bits));
  }
  if (symbols.empty()) throw Error(Errc::format, "empty huffman table");
  HuffmanCode code;
  code.finalize_from_lengths(symbols, lengths);
  // The canonical reconstruction must reproduce the stored codes exactly.
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (code.code(symbols[i]) != codes[i])
      throw Error(Errc::format, "huffman table is not canonical");
  }
  return code;
}

}  // namespace semcomm::classical
