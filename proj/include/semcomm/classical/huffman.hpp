// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semcomm/classical/bitstream.hpp"

namespace semcomm::classical {

// Canonical Huffman code over single characters. Heap ties are broken by
// symbol order so the table is deterministic for a given frequency map; a
// single-symbol alphabet gets one bit.
class HuffmanCode {
 public:
  static HuffmanCode build(const std::map<char, std::uint64_t>& frequencies);

  // Per-corpus character frequencies (after alphabet sanitization).
  static HuffmanCode from_corpus_lines(const std::vector<std::string>& lines);

  BitStream encode(const std::string& text, std::size_t* substituted = nullptr) const;

  struct DecodeResult {
    std::string text;
    bool truncated = false;  // stream ended or broke mid-codeword
  };
  // An impossible prefix raises "corrupt bitstream"; with lenient set it
  // instead returns the prefix decoded so far with truncated set.
  DecodeResult decode(const BitStream& bits, bool lenient = false) const;

  bool has_code(char c) const;
  const BitStream& code(char c) const;
  std::size_t code_length(char c) const;
  const std::vector<char>& symbols() const { return symbols_; }

  double expected_length(const std::map<char, std::uint64_t>& frequencies) const;

  // One "char<TAB>bitstring" line per symbol; control characters escape as
  // \s (space), \t, \n, \\ .
  void save(const std::string& path) const;
  static HuffmanCode load(const std::string& path);

 private:
  struct TreeNode {
    int left = -1, right = -1;  // -1 on leaves
    int symbol = -1;            // leaf payload (index into symbols_)
  };

  void finalize_from_lengths(const std::vector<char>& symbols,
                             const std::vector<std::size_t>& lengths);

  std::vector<char> symbols_;              // sorted canonical order
  std::vector<BitStream> codes_;           // parallel to symbols_
  std::array<int, 256> symbol_index_{};    // char -> position or -1
  std::vector<TreeNode> decode_tree_;      // node 0 is the root
};

}  // namespace semcomm::classical
