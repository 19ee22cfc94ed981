// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "semcomm/classical/bitstream.hpp"

namespace semcomm::classical {

// 64-character source alphabet for the fixed 6-bit and Huffman baselines:
// a-z, 0-9, space and 27 punctuation/symbol characters. Characters outside
// the alphabet substitute for space (counted, never fatal).
class CharAlphabet {
 public:
  static constexpr std::size_t kSize = 64;

  CharAlphabet();

  bool contains(char c) const { return index_of(c) >= 0; }
  int index_of(char c) const;             // -1 when absent
  char char_at(std::size_t index) const;  // index < 64

  // Maps out-of-alphabet characters to space and reports how many were hit.
  std::string sanitize(const std::string& text, std::size_t* substituted = nullptr) const;

 private:
  std::array<char, kSize> chars_;
  std::array<std::int8_t, 256> index_;
};

const CharAlphabet& char_alphabet();

struct Fixed6Result {
  BitStream bits;
  std::size_t substituted = 0;  // out-of-alphabet characters mapped to space
};

// 6 bits per character, MSB first, alphabet order.
Fixed6Result fixed6_encode(const std::string& text);
std::string fixed6_decode(const BitStream& bits);

}  // namespace semcomm::classical
