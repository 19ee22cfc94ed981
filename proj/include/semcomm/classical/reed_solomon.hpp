// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "semcomm/classical/bitstream.hpp"

namespace semcomm::classical {

// GF(2^3) with primitive polynomial x^3 + x + 1; elements are 0..7.
namespace gf8 {

constexpr int kOrder = 7;  // multiplicative order of the primitive element

extern const std::array<std::uint8_t, 7> kExp;   // alpha^i
extern const std::array<std::int8_t, 8> kLog;    // log_alpha, -1 for 0

std::uint8_t add(std::uint8_t a, std::uint8_t b);
std::uint8_t mul(std::uint8_t a, std::uint8_t b);
std::uint8_t div(std::uint8_t a, std::uint8_t b);
std::uint8_t pow_alpha(int exponent);

}  // namespace gf8

// Systematic RS(7,5) over GF(8): corrects one symbol error per codeword via
// syndrome decoding; an inconsistent syndrome pair is reported as a failure
// rather than silently passed through.
class ReedSolomon75 {
 public:
  static constexpr std::size_t kN = 7;
  static constexpr std::size_t kK = 5;
  static constexpr std::size_t kT = 1;

  using Message = std::array<std::uint8_t, kK>;
  using Codeword = std::array<std::uint8_t, kN>;

  static Codeword encode(const Message& message);

  struct DecodeResult {
    Message message{};
    std::size_t corrected = 0;  // <= kT
    bool ok = true;             // false when syndromes are inconsistent
  };
  static DecodeResult decode(const Codeword& received);

  // Bit-level plumbing: packs bits into 3-bit symbols, zero-pads to full
  // 5-symbol blocks, encodes, and flattens codewords back to bits. decode
  // trims to original_bits and reports per-block failures.
  struct StreamDecode {
    BitStream bits;
    std::size_t blocks_failed = 0;
    std::size_t symbols_corrected = 0;
  };
  static BitStream encode_bits(const BitStream& info_bits);
  static StreamDecode decode_bits(const BitStream& coded_bits, std::size_t original_bits);
  static std::size_t coded_bit_count(std::size_t info_bits);
};

}  // namespace semcomm::classical
