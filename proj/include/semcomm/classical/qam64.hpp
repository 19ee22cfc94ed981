// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "semcomm/channel.hpp"
#include "semcomm/classical/bitstream.hpp"

namespace semcomm::classical {

// Square 64-QAM on the {+-1,+-3,+-5,+-7}^2 grid scaled by 1/sqrt(42) so the
// constellation has unit mean energy. Each symbol carries 6 bits: the first
// 3 select the I level and the last 3 the Q level, Gray-coded per axis.
class Qam64 {
 public:
  static constexpr std::size_t kBitsPerSymbol = 6;

  struct Modulated {
    ComplexSymbolBlock symbols;
    std::size_t pad_bits = 0;  // zero bits appended to fill the last symbol
  };

  static Modulated modulate(const BitStream& bits);

  // Hard-decision nearest point; pad_bits are stripped from the tail.
  static BitStream demodulate(const ComplexSymbolBlock& symbols, std::size_t pad_bits = 0);

  // Max-log LLRs, log(P(bit=0)/P(bit=1)), for a known per-symbol complex
  // noise variance. pad_bits are stripped like demodulate.
  static std::vector<double> llrs(const ComplexSymbolBlock& symbols, double noise_variance,
                                  std::size_t pad_bits = 0);

  static const std::array<std::complex<double>, 64>& constellation();
  static std::complex<double> point_for_bits(unsigned label6);

  // Symbol error probability of unit-energy square 64-QAM in AWGN at the
  // given Es/N0; the closed form used as the Monte-Carlo oracle.
  static double analytic_awgn_ser(double es_n0_db);
};

}  // namespace semcomm::classical
