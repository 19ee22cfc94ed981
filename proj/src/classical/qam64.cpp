// SPDX-License-Identifier: Apache-2.0
#include "semcomm/classical/qam64.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "semcomm/error.hpp"

namespace semcomm::classical {

namespace {

const double kScale = 1.0 / std::sqrt(42.0);

// Gray label -> amplitude index (inverse Gray code), 3 bits per axis.
unsigned gray_to_index(unsigned g) {
  unsigned b = g;
  b ^= b >> 1;
  b ^= b >> 2;
  return b & 7;
}

unsigned index_to_gray(unsigned b) { return (b ^ (b >> 1)) & 7; }

double level_for_index(unsigned idx) { return (2.0 * static_cast<double>(idx) - 7.0) * kScale; }

unsigned nearest_index(double v) {
  // Decision thresholds fall halfway between adjacent levels.
  const double x = v / kScale;  // back to the odd-integer grid
  int idx = static_cast<int>(std::floor((x + 7.0) / 2.0 + 0.5));
  if (idx < 0) idx = 0;
  if (idx > 7) idx = 7;
  return static_cast<unsigned>(idx);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

const std::array<std::complex<double>, 64>& Qam64::constellation() {
  static const auto table = [] {
    std::array<std::complex<double>, 64> t{};
    for (unsigned label = 0; label < 64; ++label) {
      const unsigned gi = (label >> 3) & 7;
      const unsigned gq = label & 7;
      t[label] = {level_for_index(gray_to_index(gi)), level_for_index(gray_to_index(gq))};
    }
    return t;
  }();
  return table;
}

std::complex<double> Qam64::point_for_bits(unsigned label6) {
  return constellation()[label6 & 63];
}

Qam64::Modulated Qam64::modulate(const BitStream& bits) {
  Modulated out;
  const std::size_t rem = bits.size() % kBitsPerSymbol;
  out.pad_bits = rem == 0 ? 0 : kBitsPerSymbol - rem;
  const std::size_t total = bits.size() + out.pad_bits;
  out.symbols.reserve(total / kBitsPerSymbol);
  for (std::size_t i = 0; i < total; i += kBitsPerSymbol) {
    unsigned label = 0;
    for (std::size_t b = 0; b < kBitsPerSymbol; ++b) {
      const unsigned bit = (i + b) < bits.size() ? bits[i + b] : 0;
      label = (label << 1) | bit;
    }
    out.symbols.push_back(point_for_bits(label));
  }
  return out;
}

BitStream Qam64::demodulate(const ComplexSymbolBlock& symbols, std::size_t pad_bits) {
  BitStream bits;
  bits.reserve(symbols.size() * kBitsPerSymbol);
  for (const auto& y : symbols) {
    const unsigned gi = index_to_gray(nearest_index(y.real()));
    const unsigned gq = index_to_gray(nearest_index(y.imag()));
    const unsigned label = (gi << 3) | gq;
    for (int b = 5; b >= 0; --b) bits.push_back((label >> b) & 1);
  }
  if (pad_bits > bits.size())
    throw Error(Errc::invalid_argument, "pad longer than demodulated stream");
  bits.resize(bits.size() - pad_bits);
  return bits;
}

std::vector<double> Qam64::llrs(const ComplexSymbolBlock& symbols, double noise_variance,
                                std::size_t pad_bits) {
  if (noise_variance <= 0.0)
    throw Error(Errc::invalid_argument, "noise variance must be positive");
  std::vector<double> out;
  out.reserve(symbols.size() * kBitsPerSymbol);
  // Per-axis distances: each axis carries 3 Gray bits independently, so the
  // max-log metric only needs the 8 axis levels.
  const double axis_var = noise_variance / 2.0;
  auto axis_llrs = [&](double y, std::array<double, 3>& l) {
    std::array<double, 8> d2;
    for (unsigned idx = 0; idx < 8; ++idx) {
      const double d = y - level_for_index(idx);
      d2[idx] = d * d;
    }
    for (unsigned bit = 0; bit < 3; ++bit) {
      double best0 = std::numeric_limits<double>::infinity();
      double best1 = best0;
      for (unsigned idx = 0; idx < 8; ++idx) {
        const unsigned g = index_to_gray(idx);
        const bool is_one = (g >> (2 - bit)) & 1;
        (is_one ? best1 : best0) = std::min(is_one ? best1 : best0, d2[idx]);
      }
      l[bit] = (best1 - best0) / (2.0 * axis_var);
    }
  };
  for (const auto& y : symbols) {
    std::array<double, 3> li, lq;
    axis_llrs(y.real(), li);
    axis_llrs(y.imag(), lq);
    for (double v : li) out.push_back(v);
    for (double v : lq) out.push_back(v);
  }
  if (pad_bits > out.size())
    throw Error(Errc::invalid_argument, "pad longer than llr stream");
  out.resize(out.size() - pad_bits);
  return out;
}

double Qam64::analytic_awgn_ser(double es_n0_db) {
  const double gamma = std::pow(10.0, es_n0_db / 10.0);
  const double p_axis = 2.0 * (1.0 - 1.0 / 8.0) * q_function(std::sqrt(gamma / 21.0));
  return 1.0 - (1.0 - p_axis) * (1.0 - p_axis);
}

}  // namespace semcomm::classical
