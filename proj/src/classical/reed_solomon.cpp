// SPDX-License-Identifier: Apache-2.0
#include "semcomm/classical/reed_solomon.hpp"

#include "semcomm/error.hpp"

namespace semcomm::classical {

namespace gf8 {

const std::array<std::uint8_t, 7> kExp = {1, 2, 4, 3, 6, 7, 5};
const std::array<std::int8_t, 8> kLog = {-1, 0, 1, 3, 2, 6, 4, 5};

std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kExp[(kLog[a] + kLog[b]) % kOrder];
}

std::uint8_t div(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw Error(Errc::numeric, "gf8 division by zero");
  if (a == 0) return 0;
  return kExp[(kLog[a] - kLog[b] + kOrder) % kOrder];
}

std::uint8_t pow_alpha(int exponent) {
  int e = exponent % kOrder;
  if (e < 0) e += kOrder;
  return kExp[e];
}

}  // namespace gf8

namespace {

// Generator with roots alpha^1 and alpha^2: g(x) = x^2 + 6x + 3.
constexpr std::uint8_t kG1 = 6;
constexpr std::uint8_t kG0 = 3;

// Evaluate the codeword polynomial at alpha^j; coefficient 0 is the x^6 term.
std::uint8_t eval_at_alpha(const ReedSolomon75::Codeword& c, int j) {
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < ReedSolomon75::kN; ++i) {
    const int degree = static_cast<int>(ReedSolomon75::kN - 1 - i);
    acc = gf8::add(acc, gf8::mul(c[i], gf8::pow_alpha(j * degree)));
  }
  return acc;
}

}  // namespace

ReedSolomon75::Codeword ReedSolomon75::encode(const Message& message) {
  for (auto s : message)
    if (s > 7) throw Error(Errc::invalid_argument, "rs symbol out of range");
  // Long division of m(x) * x^2 by g(x); the remainder fills the two parity
  // positions.
  std::array<std::uint8_t, kN> work{};
  for (std::size_t i = 0; i < kK; ++i) work[i] = message[i];
  for (std::size_t i = 0; i < kK; ++i) {
    const std::uint8_t coef = work[i];
    if (coef == 0) continue;
    work[i] = 0;
    work[i + 1] = gf8::add(work[i + 1], gf8::mul(coef, kG1));
    work[i + 2] = gf8::add(work[i + 2], gf8::mul(coef, kG0));
  }
  Codeword out{};
  for (std::size_t i = 0; i < kK; ++i) out[i] = message[i];
  out[kK] = work[kK];
  out[kK + 1] = work[kK + 1];
  return out;
}

ReedSolomon75::DecodeResult ReedSolomon75::decode(const Codeword& received) {
  for (auto s : received)
    if (s > 7) throw Error(Errc::invalid_argument, "rs symbol out of range");
  DecodeResult res;
  const std::uint8_t s1 = eval_at_alpha(received, 1);
  const std::uint8_t s2 = eval_at_alpha(received, 2);
  Codeword fixed = received;
  if (s1 == 0 && s2 == 0) {
    // clean
  } else if (s1 == 0 || s2 == 0) {
    res.ok = false;  // more errors than a single-symbol pattern can explain
  } else {
    // Single error at degree log(s2/s1) with magnitude s1^2/s2.
    const std::uint8_t ratio = gf8::div(s2, s1);
    const int degree = gf8::kLog[ratio];
    const std::size_t pos = kN - 1 - static_cast<std::size_t>(degree);
    const std::uint8_t magnitude = gf8::div(gf8::mul(s1, s1), s2);
    fixed[pos] = gf8::add(fixed[pos], magnitude);
    res.corrected = 1;
  }
  for (std::size_t i = 0; i < kK; ++i) res.message[i] = fixed[i];
  return res;
}

std::size_t ReedSolomon75::coded_bit_count(std::size_t info_bits) {
  const std::size_t symbols = (info_bits + 2) / 3;
  const std::size_t blocks = (symbols + kK - 1) / kK;
  return blocks * kN * 3;
}

BitStream ReedSolomon75::encode_bits(const BitStream& info_bits) {
  std::vector<std::uint8_t> symbols;
  symbols.reserve((info_bits.size() + 2) / 3);
  for (std::size_t i = 0; i < info_bits.size(); i += 3) {
    std::uint8_t s = 0;
    for (std::size_t b = 0; b < 3; ++b)
      s = static_cast<std::uint8_t>((s << 1) | (i + b < info_bits.size() ? info_bits[i + b] : 0));
    symbols.push_back(s);
  }
  while (symbols.size() % kK != 0) symbols.push_back(0);
  BitStream out;
  out.reserve((symbols.size() / kK) * kN * 3);
  for (std::size_t blk = 0; blk < symbols.size(); blk += kK) {
    Message m{};
    for (std::size_t i = 0; i < kK; ++i) m[i] = symbols[blk + i];
    const Codeword c = encode(m);
    for (auto s : c)
      for (int b = 2; b >= 0; --b) out.push_back((s >> b) & 1);
  }
  return out;
}

ReedSolomon75::StreamDecode ReedSolomon75::decode_bits(const BitStream& coded_bits,
                                                       std::size_t original_bits) {
  if (coded_bits.size() % (kN * 3) != 0)
    throw Error(Errc::invalid_argument, "rs stream length must be a multiple of 21 bits");
  StreamDecode out;
  for (std::size_t blk = 0; blk < coded_bits.size(); blk += kN * 3) {
    Codeword c{};
    for (std::size_t i = 0; i < kN; ++i) {
      std::uint8_t s = 0;
      for (std::size_t b = 0; b < 3; ++b)
        s = static_cast<std::uint8_t>((s << 1) | coded_bits[blk + i * 3 + b]);
      c[i] = s;
    }
    const DecodeResult res = decode(c);
    if (!res.ok) ++out.blocks_failed;
    out.symbols_corrected += res.corrected;
    for (auto s : res.message)
      for (int b = 2; b >= 0; --b) out.bits.push_back((s >> b) & 1);
  }
  if (out.bits.size() < original_bits)
    throw Error(Errc::invalid_argument, "rs stream shorter than declared payload");
  out.bits.resize(original_bits);
  return out;
}

}  // namespace semcomm::classical
