// SPDX-License-Identifier: Apache-2.0
#include "semcomm/classical/char_alphabet.hpp"

#include "semcomm/error.hpp"

namespace semcomm::classical {

CharAlphabet::CharAlphabet() {
  std::size_t n = 0;
  for (char c = 'a'; c <= 'z'; ++c) chars_[n++] = c;
  for (char c = '0'; c <= '9'; ++c) chars_[n++] = c;
  chars_[n++] = ' ';
  static const char kSymbols[] = ".,!?;:'\"()-_/\\@#$%&*+=<>[]~";
  for (const char* p = kSymbols; *p; ++p) chars_[n++] = *p;
  if (n != kSize) throw Error(Errc::invalid_argument, "alphabet must have 64 characters");
  index_.fill(-1);
  for (std::size_t i = 0; i < kSize; ++i)
    index_[static_cast<unsigned char>(chars_[i])] = static_cast<std::int8_t>(i);
}

int CharAlphabet::index_of(char c) const { return index_[static_cast<unsigned char>(c)]; }

char CharAlphabet::char_at(std::size_t index) const {
  if (index >= kSize) throw Error(Errc::invalid_argument, "alphabet index out of range");
  return chars_[index];
}

std::string CharAlphabet::sanitize(const std::string& text, std::size_t* substituted) const {
  std::string out;
  out.reserve(text.size());
  std::size_t subs = 0;
  for (char c : text) {
    if (contains(c)) {
      out.push_back(c);
    } else {
      out.push_back(' ');
      ++subs;
    }
  }
  if (substituted) *substituted = subs;
  return out;
}

const CharAlphabet& char_alphabet() {
  static const CharAlphabet alphabet;
  return alphabet;
}

Fixed6Result fixed6_encode(const std::string& text) {
  const CharAlphabet& a = char_alphabet();
  Fixed6Result out;
  const std::string clean = a.sanitize(text, &out.substituted);
  out.bits.reserve(clean.size() * 6);
  for (char c : clean) {
    const int idx = a.index_of(c);
    for (int b = 5; b >= 0; --b) out.bits.push_back((idx >> b) & 1);
  }
  return out;
}

std::string fixed6_decode(const BitStream& bits) {
  if (bits.size() % 6 != 0)
    throw Error(Errc::invalid_argument, "fixed-6 stream length must be a multiple of 6");
  const CharAlphabet& a = char_alphabet();
  std::string out;
  out.reserve(bits.size() / 6);
  for (std::size_t i = 0; i < bits.size(); i += 6) {
    int idx = 0;
    for (std::size_t b = 0; b < 6; ++b) idx = (idx << 1) | bits[i + b];
    out.push_back(a.char_at(static_cast<std::size_t>(idx)));
  }
  return out;
}

}  // namespace semcomm::classical
