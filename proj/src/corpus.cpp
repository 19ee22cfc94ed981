// SPDX-License-Identifier: Apache-2.0
#include "semcomm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <unordered_map>

#include "semcomm/error.hpp"
#include "semcomm/rng.hpp"

namespace semcomm {

namespace {

bool is_split_punct(char c) {
  static const std::string kSet = ".,!?;:'\"()-";
  return kSet.find(c) != std::string::npos;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (unsigned char uc : text) {
    char c = static_cast<char>(std::tolower(uc));
    if (std::isspace(uc)) {
      flush();
    } else if (is_split_punct(c)) {
      flush();
      out.emplace_back(1, c);
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

std::string detokenize(const WordSeq& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

bool is_punctuation_token(const std::string& token) {
  return token.size() == 1 && is_split_punct(token[0]);
}

std::size_t word_count(const WordSeq& words) {
  std::size_t n = 0;
  for (const auto& w : words)
    if (!is_punctuation_token(w)) ++n;
  return n;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 2 || tokens_[0] != kUnkToken || tokens_[1] != kPadToken)
    throw Error(Errc::invalid_argument, "vocabulary must start with the unk/pad markers");
  rebuild_index();
}

void Vocabulary::rebuild_index() {
  std::size_t cap = 4;
  while (cap < tokens_.size() * 2) cap <<= 1;
  index_.assign(cap, static_cast<std::size_t>(-1));
  for (std::size_t id = 0; id < tokens_.size(); ++id) {
    std::size_t slot = fnv1a64(tokens_[id]) & (cap - 1);
    while (index_[slot] != static_cast<std::size_t>(-1)) {
      if (tokens_[index_[slot]] == tokens_[id])
        throw Error(Errc::invalid_argument, "duplicate token in vocabulary");
      slot = (slot + 1) & (cap - 1);
    }
    index_[slot] = id;
  }
}

std::int32_t Vocabulary::lookup(const std::string& word) const {
  const std::size_t cap = index_.size();
  std::size_t slot = fnv1a64(word) & (cap - 1);
  while (index_[slot] != static_cast<std::size_t>(-1)) {
    if (tokens_[index_[slot]] == word) return static_cast<std::int32_t>(index_[slot]);
    slot = (slot + 1) & (cap - 1);
  }
  return kUnkId;
}

bool Vocabulary::contains(const std::string& word) const {
  return word == kUnkToken || lookup(word) != kUnkId;
}

const std::string& Vocabulary::word(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw Error(Errc::invalid_argument, "token id out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

TokenSequence Vocabulary::encode(const WordSeq& words) const {
  TokenSequence seq;
  seq.ids.reserve(words.size());
  for (const auto& w : words) seq.ids.push_back(lookup(w));
  return seq;
}

WordSeq Vocabulary::decode(const TokenSequence& seq) const {
  WordSeq words;
  words.reserve(seq.ids.size());
  for (auto id : seq.ids) words.push_back(word(id));
  return words;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open vocabulary file for writing: " + path);
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open vocabulary file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return Vocabulary(std::move(tokens));
}

Vocabulary build_vocabulary(const std::vector<WordSeq>& sentences, std::size_t max_size) {
  if (max_size < 2) throw Error(Errc::invalid_argument, "vocabulary max_size must be >= 2");
  if (sentences.empty()) throw Error(Errc::empty_input, "empty corpus");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& s : sentences)
    for (const auto& w : s) ++freq[w];
  std::vector<std::pair<std::string, std::uint64_t>> items(freq.begin(), freq.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens{Vocabulary::kUnkToken, Vocabulary::kPadToken};
  for (std::size_t i = 0; i < items.size() && tokens.size() < max_size; ++i)
    tokens.push_back(items[i].first);
  return Vocabulary(std::move(tokens));
}

std::vector<WordSeq> filter_by_length(const std::vector<WordSeq>& sentences,
                                      std::size_t min_len, std::size_t max_len) {
  std::vector<WordSeq> out;
  for (const auto& s : sentences) {
    const std::size_t n = word_count(s);
    if (n >= min_len && n <= max_len) out.push_back(s);
  }
  return out;
}

std::vector<WordSeq> load_and_filter(const std::string& path, std::size_t min_len,
                                     std::size_t max_len) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open corpus file: " + path);
  std::vector<WordSeq> out;
  std::string line;
  while (std::getline(in, line)) {
    auto words = tokenize(line);
    if (words.empty()) continue;
    const std::size_t n = word_count(words);
    if (n >= min_len && n <= max_len) out.push_back(std::move(words));
  }
  return out;
}

CorpusSplit split(const std::vector<WordSeq>& corpus, std::uint64_t seed) {
  if (corpus.empty()) throw Error(Errc::empty_input, "empty corpus");
  if (corpus.size() < 10) throw Error(Errc::invalid_argument, "corpus too small to split");
  std::vector<std::size_t> idx(corpus.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  const std::size_t n = corpus.size();
  const std::size_t n_val = n / 10;
  const std::size_t n_test = n / 10;
  const std::size_t n_train = n - n_val - n_test;
  CorpusSplit out;
  out.split_seed = seed;
  out.train.reserve(n_train);
  out.validation.reserve(n_val);
  out.test.reserve(n_test);
  for (std::size_t i = 0; i < n; ++i) {
    const WordSeq& s = corpus[idx[i]];
    if (i < n_train)
      out.train.push_back(s);
    else if (i < n_train + n_val)
      out.validation.push_back(s);
    else
      out.test.push_back(s);
  }
  return out;
}

}  // namespace semcomm
