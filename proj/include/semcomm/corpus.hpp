// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semcomm {

// A sentence as a list of lowercase word/punctuation tokens.
using WordSeq = std::vector<std::string>;

// A sentence as vocabulary indices.
struct TokenSequence {
  std::vector<std::int32_t> ids;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  bool operator==(const TokenSequence&) const = default;
};

// Ordered token table. Index 0 is the unknown marker, index 1 the padding
// marker; out-of-vocabulary words map to index 0.
class Vocabulary {
 public:
  static constexpr std::int32_t kUnkId = 0;
  static constexpr std::int32_t kPadId = 1;
  static constexpr const char* kUnkToken = "<unk>";
  static constexpr const char* kPadToken = "<pad>";

  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  std::int32_t lookup(const std::string& word) const;  // kUnkId when absent
  const std::string& word(std::int32_t id) const;
  bool contains(const std::string& word) const;

  TokenSequence encode(const WordSeq& words) const;
  WordSeq decode(const TokenSequence& seq) const;

  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> index_;  // open-addressed hash of token -> id
  void rebuild_index();
};

struct CorpusSplit {
  std::vector<WordSeq> train;
  std::vector<WordSeq> validation;
  std::vector<WordSeq> test;
  std::uint64_t split_seed = 0;
};

// Lowercases, splits the punctuation set {. , ! ? ; : ' " ( ) -} into
// standalone tokens, and collapses whitespace runs.
std::vector<std::string> tokenize(const std::string& text);

// Inverse of tokenize up to whitespace: joins tokens with single spaces.
std::string detokenize(const WordSeq& words);

bool is_punctuation_token(const std::string& token);

// Number of non-punctuation tokens; this is the "word count" used by the
// corpus length filter.
std::size_t word_count(const WordSeq& words);

// The max_size-2 most frequent words (frequency ties broken
// lexicographically) plus the unknown/padding markers.
Vocabulary build_vocabulary(const std::vector<WordSeq>& sentences, std::size_t max_size);

// One sentence per line; sentences whose word count falls outside
// [min_len, max_len] are dropped, order preserved.
std::vector<WordSeq> load_and_filter(const std::string& path, std::size_t min_len = 5,
                                     std::size_t max_len = 20);

std::vector<WordSeq> filter_by_length(const std::vector<WordSeq>& sentences,
                                      std::size_t min_len = 5, std::size_t max_len = 20);

// Deterministic shuffle under seed, then an 8:1:1 partition.
CorpusSplit split(const std::vector<WordSeq>& corpus, std::uint64_t seed);

}  // namespace semcomm
