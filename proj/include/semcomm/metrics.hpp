// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "semcomm/corpus.hpp"

namespace semcomm {

struct BleuWeights {
  std::vector<double> weights;  // weights[n-1] is the n-gram weight, sum 1

  static BleuWeights uniform(std::size_t max_order);
  static BleuWeights single(std::size_t order);  // weight 1 on one n-gram order
  void validate() const;
};

struct NgramPrecision {
  double value = 0.0;
  bool degenerate = false;  // candidate shorter than n tokens
};

// Clipped n-gram precision: sum over candidate n-grams of
// min(count in candidate, count in reference) / candidate n-gram total.
NgramPrecision ngram_precision(const WordSeq& reference, const WordSeq& candidate,
                               std::size_t n);
NgramPrecision ngram_precision(const TokenSequence& reference, const TokenSequence& candidate,
                               std::size_t n);

struct BleuOptions {
  // The paper's brevity factor min(1, exp(1 - len(cand)/len(ref))) penalizes
  // long candidates. standard_brevity swaps in the conventional BLEU
  // penalty on short candidates instead.
  bool standard_brevity = false;
  // Add-one smoothing of n-gram counts; default off, zero precision gives 0.
  bool smoothing = false;
};

double bleu(const WordSeq& reference, const WordSeq& candidate, const BleuWeights& weights,
            const BleuOptions& options = {});
double bleu(const TokenSequence& reference, const TokenSequence& candidate,
            const BleuWeights& weights, const BleuOptions& options = {});

struct EmbeddingVector {
  std::vector<double> components;

  double norm() const;
  std::size_t dimension() const { return components.size(); }
};

double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Deterministic sentence embedder. The built-in kind hashes word unigrams
// and character trigrams of the space-joined sentence (64-bit FNV-1a modulo
// the dimension) and L2-normalizes the bucket counts. The external kind
// looks sentences up in a user-supplied vector table.
class Embedder {
 public:
  enum class Kind { builtin_hashed, external_table };

  static Embedder builtin(std::size_t dimension = 256);
  // Table file: one record per line, "sentence-text<TAB>v1,v2,...,vD".
  static Embedder external(const std::string& table_path);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }
  // Hash of the embedder configuration; knowledge bases record it so a KB
  // is never silently reused under a different embedding.
  std::uint64_t fingerprint() const { return fingerprint_; }

  EmbeddingVector embed(const WordSeq& sentence) const;
  EmbeddingVector embed_text(const std::string& sentence_text) const;

  // Cosine of the two embeddings clamped below at zero, per the metric's
  // stated [0, 1] range. Symmetric and deterministic.
  double similarity(const WordSeq& a, const WordSeq& b) const;
  double similarity_text(const std::string& a, const std::string& b) const;

 private:
  Embedder() = default;
  Kind kind_ = Kind::builtin_hashed;
  std::size_t dimension_ = 256;
  std::uint64_t fingerprint_ = 0;
  std::unordered_map<std::string, EmbeddingVector> table_;
};

}  // namespace semcomm
