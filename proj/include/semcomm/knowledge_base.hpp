// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "semcomm/corpus.hpp"
#include "semcomm/metrics.hpp"

namespace semcomm {

struct KnowledgeEntry {
  std::size_t index = 0;  // position of insertion, stable across updates
  WordSeq sentence;
  EmbeddingVector embedding;
};

struct NearestKnowledge {
  std::size_t index = 0;
  double distance = 0.0;  // 1 - similarity, in [0, 1]
};

constexpr std::size_t kUnlimitedKbSize = std::numeric_limits<std::size_t>::max();

// Shared knowledge base: an ordered set of mutually dissimilar sentences.
// Construction is a single greedy pass in corpus order; a sentence is
// admitted iff its similarity to every current entry is <= theta. Admission
// stops once max_size entries exist.
class KnowledgeBase {
 public:
  KnowledgeBase(double theta, std::size_t max_size, const Embedder& embedder);

  static KnowledgeBase build(const std::vector<WordSeq>& corpus, double theta,
                             std::size_t max_size, const Embedder& embedder);

  // Runs the construction pass with this KB as the initial state. Existing
  // indices are unchanged; new entries are appended. Returns the number of
  // admitted sentences.
  std::size_t update(const std::vector<WordSeq>& new_corpus, const Embedder& embedder);

  NearestKnowledge find_nearest(const WordSeq& sentence) const;
  NearestKnowledge find_nearest(const EmbeddingVector& embedding) const;

  // Empirical mean of the nearest-knowledge distance over a corpus.
  double objective(const std::vector<WordSeq>& corpus) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const KnowledgeEntry& entry(std::size_t index) const;
  const std::vector<KnowledgeEntry>& entries() const { return entries_; }
  const Embedder& embedder() const { return *embedder_; }
  double theta() const { return theta_; }
  std::size_t max_size() const { return max_size_; }
  std::uint64_t embedder_fingerprint() const { return embedder_->fingerprint(); }

  // Bits needed to address an entry over the error-free control plane:
  // ceil(log2(max(2, size))).
  std::size_t index_bits() const;

  void save(const std::string& path) const;
  // Re-embeds every stored sentence under the given embedder, checks the
  // recorded fingerprint and the pairwise-similarity invariant.
  static KnowledgeBase load(const std::string& path, const Embedder& embedder);

 private:
  bool admit(const WordSeq& sentence);

  double theta_;
  std::size_t max_size_;
  std::shared_ptr<const Embedder> embedder_;
  std::vector<KnowledgeEntry> entries_;
};

}  // namespace semcomm
