// SPDX-License-Identifier: Apache-2.0
#include "semcomm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "semcomm/error.hpp"
#include "semcomm/rng.hpp"

namespace semcomm {

namespace {

constexpr double kWeightSumTol = 1e-9;

// Generic clipped n-gram precision over any equality-comparable token type.
template <typename Tok>
NgramPrecision ngram_precision_impl(const std::vector<Tok>& ref, const std::vector<Tok>& cand,
                                    std::size_t n) {
  if (n < 1) throw Error(Errc::invalid_argument, "n-gram order must be >= 1");
  NgramPrecision out;
  if (cand.size() < n) {
    out.degenerate = true;
    return out;
  }
  std::map<std::vector<Tok>, std::size_t> ref_counts;
  for (std::size_t i = 0; i + n <= ref.size(); ++i)
    ++ref_counts[std::vector<Tok>(ref.begin() + i, ref.begin() + i + n)];
  std::map<std::vector<Tok>, std::size_t> cand_counts;
  for (std::size_t i = 0; i + n <= cand.size(); ++i)
    ++cand_counts[std::vector<Tok>(cand.begin() + i, cand.begin() + i + n)];
  std::size_t clipped = 0, total = 0;
  for (const auto& [gram, c] : cand_counts) {
    total += c;
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) clipped += std::min(c, it->second);
  }
  out.value = total ? static_cast<double>(clipped) / static_cast<double>(total) : 0.0;
  return out;
}

template <typename Tok>
double bleu_impl(const std::vector<Tok>& ref, const std::vector<Tok>& cand,
                 const BleuWeights& weights, const BleuOptions& options) {
  if (ref.empty() || cand.empty()) throw Error(Errc::empty_input, "empty sentence");
  weights.validate();
  const double len_ratio = static_cast<double>(cand.size()) / static_cast<double>(ref.size());
  double brevity;
  if (options.standard_brevity) {
    brevity = cand.size() >= ref.size() ? 1.0 : std::exp(1.0 - 1.0 / len_ratio);
  } else {
    brevity = std::min(1.0, std::exp(1.0 - len_ratio));
  }
  double log_sum = 0.0;
  for (std::size_t i = 0; i < weights.weights.size(); ++i) {
    const double w = weights.weights[i];
    if (w <= 0.0) continue;
    auto p = ngram_precision_impl(ref, cand, i + 1);
    double value = p.value;
    if (options.smoothing && !p.degenerate) {
      // Add-one on clipped and total counts, reconstructed from the ratio.
      const std::size_t total = cand.size() - i;
      const double clipped = value * static_cast<double>(total);
      value = (clipped + 1.0) / (static_cast<double>(total) + 1.0);
    }
    if (value <= 0.0) return 0.0;
    log_sum += w * std::log(value);
  }
  return brevity * std::exp(log_sum);
}

}  // namespace

BleuWeights BleuWeights::uniform(std::size_t max_order) {
  if (max_order < 1) throw Error(Errc::invalid_argument, "BLEU max order must be >= 1");
  BleuWeights w;
  w.weights.assign(max_order, 1.0 / static_cast<double>(max_order));
  return w;
}

BleuWeights BleuWeights::single(std::size_t order) {
  if (order < 1) throw Error(Errc::invalid_argument, "BLEU order must be >= 1");
  BleuWeights w;
  w.weights.assign(order, 0.0);
  w.weights[order - 1] = 1.0;
  return w;
}

void BleuWeights::validate() const {
  if (weights.empty()) throw Error(Errc::invalid_argument, "BLEU weights empty");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw Error(Errc::invalid_argument, "BLEU weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol)
    throw Error(Errc::invalid_argument, "BLEU weights must sum to 1");
}

NgramPrecision ngram_precision(const WordSeq& reference, const WordSeq& candidate,
                               std::size_t n) {
  return ngram_precision_impl(reference, candidate, n);
}

NgramPrecision ngram_precision(const TokenSequence& reference, const TokenSequence& candidate,
                               std::size_t n) {
  return ngram_precision_impl(reference.ids, candidate.ids, n);
}

double bleu(const WordSeq& reference, const WordSeq& candidate, const BleuWeights& weights,
            const BleuOptions& options) {
  return bleu_impl(reference, candidate, weights, options);
}

double bleu(const TokenSequence& reference, const TokenSequence& candidate,
            const BleuWeights& weights, const BleuOptions& options) {
  return bleu_impl(reference.ids, candidate.ids, weights, options);
}

double EmbeddingVector::norm() const {
  double s = 0.0;
  for (double c : components) s += c * c;
  return std::sqrt(s);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension())
    throw Error(Errc::invalid_argument, "embedding dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    dot += a.components[i] * b.components[i];
    na += a.components[i] * a.components[i];
    nb += b.components[i] * b.components[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(Errc::numeric, "cosine of zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

Embedder Embedder::builtin(std::size_t dimension) {
  if (dimension < 1) throw Error(Errc::invalid_argument, "embedder dimension must be >= 1");
  Embedder e;
  e.kind_ = Kind::builtin_hashed;
  e.dimension_ = dimension;
  e.fingerprint_ = fnv1a64("builtin:fnv1a:unigram+trigram:dim=" + std::to_string(dimension));
  return e;
}

Embedder Embedder::external(const std::string& table_path) {
  std::ifstream in(table_path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open embedding table: " + table_path);
  Embedder e;
  e.kind_ = Kind::external_table;
  std::string line;
  std::uint64_t content_hash = 14695981039346656037ULL;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(Errc::format, "embedding table line " + std::to_string(line_no) +
                                    ": missing tab separator");
    std::string key = line.substr(0, tab);
    EmbeddingVector vec;
    std::stringstream ss(line.substr(tab + 1));
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        vec.components.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw Error(Errc::format, "embedding table line " + std::to_string(line_no) +
                                      ": bad number '" + field + "'");
      }
    }
    if (vec.components.empty())
      throw Error(Errc::format,
                  "embedding table line " + std::to_string(line_no) + ": empty vector");
    if (dim == 0) dim = vec.dimension();
    if (vec.dimension() != dim)
      throw Error(Errc::format, "embedding table line " + std::to_string(line_no) +
                                    ": inconsistent dimension");
    content_hash = fnv1a64(key, content_hash);
    content_hash = fnv1a64(vec.components.data(), vec.components.size() * sizeof(double),
                           content_hash);
    e.table_[std::move(key)] = std::move(vec);
  }
  if (e.table_.empty()) throw Error(Errc::format, "embedding table is empty");
  e.dimension_ = dim;
  e.fingerprint_ = fnv1a64("external:dim=" + std::to_string(dim) + ":", content_hash);
  return e;
}

EmbeddingVector Embedder::embed(const WordSeq& sentence) const {
  if (sentence.empty()) throw Error(Errc::empty_input, "cannot embed empty sentence");
  if (kind_ == Kind::external_table) return embed_text(detokenize(sentence));
  EmbeddingVector v;
  v.components.assign(dimension_, 0.0);
  for (const auto& w : sentence) v.components[fnv1a64(w) % dimension_] += 1.0;
  const std::string joined = detokenize(sentence);
  if (joined.size() >= 3) {
    for (std::size_t i = 0; i + 3 <= joined.size(); ++i)
      v.components[fnv1a64(joined.data() + i, 3) % dimension_] += 1.0;
  }
  const double n = v.norm();
  for (double& c : v.components) c /= n;
  return v;
}

EmbeddingVector Embedder::embed_text(const std::string& sentence_text) const {
  if (kind_ == Kind::builtin_hashed) return embed(tokenize(sentence_text));
  auto it = table_.find(sentence_text);
  if (it == table_.end())
    throw Error(Errc::invalid_argument, "embedding not found: '" + sentence_text + "'");
  return it->second;
}

double Embedder::similarity(const WordSeq& a, const WordSeq& b) const {
  return std::max(0.0, cosine(embed(a), embed(b)));
}

double Embedder::similarity_text(const std::string& a, const std::string& b) const {
  return std::max(0.0, cosine(embed_text(a), embed_text(b)));
}

}  // namespace semcomm
