// SPDX-License-Identifier: Apache-2.0
#include "semcomm/knowledge_base.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "semcomm/error.hpp"

namespace semcomm {

KnowledgeBase::KnowledgeBase(double theta, std::size_t max_size, const Embedder& embedder)
    : theta_(theta), max_size_(max_size), embedder_(std::make_shared<Embedder>(embedder)) {
  if (theta < 0.0 || theta > 1.0)
    throw Error(Errc::invalid_argument, "theta must lie in [0, 1]");
  if (max_size < 1) throw Error(Errc::invalid_argument, "knowledge base max_size must be >= 1");
}

bool KnowledgeBase::admit(const WordSeq& sentence) {
  if (entries_.size() >= max_size_) return false;
  EmbeddingVector emb = embedder_->embed(sentence);
  // "similarity > theta => skip"; equality admits.
  for (const auto& e : entries_) {
    if (std::max(0.0, cosine(emb, e.embedding)) > theta_) return false;
  }
  entries_.push_back(KnowledgeEntry{entries_.size(), sentence, std::move(emb)});
  return true;
}

KnowledgeBase KnowledgeBase::build(const std::vector<WordSeq>& corpus, double theta,
                                   std::size_t max_size, const Embedder& embedder) {
  KnowledgeBase kb(theta, max_size, embedder);
  kb.update(corpus, embedder);
  return kb;
}

std::size_t KnowledgeBase::update(const std::vector<WordSeq>& new_corpus,
                                  const Embedder& embedder) {
  if (embedder.fingerprint() != embedder_->fingerprint())
    throw Error(Errc::embedder_mismatch, "embedder mismatch");
  std::size_t added = 0;
  for (const auto& s : new_corpus) {
    if (s.empty()) continue;
    if (entries_.size() >= max_size_) break;
    if (admit(s)) ++added;
  }
  return added;
}

NearestKnowledge KnowledgeBase::find_nearest(const EmbeddingVector& embedding) const {
  if (entries_.empty()) throw Error(Errc::empty_input, "knowledge base empty");
  NearestKnowledge best{0, 2.0};
  for (const auto& e : entries_) {
    const double d = 1.0 - std::max(0.0, cosine(embedding, e.embedding));
    if (d < best.distance) {  // strict: ties keep the lowest index
      best.distance = d;
      best.index = e.index;
    }
  }
  best.distance = std::clamp(best.distance, 0.0, 1.0);
  return best;
}

NearestKnowledge KnowledgeBase::find_nearest(const WordSeq& sentence) const {
  if (entries_.empty()) throw Error(Errc::empty_input, "knowledge base empty");
  return find_nearest(embedder_->embed(sentence));
}

double KnowledgeBase::objective(const std::vector<WordSeq>& corpus) const {
  if (entries_.empty()) throw Error(Errc::empty_input, "knowledge base empty");
  if (corpus.empty()) throw Error(Errc::empty_input, "empty corpus");
  double sum = 0.0;
  for (const auto& s : corpus) sum += find_nearest(s).distance;
  return sum / static_cast<double>(corpus.size());
}

const KnowledgeEntry& KnowledgeBase::entry(std::size_t index) const {
  if (index >= entries_.size())
    throw Error(Errc::invalid_argument, "knowledge index out of range");
  return entries_[index];
}

std::size_t KnowledgeBase::index_bits() const {
  const std::size_t n = std::max<std::size_t>(2, entries_.size());
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

void KnowledgeBase::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open knowledge base file for writing: " + path);
  char fp[17];
  std::snprintf(fp, sizeof fp, "%016llx",
                static_cast<unsigned long long>(embedder_->fingerprint()));
  char theta_buf[40];
  std::snprintf(theta_buf, sizeof theta_buf, "%.17g", theta_);
  out << "theta=" << theta_buf << '\n';
  if (max_size_ == kUnlimitedKbSize)
    out << "max_size=unlimited\n";
  else
    out << "max_size=" << max_size_ << '\n';
  out << "embedder=" << fp << '\n';
  for (const auto& e : entries_) out << e.index << '\t' << detokenize(e.sentence) << '\n';
  if (!out) throw Error(Errc::io, "write failed: " + path);
}

KnowledgeBase KnowledgeBase::load(const std::string& path, const Embedder& embedder) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open knowledge base file: " + path);
  std::string line;
  auto header_value = [&](const char* key) {
    if (!std::getline(in, line)) throw Error(Errc::format, "malformed knowledge base");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string prefix = std::string(key) + "=";
    if (line.rfind(prefix, 0) != 0)
      throw Error(Errc::format, "malformed knowledge base: expected " + prefix + "...");
    return line.substr(prefix.size());
  };
  const std::string theta_str = header_value("theta");
  const std::string max_str = header_value("max_size");
  const std::string fp_str = header_value("embedder");
  double theta = 0.0;
  std::size_t max_size = kUnlimitedKbSize;
  std::uint64_t fingerprint = 0;
  try {
    theta = std::stod(theta_str);
    if (max_str != "unlimited") max_size = std::stoull(max_str);
    fingerprint = std::stoull(fp_str, nullptr, 16);
  } catch (const std::exception&) {
    throw Error(Errc::format, "malformed knowledge base header");
  }
  if (fingerprint != embedder.fingerprint())
    throw Error(Errc::embedder_mismatch, "embedder mismatch");
  KnowledgeBase kb(theta, max_size, embedder);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(Errc::format, "malformed knowledge base: missing tab");
    std::size_t index = 0;
    try {
      index = std::stoull(line.substr(0, tab));
    } catch (const std::exception&) {
      throw Error(Errc::format, "malformed knowledge base: bad index");
    }
    if (index != kb.entries_.size())
      throw Error(Errc::format, "malformed knowledge base: duplicate or out-of-order index");
    WordSeq sentence = tokenize(line.substr(tab + 1));
    if (sentence.empty())
      throw Error(Errc::format, "malformed knowledge base: empty sentence");
    EmbeddingVector emb = embedder.embed(sentence);
    kb.entries_.push_back(KnowledgeEntry{index, std::move(sentence), std::move(emb)});
  }
  if (kb.entries_.size() > max_size)
    throw Error(Errc::format, "malformed knowledge base: size exceeds max_size");
  for (std::size_t i = 0; i < kb.entries_.size(); ++i) {
    for (std::size_t j = i + 1; j < kb.entries_.size(); ++j) {
      const double s =
          std::max(0.0, cosine(kb.entries_[i].embedding, kb.entries_[j].embedding));
      if (s > theta + 1e-12)
        throw Error(Errc::format, "malformed knowledge base: pairwise similarity above theta");
    }
  }
  return kb;
}

}  // namespace semcomm
