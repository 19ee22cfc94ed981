// SPDX-License-Identifier: Apache-2.0
#include "semcomm/semantic_info.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "semcomm/error.hpp"

namespace semcomm {

namespace {

constexpr double kProbSumTol = 1e-12;

double log2d(double x) { return std::log2(x); }

}  // namespace

SourceModel SourceModel::from_corpus(const std::vector<WordSeq>& corpus) {
  if (corpus.empty()) throw Error(Errc::empty_input, "empty corpus");
  SourceModel m;
  m.sentences = corpus;
  m.probabilities.assign(corpus.size(), 1.0 / static_cast<double>(corpus.size()));
  return m;
}

void SourceModel::validate() const {
  if (sentences.empty()) throw Error(Errc::empty_input, "source model empty");
  if (sentences.size() != probabilities.size())
    throw Error(Errc::invalid_argument, "source model size mismatch");
  double sum = 0.0;
  for (double p : probabilities) {
    if (p <= 0.0) throw Error(Errc::invalid_argument, "source probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(Errc::invalid_argument, "source probabilities must sum to 1");
}

KnowledgeDistribution induced_distribution(const SourceModel& source, const KnowledgeBase& kb) {
  source.validate();
  if (kb.empty()) throw Error(Errc::empty_input, "knowledge base empty");
  KnowledgeDistribution dist;
  dist.probabilities.assign(kb.size(), 0.0);
  for (std::size_t i = 0; i < source.sentences.size(); ++i) {
    const auto nearest = kb.find_nearest(source.sentences[i]);
    dist.probabilities[nearest.index] += source.probabilities[i];
  }
  return dist;
}

double knowledge_self_information(const KnowledgeDistribution& dist, std::size_t k_index) {
  if (k_index >= dist.probabilities.size())
    throw Error(Errc::invalid_argument, "knowledge index out of range");
  const double p = dist.probabilities[k_index];
  if (p <= 0.0) throw Error(Errc::invalid_argument, "knowledge has zero mass");
  return -log2d(p);
}

double kb_entropy(const KnowledgeDistribution& dist) {
  double sum = 0.0;
  double h = 0.0;
  for (double p : dist.probabilities) {
    if (p < 0.0) throw Error(Errc::invalid_argument, "negative probability");
    sum += p;
    if (p > 0.0) h -= p * log2d(p);
  }
  if (std::abs(sum - 1.0) > 1e-9 && sum > kProbSumTol)
    throw Error(Errc::invalid_argument, "knowledge distribution must sum to 1");
  return h;
}

double semantic_self_information(const WordSeq& sentence, const KnowledgeBase& kb,
                                 const KnowledgeDistribution& dist,
                                 const SemanticInfoConfig& cfg) {
  if (cfg.lambda <= 0.0) throw Error(Errc::invalid_argument, "lambda must be positive");
  const auto nearest = kb.find_nearest(sentence);
  const double info_k = knowledge_self_information(dist, nearest.index);
  const double d = std::min(nearest.distance, cfg.distance_clamp);
  return info_k - cfg.lambda * log2d(1.0 - d);
}

double source_semantic_entropy(const SourceModel& source, const KnowledgeBase& kb,
                               const SemanticInfoConfig& cfg) {
  return verify_decomposition(source, kb, cfg).source_entropy_bits;
}

Decomposition verify_decomposition(const SourceModel& source, const KnowledgeBase& kb,
                                   const SemanticInfoConfig& cfg) {
  return entropy_report(source, kb, cfg).totals;
}

EntropyReport entropy_report(const SourceModel& source, const KnowledgeBase& kb,
                             const SemanticInfoConfig& cfg) {
  source.validate();
  if (cfg.lambda <= 0.0) throw Error(Errc::invalid_argument, "lambda must be positive");
  if (cfg.distance_clamp <= 0.0 || cfg.distance_clamp >= 1.0)
    throw Error(Errc::invalid_argument, "distance clamp must lie in (0, 1)");
  const KnowledgeDistribution dist = induced_distribution(source, kb);

  EntropyReport report;
  report.rows.reserve(source.sentences.size());
  double h_s = 0.0;
  double residual = 0.0;
  for (std::size_t i = 0; i < source.sentences.size(); ++i) {
    const auto nearest = kb.find_nearest(source.sentences[i]);
    const double d = std::min(nearest.distance, cfg.distance_clamp);
    const double info_k = knowledge_self_information(dist, nearest.index);
    const double dist_term = -cfg.lambda * log2d(1.0 - d);
    const double info_s = info_k + dist_term;
    h_s += source.probabilities[i] * info_s;
    residual += source.probabilities[i] * dist_term;
    report.rows.push_back(EntropyReportRow{i, nearest.index, nearest.distance, info_s});
  }
  report.totals.source_entropy_bits = h_s;
  report.totals.kb_entropy_bits = kb_entropy(dist);
  report.totals.residual_bits = residual;
  report.totals.defect =
      std::abs(h_s - report.totals.kb_entropy_bits - residual);
  return report;
}

void write_entropy_report_csv(const EntropyReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open report file for writing: " + path);
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  out << "sentence_index,nearest_knowledge_index,distance,self_information_bits\n";
  for (const auto& r : report.rows)
    out << r.sentence_index << ',' << r.nearest_knowledge_index << ',' << num(r.distance)
        << ',' << num(r.self_information_bits) << '\n';
  out << "H_K_bits,,," << num(report.totals.kb_entropy_bits) << '\n';
  out << "H_s_S_bits,,," << num(report.totals.source_entropy_bits) << '\n';
  out << "residual_bits,,," << num(report.totals.residual_bits) << '\n';
  out << "defect,,," << num(report.totals.defect) << '\n';
  if (!out) throw Error(Errc::io, "write failed: " + path);
}

}  // namespace semcomm
