// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "semcomm/corpus.hpp"
#include "semcomm/knowledge_base.hpp"

namespace semcomm {

// Discrete source over sentences; probabilities sum to 1 and are positive.
struct SourceModel {
  std::vector<WordSeq> sentences;
  std::vector<double> probabilities;

  // Empirical source: one entry per corpus line with probability 1/N.
  static SourceModel from_corpus(const std::vector<WordSeq>& corpus);
  void validate() const;
};

// Probability mass pushed onto each KB entry: p(k) is the total source
// probability of sentences whose nearest knowledge is k.
struct KnowledgeDistribution {
  std::vector<double> probabilities;  // one per KB entry, may contain zeros
};

struct SemanticInfoConfig {
  double lambda = 1.0;               // weight of the distance term
  double distance_clamp = 1.0 - 1e-9;  // keeps -log2(1 - D) finite
};

KnowledgeDistribution induced_distribution(const SourceModel& source, const KnowledgeBase& kb);

// I(k) = -log2 p(k); errors when the entry carries no mass.
double knowledge_self_information(const KnowledgeDistribution& dist, std::size_t k_index);

// H(K) = -sum p(k) log2 p(k); zero-mass entries contribute nothing.
double kb_entropy(const KnowledgeDistribution& dist);

// I_s(s) = I(k*_s) - lambda * log2(1 - min(D, clamp)).
double semantic_self_information(const WordSeq& sentence, const KnowledgeBase& kb,
                                 const KnowledgeDistribution& dist,
                                 const SemanticInfoConfig& cfg);

// H_s(S) = sum_s p(s) I_s(s), with I(k*) taken under the induced distribution.
double source_semantic_entropy(const SourceModel& source, const KnowledgeBase& kb,
                               const SemanticInfoConfig& cfg);

struct Decomposition {
  double source_entropy_bits = 0.0;   // H_s(S)
  double kb_entropy_bits = 0.0;       // H(K)
  double residual_bits = 0.0;         // lambda-weighted expected -log2(1 - D)
  double defect = 0.0;                // |H_s(S) - H(K) - residual|
};

Decomposition verify_decomposition(const SourceModel& source, const KnowledgeBase& kb,
                                   const SemanticInfoConfig& cfg);

struct EntropyReportRow {
  std::size_t sentence_index = 0;
  std::size_t nearest_knowledge_index = 0;
  double distance = 0.0;
  double self_information_bits = 0.0;
};

struct EntropyReport {
  std::vector<EntropyReportRow> rows;
  Decomposition totals;
};

EntropyReport entropy_report(const SourceModel& source, const KnowledgeBase& kb,
                             const SemanticInfoConfig& cfg);

// CSV with header "sentence_index,nearest_knowledge_index,distance,
// self_information_bits" and footer rows H_K_bits, H_s_S_bits,
// residual_bits, defect.
void write_entropy_report_csv(const EntropyReport& report, const std::string& path);

}  // namespace semcomm
