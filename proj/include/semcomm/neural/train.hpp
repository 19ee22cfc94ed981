// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "semcomm/channel.hpp"
#include "semcomm/corpus.hpp"
#include "semcomm/knowledge_base.hpp"
#include "semcomm/neural/transceiver.hpp"

namespace semcomm::neural {

struct TrainConfig {
  double learning_rate = 1e-2;
  double rho = 0.95;
  double epsilon = 1e-6;
  std::size_t batch_size = 256;
  std::size_t epochs = 100;
  double snr_low_db = 0.0;
  double snr_high_db = 10.0;
  double validation_snr_db = 3.0;
  ChannelKind channel = ChannelKind::awgn;
  double rician_k_db = 10.0;
  bool noiseless = false;  // overrides the SNR range entirely
  double anneal_floor = 1e-4;  // cosine-annealed lr floor as a fraction
  std::uint64_t seed = 1;

  static TrainConfig paper_scale();
  static TrainConfig desk_scale();
};

// One training/evaluation item: message ids plus the ids of its nearest
// knowledge (already selected per the distance rule).
struct Example {
  std::vector<std::int32_t> message;
  std::vector<std::int32_t> knowledge;
};

// The knowledge ids fed to the no-knowledge ablation: a single unknown
// marker, so the integration path carries no sentence information.
std::vector<std::int32_t> null_knowledge_ids();

// Tokenizes sentences and attaches each one's nearest KB entry. A null kb
// (ablation) attaches null_knowledge_ids().
std::vector<Example> prepare_examples(const std::vector<WordSeq>& corpus,
                                      const KnowledgeBase* kb, const Vocabulary& vocab);

struct EpochStats {
  std::size_t epoch = 0;      // 1-based
  double train_loss = 0.0;    // epoch mean over batches
  double validation_loss = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> trace;
};

// Algorithm-2 style loop: per batch, draw one uniform SNR from the training
// range, forward each example through the transceiver and the equalized
// channel, accumulate gradients in example order, then take one Adadelta
// step with a cosine-annealed learning rate. Deterministic under
// config.seed; a non-finite loss aborts with diagnostic context.
template <typename T>
TrainResult train(TransceiverParams<T>& params, const std::vector<Example>& train_set,
                  const std::vector<Example>& validation_set, const TrainConfig& config,
                  const std::function<void(const EpochStats&)>& on_epoch = nullptr);

void write_loss_trace_csv(const TrainResult& result, const std::string& path);

struct TransmitOutcome {
  TokenSequence decoded;
  std::size_t complex_symbols = 0;
  std::size_t knowledge_index = 0;
  bool used_knowledge = true;
};

// Nearest-knowledge selection, forward pass through the configured channel
// with perfect-CSI equalization, greedy decoding. kb == nullptr runs the
// no-knowledge ablation at the identical symbol budget.
template <typename T>
TransmitOutcome end_to_end_transmit(const TransceiverParams<T>& params, const KnowledgeBase* kb,
                                    const Vocabulary& vocab, const WordSeq& sentence,
                                    const ChannelConfig& channel, Rng& rng);

extern template TrainResult train(TransceiverParams<float>&, const std::vector<Example>&,
                                  const std::vector<Example>&, const TrainConfig&,
                                  const std::function<void(const EpochStats&)>&);
extern template TrainResult train(TransceiverParams<double>&, const std::vector<Example>&,
                                  const std::vector<Example>&, const TrainConfig&,
                                  const std::function<void(const EpochStats&)>&);
extern template TransmitOutcome end_to_end_transmit(const TransceiverParams<float>&,
                                                    const KnowledgeBase*, const Vocabulary&,
                                                    const WordSeq&, const ChannelConfig&, Rng&);
extern template TransmitOutcome end_to_end_transmit(const TransceiverParams<double>&,
                                                    const KnowledgeBase*, const Vocabulary&,
                                                    const WordSeq&, const ChannelConfig&, Rng&);

}  // namespace semcomm::neural
