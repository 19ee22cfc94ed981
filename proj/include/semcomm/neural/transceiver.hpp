// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semcomm/neural/ops.hpp"
#include "semcomm/neural/tensor.hpp"

namespace semcomm::neural {

struct ModelConfig {
  std::size_t embedding_dim = 128;   // E
  std::size_t attention_dim = 128;   // d
  std::size_t n_heads = 8;           // attention subspaces
  std::size_t symbols_per_word = 6;  // M complex symbols per token
  std::size_t vocab_size = 0;
  std::size_t max_len = 32;          // positions with a positional embedding
  bool integration_dense = false;    // dense/GELU sub-block inside integration

  static ModelConfig paper_scale(std::size_t vocab_size);
  static ModelConfig desk_scale(std::size_t vocab_size);
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

template <typename T>
struct AttentionParams {
  std::vector<Tensor<T>> wq, wk, wv;  // one E x d matrix per head
  Tensor<T> wo;                       // (heads * d) x E
};

template <typename T>
struct LayerNormParams {
  Tensor<T> gain, bias;  // 1 x E
};

template <typename T>
struct DenseBlockParams {
  Tensor<T> w1, b1, w2, b2;  // E x 4E, 1 x 4E, 4E x E, 1 x E
};

template <typename T>
struct ExtractBlockParams {
  AttentionParams<T> attn;
  LayerNormParams<T> ln1;
  DenseBlockParams<T> ff;
  LayerNormParams<T> ln2;
};

template <typename T>
struct IntegrateBlockParams {
  AttentionParams<T> attn;
  LayerNormParams<T> ln1;
  // Present only with ModelConfig::integration_dense.
  DenseBlockParams<T> ff;
  LayerNormParams<T> ln2;
  bool has_dense = false;
};

// All learnable state of the transceiver. The extraction block is shared
// between message and knowledge paths by construction: there is a single
// parameter set.
template <typename T>
struct TransceiverParams {
  ModelConfig config;
  Tensor<T> token_embedding;       // V x E
  Tensor<T> positional_embedding;  // max_len x E
  ExtractBlockParams<T> extract;
  IntegrateBlockParams<T> tx_integrate;
  Tensor<T> channel_encoder_w;  // E x 2M
  Tensor<T> channel_decoder_w;  // 2M x E
  IntegrateBlockParams<T> rx_integrate;
  ExtractBlockParams<T> recover;
  Tensor<T> output_projection;  // E x V

  static TransceiverParams init(const ModelConfig& config, std::uint64_t seed);

  // Canonical parameter order; checkpoints and the optimizer both use it.
  std::vector<Tensor<T>*> parameters();
  std::vector<const Tensor<T>*> parameters() const;
  std::size_t parameter_count() const;
  void zero_grads();
};

// softmax(Q Wq (K Wk)^T / sqrt(d)) V Wv per head, heads concatenated and
// projected by Wo. Output rows follow the query input. key_keep masks
// padded key positions out of the softmax.
template <typename T>
Tensor<T> multi_head_attention(const AttentionParams<T>& p, const Tensor<T>& q_in,
                               const Tensor<T>& k_in, const Tensor<T>& v_in,
                               const std::vector<std::uint8_t>* key_keep = nullptr);

// Token + positional embedding, self-attention, add & norm, dense/GELU,
// add & norm. Shared verbatim by message and knowledge paths.
template <typename T>
Tensor<T> semantic_extract(const TransceiverParams<T>& params,
                           const std::vector<std::int32_t>& ids,
                           const std::vector<std::uint8_t>* self_keep = nullptr);

// Cross-attention fusion of a sequence with the processed knowledge,
// followed by residual connection and layer norm. The sequence path (the
// message s' at the transmitter, the received residual at the receiver) is
// the attention query and the residual operand, which keeps the output at
// L_s rows for any knowledge length.
template <typename T>
Tensor<T> integrate(const IntegrateBlockParams<T>& block, const Tensor<T>& sequence,
                    const Tensor<T>& knowledge,
                    const std::vector<std::uint8_t>* knowledge_keep = nullptr);

// Dense E -> 2M per word, then block power normalization; the 2M reals per
// row are (re, im) pairs of M complex symbols.
template <typename T>
Tensor<T> channel_encode(const TransceiverParams<T>& params, const Tensor<T>& residual);

// Dense 2M -> E per word.
template <typename T>
Tensor<T> channel_decode(const TransceiverParams<T>& params, const Tensor<T>& received);

// Mirror of extraction plus projection to vocabulary probabilities; each
// output row is a distribution over tokens.
template <typename T>
Tensor<T> recover_probabilities(const TransceiverParams<T>& params, const Tensor<T>& fused);

// Full differentiable pass: extract both paths, integrate, channel encode,
// apply the (constant) equalized channel perturbation, decode, integrate,
// recover. equalized_noise holds one real per transmitted real (n/h after
// perfect-CSI equalization); empty means a noiseless channel.
template <typename T>
Tensor<T> forward_probabilities(const TransceiverParams<T>& params,
                                const std::vector<std::int32_t>& message_ids,
                                const std::vector<std::int32_t>& knowledge_ids,
                                const std::vector<T>& equalized_noise);

// Greedy per-position argmax.
template <typename T>
std::vector<std::int32_t> greedy_decode(const Tensor<T>& probabilities);

extern template struct TransceiverParams<float>;
extern template struct TransceiverParams<double>;

}  // namespace semcomm::neural
