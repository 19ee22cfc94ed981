// SPDX-License-Identifier: Apache-2.0
#include "semcomm/neural/transceiver.hpp"

#include <cmath>

#include "semcomm/rng.hpp"

namespace semcomm::neural {

ModelConfig ModelConfig::paper_scale(std::size_t vocab_size) {
  ModelConfig c;
  c.embedding_dim = 128;
  c.attention_dim = 128;
  c.n_heads = 8;
  c.symbols_per_word = 6;
  c.vocab_size = vocab_size;
  c.max_len = 32;
  return c;
}

ModelConfig ModelConfig::desk_scale(std::size_t vocab_size) {
  ModelConfig c;
  c.embedding_dim = 32;
  c.attention_dim = 32;
  c.n_heads = 4;
  c.symbols_per_word = 4;
  c.vocab_size = vocab_size;
  c.max_len = 26;
  return c;
}

void ModelConfig::validate() const {
  if (embedding_dim == 0 || attention_dim == 0 || n_heads == 0 || symbols_per_word == 0 ||
      vocab_size < 2 || max_len == 0)
    throw Error(Errc::invalid_argument, "invalid model configuration");
}

namespace {

template <typename T>
Tensor<T> xavier(std::size_t rows, std::size_t cols, Rng& rng, const std::string& name) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::vector<T> v(rows * cols);
  for (auto& x : v) x = static_cast<T>(rng.uniform(-bound, bound));
  auto t = Tensor<T>::from_values(rows, cols, std::move(v), true);
  t.set_name(name);
  return t;
}

template <typename T>
Tensor<T> gaussian_init(std::size_t rows, std::size_t cols, double stddev, Rng& rng,
                        const std::string& name) {
  std::vector<T> v(rows * cols);
  for (auto& x : v) x = static_cast<T>(stddev * rng.gaussian());
  auto t = Tensor<T>::from_values(rows, cols, std::move(v), true);
  t.set_name(name);
  return t;
}

template <typename T>
Tensor<T> constant_init(std::size_t rows, std::size_t cols, T value, const std::string& name) {
  auto t = Tensor<T>::from_values(rows, cols, std::vector<T>(rows * cols, value), true);
  t.set_name(name);
  return t;
}

template <typename T>
AttentionParams<T> init_attention(const ModelConfig& cfg, Rng& rng, const std::string& prefix) {
  AttentionParams<T> p;
  for (std::size_t h = 0; h < cfg.n_heads; ++h) {
    const std::string hp = prefix + ".h" + std::to_string(h);
    p.wq.push_back(xavier<T>(cfg.embedding_dim, cfg.attention_dim, rng, hp + ".wq"));
    p.wk.push_back(xavier<T>(cfg.embedding_dim, cfg.attention_dim, rng, hp + ".wk"));
    p.wv.push_back(xavier<T>(cfg.embedding_dim, cfg.attention_dim, rng, hp + ".wv"));
  }
  p.wo = xavier<T>(cfg.n_heads * cfg.attention_dim, cfg.embedding_dim, rng, prefix + ".wo");
  return p;
}

template <typename T>
LayerNormParams<T> init_layer_norm(const ModelConfig& cfg, const std::string& prefix) {
  LayerNormParams<T> p;
  p.gain = constant_init<T>(1, cfg.embedding_dim, T(1), prefix + ".gain");
  p.bias = constant_init<T>(1, cfg.embedding_dim, T(0), prefix + ".bias");
  return p;
}

template <typename T>
DenseBlockParams<T> init_dense(const ModelConfig& cfg, Rng& rng, const std::string& prefix) {
  DenseBlockParams<T> p;
  const std::size_t e = cfg.embedding_dim;
  p.w1 = xavier<T>(e, 4 * e, rng, prefix + ".w1");
  p.b1 = constant_init<T>(1, 4 * e, T(0), prefix + ".b1");
  p.w2 = xavier<T>(4 * e, e, rng, prefix + ".w2");
  p.b2 = constant_init<T>(1, e, T(0), prefix + ".b2");
  return p;
}

template <typename T>
ExtractBlockParams<T> init_extract(const ModelConfig& cfg, Rng& rng, const std::string& prefix) {
  ExtractBlockParams<T> p;
  p.attn = init_attention<T>(cfg, rng, prefix + ".attn");
  p.ln1 = init_layer_norm<T>(cfg, prefix + ".ln1");
  p.ff = init_dense<T>(cfg, rng, prefix + ".ff");
  p.ln2 = init_layer_norm<T>(cfg, prefix + ".ln2");
  return p;
}

template <typename T>
IntegrateBlockParams<T> init_integrate(const ModelConfig& cfg, Rng& rng,
                                       const std::string& prefix) {
  IntegrateBlockParams<T> p;
  p.attn = init_attention<T>(cfg, rng, prefix + ".attn");
  p.ln1 = init_layer_norm<T>(cfg, prefix + ".ln1");
  p.has_dense = cfg.integration_dense;
  if (p.has_dense) {
    p.ff = init_dense<T>(cfg, rng, prefix + ".ff");
    p.ln2 = init_layer_norm<T>(cfg, prefix + ".ln2");
  }
  return p;
}

template <typename T>
void collect_attention(AttentionParams<T>& p, std::vector<Tensor<T>*>& out) {
  for (std::size_t h = 0; h < p.wq.size(); ++h) {
    out.push_back(&p.wq[h]);
    out.push_back(&p.wk[h]);
    out.push_back(&p.wv[h]);
  }
  out.push_back(&p.wo);
}

template <typename T>
void collect_extract(ExtractBlockParams<T>& p, std::vector<Tensor<T>*>& out) {
  collect_attention(p.attn, out);
  out.push_back(&p.ln1.gain);
  out.push_back(&p.ln1.bias);
  out.push_back(&p.ff.w1);
  out.push_back(&p.ff.b1);
  out.push_back(&p.ff.w2);
  out.push_back(&p.ff.b2);
  out.push_back(&p.ln2.gain);
  out.push_back(&p.ln2.bias);
}

template <typename T>
void collect_integrate(IntegrateBlockParams<T>& p, std::vector<Tensor<T>*>& out) {
  collect_attention(p.attn, out);
  out.push_back(&p.ln1.gain);
  out.push_back(&p.ln1.bias);
  if (p.has_dense) {
    out.push_back(&p.ff.w1);
    out.push_back(&p.ff.b1);
    out.push_back(&p.ff.w2);
    out.push_back(&p.ff.b2);
    out.push_back(&p.ln2.gain);
    out.push_back(&p.ln2.bias);
  }
}

}  // namespace

template <typename T>
TransceiverParams<T> TransceiverParams<T>::init(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(Rng::derive(seed, 0xa11c));
  TransceiverParams<T> p;
  p.config = config;
  p.token_embedding = gaussian_init<T>(config.vocab_size, config.embedding_dim, 0.02, rng,
                                       "token_embedding");
  p.positional_embedding =
      gaussian_init<T>(config.max_len, config.embedding_dim, 0.02, rng, "positional_embedding");
  p.extract = init_extract<T>(config, rng, "extract");
  p.tx_integrate = init_integrate<T>(config, rng, "tx_integrate");
  p.channel_encoder_w =
      xavier<T>(config.embedding_dim, 2 * config.symbols_per_word, rng, "channel_encoder.w");
  p.channel_decoder_w =
      xavier<T>(2 * config.symbols_per_word, config.embedding_dim, rng, "channel_decoder.w");
  p.rx_integrate = init_integrate<T>(config, rng, "rx_integrate");
  p.recover = init_extract<T>(config, rng, "recover");
  p.output_projection =
      xavier<T>(config.embedding_dim, config.vocab_size, rng, "output_projection");
  return p;
}

template <typename T>
std::vector<Tensor<T>*> TransceiverParams<T>::parameters() {
  std::vector<Tensor<T>*> out;
  out.push_back(&token_embedding);
  out.push_back(&positional_embedding);
  collect_extract(extract, out);
  collect_integrate(tx_integrate, out);
  out.push_back(&channel_encoder_w);
  out.push_back(&channel_decoder_w);
  collect_integrate(rx_integrate, out);
  collect_extract(recover, out);
  out.push_back(&output_projection);
  return out;
}

template <typename T>
std::vector<const Tensor<T>*> TransceiverParams<T>::parameters() const {
  auto mutable_list = const_cast<TransceiverParams<T>*>(this)->parameters();
  return std::vector<const Tensor<T>*>(mutable_list.begin(), mutable_list.end());
}

template <typename T>
std::size_t TransceiverParams<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto* t : parameters()) n += t->size();
  return n;
}

template <typename T>
void TransceiverParams<T>::zero_grads() {
  for (auto* t : parameters()) t->zero_grad();
}

template <typename T>
Tensor<T> multi_head_attention(const AttentionParams<T>& p, const Tensor<T>& q_in,
                               const Tensor<T>& k_in, const Tensor<T>& v_in,
                               const std::vector<std::uint8_t>* key_keep) {
  if (k_in.rows() != v_in.rows())
    throw Error(Errc::invalid_argument, "attention: key/value row mismatch");
  const std::size_t d = p.wq.empty() ? 0 : p.wq[0].cols();
  const T inv_sqrt_d = T(1) / std::sqrt(static_cast<T>(d));
  std::vector<Tensor<T>> heads;
  heads.reserve(p.wq.size());
  for (std::size_t h = 0; h < p.wq.size(); ++h) {
    Tensor<T> q = matmul(q_in, p.wq[h]);
    Tensor<T> k = matmul(k_in, p.wk[h]);
    Tensor<T> scores = scale(matmul_nt(q, k), inv_sqrt_d);
    Tensor<T> attn = softmax_rows(scores, key_keep);
    heads.push_back(matmul(attn, matmul(v_in, p.wv[h])));
  }
  return matmul(concat_cols(heads), p.wo);
}

template <typename T>
Tensor<T> semantic_extract(const TransceiverParams<T>& params,
                           const std::vector<std::int32_t>& ids,
                           const std::vector<std::uint8_t>* self_keep) {
  if (ids.empty()) throw Error(Errc::empty_input, "cannot extract an empty sentence");
  if (ids.size() > params.config.max_len)
    throw Error(Errc::invalid_argument, "sentence exceeds the model's maximum length");
  Tensor<T> tokens = embedding_rows(params.token_embedding, ids);
  Tensor<T> pos = slice_rows(params.positional_embedding, 0, ids.size());
  Tensor<T> x1 = add(tokens, pos);
  Tensor<T> x2 = multi_head_attention(params.extract.attn, x1, x1, x1, self_keep);
  Tensor<T> x3 = layer_norm_rows(add(x1, x2), params.extract.ln1.gain, params.extract.ln1.bias);
  Tensor<T> hidden = gelu(add_rowvec(matmul(x3, params.extract.ff.w1), params.extract.ff.b1));
  Tensor<T> ff = add_rowvec(matmul(hidden, params.extract.ff.w2), params.extract.ff.b2);
  return layer_norm_rows(add(x3, ff), params.extract.ln2.gain, params.extract.ln2.bias);
}

template <typename T>
Tensor<T> integrate(const IntegrateBlockParams<T>& block, const Tensor<T>& sequence,
                    const Tensor<T>& knowledge,
                    const std::vector<std::uint8_t>* knowledge_keep) {
  Tensor<T> attn = multi_head_attention(block.attn, sequence, knowledge, knowledge, knowledge_keep);
  Tensor<T> out = layer_norm_rows(add(sequence, attn), block.ln1.gain, block.ln1.bias);
  if (block.has_dense) {
    Tensor<T> hidden = gelu(add_rowvec(matmul(out, block.ff.w1), block.ff.b1));
    Tensor<T> ff = add_rowvec(matmul(hidden, block.ff.w2), block.ff.b2);
    out = layer_norm_rows(add(out, ff), block.ln2.gain, block.ln2.bias);
  }
  return out;
}

template <typename T>
Tensor<T> channel_encode(const TransceiverParams<T>& params, const Tensor<T>& residual) {
  return power_normalize(matmul(residual, params.channel_encoder_w));
}

template <typename T>
Tensor<T> channel_decode(const TransceiverParams<T>& params, const Tensor<T>& received) {
  if (received.cols() != 2 * params.config.symbols_per_word)
    throw Error(Errc::invalid_argument, "channel_decode: symbol count mismatch");
  return matmul(received, params.channel_decoder_w);
}

template <typename T>
Tensor<T> recover_probabilities(const TransceiverParams<T>& params, const Tensor<T>& fused) {
  const auto& blk = params.recover;
  Tensor<T> x2 = multi_head_attention(blk.attn, fused, fused, fused);
  Tensor<T> x3 = layer_norm_rows(add(fused, x2), blk.ln1.gain, blk.ln1.bias);
  Tensor<T> hidden = gelu(add_rowvec(matmul(x3, blk.ff.w1), blk.ff.b1));
  Tensor<T> ff = add_rowvec(matmul(hidden, blk.ff.w2), blk.ff.b2);
  Tensor<T> x4 = layer_norm_rows(add(x3, ff), blk.ln2.gain, blk.ln2.bias);
  Tensor<T> logits = matmul(x4, params.output_projection);
  return softmax_rows(logits);
}

template <typename T>
Tensor<T> forward_probabilities(const TransceiverParams<T>& params,
                                const std::vector<std::int32_t>& message_ids,
                                const std::vector<std::int32_t>& knowledge_ids,
                                const std::vector<T>& equalized_noise) {
  Tensor<T> knowledge = semantic_extract(params, knowledge_ids);
  Tensor<T> message = semantic_extract(params, message_ids);
  Tensor<T> residual = integrate(params.tx_integrate, message, knowledge);
  Tensor<T> sent = channel_encode(params, residual);
  Tensor<T> received = sent;
  if (!equalized_noise.empty()) {
    if (equalized_noise.size() != sent.size())
      throw Error(Errc::invalid_argument, "equalized noise length mismatch");
    received = add_constant(sent, equalized_noise);
  }
  Tensor<T> decoded = channel_decode(params, received);
  Tensor<T> fused = integrate(params.rx_integrate, decoded, knowledge);
  return recover_probabilities(params, fused);
}

template <typename T>
std::vector<std::int32_t> greedy_decode(const Tensor<T>& probabilities) {
  std::vector<std::int32_t> out;
  out.reserve(probabilities.rows());
  const std::size_t v = probabilities.cols();
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    const T* row = probabilities.values().data() + i * v;
    std::size_t best = 0;
    for (std::size_t j = 1; j < v; ++j)
      if (row[j] > row[best]) best = j;
    out.push_back(static_cast<std::int32_t>(best));
  }
  return out;
}

template struct TransceiverParams<float>;
template struct TransceiverParams<double>;

template Tensor<float> multi_head_attention(const AttentionParams<float>&, const Tensor<float>&,
                                            const Tensor<float>&, const Tensor<float>&,
                                            const std::vector<std::uint8_t>*);
template Tensor<double> multi_head_attention(const AttentionParams<double>&,
                                             const Tensor<double>&, const Tensor<double>&,
                                             const Tensor<double>&,
                                             const std::vector<std::uint8_t>*);
template Tensor<float> semantic_extract(const TransceiverParams<float>&,
                                        const std::vector<std::int32_t>&,
                                        const std::vector<std::uint8_t>*);
template Tensor<double> semantic_extract(const TransceiverParams<double>&,
                                         const std::vector<std::int32_t>&,
                                         const std::vector<std::uint8_t>*);
template Tensor<float> integrate(const IntegrateBlockParams<float>&, const Tensor<float>&,
                                 const Tensor<float>&, const std::vector<std::uint8_t>*);
template Tensor<double> integrate(const IntegrateBlockParams<double>&, const Tensor<double>&,
                                  const Tensor<double>&, const std::vector<std::uint8_t>*);
template Tensor<float> channel_encode(const TransceiverParams<float>&, const Tensor<float>&);
template Tensor<double> channel_encode(const TransceiverParams<double>&, const Tensor<double>&);
template Tensor<float> channel_decode(const TransceiverParams<float>&, const Tensor<float>&);
template Tensor<double> channel_decode(const TransceiverParams<double>&, const Tensor<double>&);
template Tensor<float> recover_probabilities(const TransceiverParams<float>&,
                                             const Tensor<float>&);
template Tensor<double> recover_probabilities(const TransceiverParams<double>&,
                                              const Tensor<double>&);
template Tensor<float> forward_probabilities(const TransceiverParams<float>&,
                                             const std::vector<std::int32_t>&,
                                             const std::vector<std::int32_t>&,
                                             const std::vector<float>&);
template Tensor<double> forward_probabilities(const TransceiverParams<double>&,
                                              const std::vector<std::int32_t>&,
                                              const std::vector<std::int32_t>&,
                                              const std::vector<double>&);
template std::vector<std::int32_t> greedy_decode(const Tensor<float>&);
template std::vector<std::int32_t> greedy_decode(const Tensor<double>&);

}  // namespace semcomm::neural
