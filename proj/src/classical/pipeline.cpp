// SPDX-License-Identifier: Apache-2.0
#include "semcomm/classical/pipeline.hpp"

#include <cmath>

#include "semcomm/classical/char_alphabet.hpp"
#include "semcomm/classical/qam64.hpp"
#include "semcomm/classical/reed_solomon.hpp"
#include "semcomm/error.hpp"

namespace semcomm::classical {

const char* to_string(SourceCodeKind kind) {
  return kind == SourceCodeKind::huffman ? "huffman" : "fixed6";
}

const char* to_string(ChannelCodeKind kind) {
  switch (kind) {
    case ChannelCodeKind::rs: return "rs";
    case ChannelCodeKind::ldpc: return "ldpc";
    case ChannelCodeKind::none: return "none";
  }
  return "?";
}

PipelineResult classical_pipeline(const std::string& text, const PipelineConfig& config,
                                  Rng& rng) {
  if (text.empty()) throw Error(Errc::empty_input, "empty sentence");
  PipelineResult out;

  // Source coding.
  BitStream source_bits;
  if (config.source_code == SourceCodeKind::huffman) {
    if (!config.huffman)
      throw Error(Errc::invalid_argument, "huffman source code requires a code table");
    source_bits = config.huffman->encode(text);
  } else {
    source_bits = fixed6_encode(text).bits;
  }
  const std::size_t info_len = source_bits.size();

  // Channel coding.
  BitStream coded_bits;
  std::size_t ldpc_pad = 0;
  if (config.channel_code == ChannelCodeKind::rs) {
    coded_bits = ReedSolomon75::encode_bits(source_bits);
  } else if (config.channel_code == ChannelCodeKind::ldpc) {
    if (!config.ldpc) throw Error(Errc::invalid_argument, "ldpc channel code requires a code");
    const std::size_t k = config.ldpc->info_length();
    BitStream padded = source_bits;
    while (padded.size() % k != 0) {
      padded.push_back(0);
      ++ldpc_pad;
    }
    for (std::size_t off = 0; off < padded.size(); off += k) {
      BitStream block(padded.begin() + off, padded.begin() + off + k);
      const BitStream cw = config.ldpc->encode(block);
      coded_bits.insert(coded_bits.end(), cw.begin(), cw.end());
    }
  } else {
    coded_bits = source_bits;
  }

  // Modulation and channel.
  const Qam64::Modulated mod = Qam64::modulate(coded_bits);
  out.complex_symbols = mod.symbols.size();
  auto [received, realization] = transmit(mod.symbols, config.channel, rng);
  const ComplexSymbolBlock equalized = equalize(received, realization);

  // Demodulation and channel decoding.
  BitStream decoded_bits;
  if (config.channel_code == ChannelCodeKind::rs) {
    const BitStream hard = Qam64::demodulate(equalized, mod.pad_bits);
    const auto stream = ReedSolomon75::decode_bits(hard, info_len);
    decoded_bits = stream.bits;
    out.rs_blocks_failed = stream.blocks_failed;
    out.rs_symbols_corrected = stream.symbols_corrected;
  } else if (config.channel_code == ChannelCodeKind::ldpc) {
    // Equalized noise variance is sigma^2 / |h|^2 under perfect CSI.
    double sigma2 = config.channel.noiseless
                        ? 1e-12
                        : noise_variance_for_snr_db(config.channel.snr_db);
    sigma2 /= std::norm(realization.gain);
    const std::vector<double> llr = Qam64::llrs(equalized, sigma2, mod.pad_bits);
    const std::size_t n = config.ldpc->block_length();
    if (llr.size() % n != 0)
      throw Error(Errc::numeric, "ldpc stream length mismatch after demodulation");
    for (std::size_t off = 0; off < llr.size(); off += n) {
      std::vector<double> block(llr.begin() + off, llr.begin() + off + n);
      const auto res = config.ldpc->decode(block, config.ldpc_max_iterations);
      if (!res.converged) ++out.ldpc_blocks_unconverged;
      decoded_bits.insert(decoded_bits.end(), res.info_bits.begin(), res.info_bits.end());
    }
    if (decoded_bits.size() < info_len + ldpc_pad)
      throw Error(Errc::numeric, "ldpc stream shorter than payload");
    decoded_bits.resize(info_len);
  } else {
    decoded_bits = Qam64::demodulate(equalized, mod.pad_bits);
  }

  // Source decoding; a corrupt prefix yields a best-effort prefix plus the
  // truncation marker rather than an abort.
  if (config.source_code == SourceCodeKind::huffman) {
    const auto res = config.huffman->decode(decoded_bits, /*lenient=*/true);
    out.decoded_text = res.text;
    out.source_decode_truncated = res.truncated;
  } else {
    out.decoded_text = fixed6_decode(decoded_bits);
  }
  return out;
}

}  // namespace semcomm::classical
