// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>

#include "semcomm/channel.hpp"
#include "semcomm/classical/huffman.hpp"
#include "semcomm/classical/ldpc.hpp"

namespace semcomm::classical {

enum class SourceCodeKind { huffman, fixed6 };
enum class ChannelCodeKind { rs, ldpc, none };

struct PipelineConfig {
  SourceCodeKind source_code = SourceCodeKind::huffman;
  ChannelCodeKind channel_code = ChannelCodeKind::rs;
  ChannelConfig channel;
  const HuffmanCode* huffman = nullptr;  // required for the huffman source code
  const LdpcCode* ldpc = nullptr;        // required for the ldpc channel code
  std::size_t ldpc_max_iterations = 25;
};

struct PipelineResult {
  std::string decoded_text;
  std::size_t complex_symbols = 0;  // payload QAM symbols sent
  bool source_decode_truncated = false;
  std::size_t rs_blocks_failed = 0;
  std::size_t rs_symbols_corrected = 0;
  std::size_t ldpc_blocks_unconverged = 0;
};

// text -> source bits -> channel-coded bits -> 64-QAM -> channel ->
// equalize -> demodulate (or LLRs) -> channel decode -> source decode.
// One channel gain per sentence; symbol count is ceil(coded_bits / 6).
PipelineResult classical_pipeline(const std::string& text, const PipelineConfig& config,
                                  Rng& rng);

const char* to_string(SourceCodeKind kind);
const char* to_string(ChannelCodeKind kind);

}  // namespace semcomm::classical
