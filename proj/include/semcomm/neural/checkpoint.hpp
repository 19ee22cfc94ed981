// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "semcomm/neural/transceiver.hpp"

namespace semcomm::neural {

// Checkpoint layout: a textual header (format tag, dtype, model config,
// one "param <name> <rows> <cols>" line per tensor in canonical order, then
// "payload <bytes>"), the raw little-endian IEEE-754 values in header
// order, and a trailing 64-bit FNV-1a checksum of the payload bytes.
template <typename T>
void save_checkpoint(const TransceiverParams<T>& params, const std::string& path);

template <typename T>
TransceiverParams<T> load_checkpoint(const std::string& path);

// Peeks the dtype field ("f32" or "f64") without loading the payload.
std::string checkpoint_dtype(const std::string& path);

extern template void save_checkpoint(const TransceiverParams<float>&, const std::string&);
extern template void save_checkpoint(const TransceiverParams<double>&, const std::string&);
extern template TransceiverParams<float> load_checkpoint<float>(const std::string&);
extern template TransceiverParams<double> load_checkpoint<double>(const std::string&);

}  // namespace semcomm::neural
