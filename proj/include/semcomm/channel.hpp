// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "semcomm/rng.hpp"

namespace semcomm {

using ComplexSymbolBlock = std::vector<std::complex<double>>;

enum class ChannelKind { awgn, rayleigh, rician };

struct ChannelConfig {
  ChannelKind kind = ChannelKind::awgn;
  double snr_db = 10.0;
  double rician_k_db = 10.0;  // only used for the Rician kind
  bool noiseless = false;     // disables the noise draw entirely
  bool per_symbol_fading = false;  // default is one gain per block
};

struct ChannelRealization {
  std::complex<double> gain{1.0, 0.0};
  std::vector<std::complex<double>> per_symbol_gains;  // only with per_symbol_fading
  std::vector<std::complex<double>> noise;
  // Set when the transmitted block's mean symbol power strayed from 1; the
  // transmit contract expects power-normalized input.
  bool input_power_warning = false;
};

// Scales the block so the mean squared symbol magnitude is exactly 1.
ComplexSymbolBlock power_normalize(const ComplexSymbolBlock& block);

double mean_symbol_power(const ComplexSymbolBlock& block);

// One draw of the channel attenuation h: AWGN -> 1, Rayleigh -> CN(0,1),
// Rician -> CN(sqrt(K/(K+1)), 1/(K+1)) with K linear.
std::complex<double> sample_gain(const ChannelConfig& config, Rng& rng);

// y = h*x + n; one gain per block (slow fading), i.i.d. complex Gaussian
// noise with total variance 10^(-snr_db/10) per symbol.
std::pair<ComplexSymbolBlock, ChannelRealization> transmit(const ComplexSymbolBlock& block,
                                                           const ChannelConfig& config,
                                                           Rng& rng);

// Perfect-CSI zero forcing: y / h per symbol.
ComplexSymbolBlock equalize(const ComplexSymbolBlock& received,
                            const ChannelRealization& realization);

double noise_variance_for_snr_db(double snr_db);

// Interleaved (re, im) reals <-> complex symbols; the neural channel
// encoder emits 2M reals per word which stand for M complex symbols.
ComplexSymbolBlock reals_to_symbols(const std::vector<double>& reals);
std::vector<double> symbols_to_reals(const ComplexSymbolBlock& symbols);

}  // namespace semcomm
