// SPDX-License-Identifier: Apache-2.0
#include "semcomm/channel.hpp"

#include <cmath>

#include "semcomm/error.hpp"

namespace semcomm {

namespace {
constexpr double kDeepFadeFloor = 1e-12;
constexpr double kPowerWarnTol = 0.2;
}  // namespace

double mean_symbol_power(const ComplexSymbolBlock& block) {
  if (block.empty()) throw Error(Errc::empty_input, "empty symbol block");
  double sum = 0.0;
  for (const auto& s : block) sum += std::norm(s);
  return sum / static_cast<double>(block.size());
}

ComplexSymbolBlock power_normalize(const ComplexSymbolBlock& block) {
  const double p = mean_symbol_power(block);
  if (p <= 0.0) throw Error(Errc::numeric, "zero-power block");
  const double scale = 1.0 / std::sqrt(p);
  ComplexSymbolBlock out(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) out[i] = block[i] * scale;
  return out;
}

std::complex<double> sample_gain(const ChannelConfig& config, Rng& rng) {
  switch (config.kind) {
    case ChannelKind::awgn:
      return {1.0, 0.0};
    case ChannelKind::rayleigh: {
      const double s = std::sqrt(0.5);
      return {s * rng.gaussian(), s * rng.gaussian()};
    }
    case ChannelKind::rician: {
      const double k = std::pow(10.0, config.rician_k_db / 10.0);
      const double mean = std::sqrt(k / (k + 1.0));
      const double s = std::sqrt(0.5 / (k + 1.0));
      return {mean + s * rng.gaussian(), s * rng.gaussian()};
    }
  }
  throw Error(Errc::invalid_argument, "unknown channel kind");
}

double noise_variance_for_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

std::pair<ComplexSymbolBlock, ChannelRealization> transmit(const ComplexSymbolBlock& block,
                                                           const ChannelConfig& config,
                                                           Rng& rng) {
  if (block.empty()) throw Error(Errc::empty_input, "empty symbol block");
  ChannelRealization real;
  real.input_power_warning = std::abs(mean_symbol_power(block) - 1.0) > kPowerWarnTol;
  real.noise.resize(block.size());
  ComplexSymbolBlock received(block.size());

  const double sigma2 = config.noiseless ? 0.0 : noise_variance_for_snr_db(config.snr_db);
  const double noise_scale = std::sqrt(sigma2 / 2.0);

  if (config.per_symbol_fading) {
    real.per_symbol_gains.resize(block.size());
    for (std::size_t i = 0; i < block.size(); ++i)
      real.per_symbol_gains[i] = sample_gain(config, rng);
    real.gain = real.per_symbol_gains.empty() ? std::complex<double>{1.0, 0.0}
                                              : real.per_symbol_gains[0];
  } else {
    real.gain = sample_gain(config, rng);
  }
  for (std::size_t i = 0; i < block.size(); ++i) {
    std::complex<double> n{0.0, 0.0};
    if (!config.noiseless) n = {noise_scale * rng.gaussian(), noise_scale * rng.gaussian()};
    real.noise[i] = n;
    const std::complex<double> h =
        config.per_symbol_fading ? real.per_symbol_gains[i] : real.gain;
    received[i] = h * block[i] + n;
  }
  return {std::move(received), std::move(real)};
}

ComplexSymbolBlock equalize(const ComplexSymbolBlock& received,
                            const ChannelRealization& realization) {
  ComplexSymbolBlock out(received.size());
  if (!realization.per_symbol_gains.empty()) {
    if (realization.per_symbol_gains.size() != received.size())
      throw Error(Errc::invalid_argument, "gain count mismatch");
    for (std::size_t i = 0; i < received.size(); ++i) {
      if (std::abs(realization.per_symbol_gains[i]) < kDeepFadeFloor)
        throw Error(Errc::numeric, "channel in deep fade");
      out[i] = received[i] / realization.per_symbol_gains[i];
    }
    return out;
  }
  if (std::abs(realization.gain) < kDeepFadeFloor)
    throw Error(Errc::numeric, "channel in deep fade");
  for (std::size_t i = 0; i < received.size(); ++i) out[i] = received[i] / realization.gain;
  return out;
}

ComplexSymbolBlock reals_to_symbols(const std::vector<double>& reals) {
  if (reals.size() % 2 != 0)
    throw Error(Errc::invalid_argument, "real count must be even to form complex symbols");
  ComplexSymbolBlock out(reals.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {reals[2 * i], reals[2 * i + 1]};
  return out;
}

std::vector<double> symbols_to_reals(const ComplexSymbolBlock& symbols) {
  std::vector<double> out(symbols.size() * 2);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out[2 * i] = symbols[i].real();
    out[2 * i + 1] = symbols[i].imag();
  }
  return out;
}

}  // namespace semcomm
