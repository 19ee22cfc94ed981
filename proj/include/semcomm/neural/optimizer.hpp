// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "semcomm/neural/tensor.hpp"

namespace semcomm::neural {

// Adadelta with the conventional learning-rate factor on the update.
template <typename T>
class Adadelta {
 public:
  Adadelta(std::vector<Tensor<T>*> params, double learning_rate, double rho = 0.95,
           double epsilon = 1e-6)
      : params_(std::move(params)), lr_(learning_rate), rho_(rho), eps_(epsilon) {
    for (auto* p : params_) {
      acc_grad_.emplace_back(p->size(), T(0));
      acc_update_.emplace_back(p->size(), T(0));
    }
  }

  void zero_grad() {
    for (auto* p : params_) p->zero_grad();
  }

  // One update from the accumulated gradients; lr_scale multiplies the base
  // learning rate (the annealing schedule feeds it).
  void step(double lr_scale = 1.0) {
    const T lr = static_cast<T>(lr_ * lr_scale);
    const T rho = static_cast<T>(rho_);
    const T eps = static_cast<T>(eps_);
    for (std::size_t k = 0; k < params_.size(); ++k) {
      auto& value = params_[k]->mutable_values();
      const auto& grad = params_[k]->grad();
      auto& eg = acc_grad_[k];
      auto& ex = acc_update_[k];
      for (std::size_t i = 0; i < value.size(); ++i) {
        const T g = grad[i];
        eg[i] = rho * eg[i] + (T(1) - rho) * g * g;
        const T dx = std::sqrt((ex[i] + eps) / (eg[i] + eps)) * g;
        ex[i] = rho * ex[i] + (T(1) - rho) * dx * dx;
        value[i] -= lr * dx;
      }
    }
  }

 private:
  std::vector<Tensor<T>*> params_;
  double lr_, rho_, eps_;
  std::vector<std::vector<T>> acc_grad_;
  std::vector<std::vector<T>> acc_update_;
};

// Cosine annealing from lr0 down to floor_fraction * lr0 over total steps.
inline double cosine_annealed_scale(std::size_t step, std::size_t total_steps,
                                    double floor_fraction = 1e-4) {
  if (total_steps <= 1) return 1.0;
  const double t = static_cast<double>(step) / static_cast<double>(total_steps - 1);
  const double cosine = 0.5 * (1.0 + std::cos(3.14159265358979323846 * t));
  return floor_fraction + (1.0 - floor_fraction) * cosine;
}

}  // namespace semcomm::neural
