// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "semcomm/neural/tensor.hpp"

namespace semcomm::neural {

namespace detail {

// C (+)= A[m x k] * B[k x n]
template <typename T>
void gemm_nn(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const T av = a[i * k + p];
      if (av == T(0)) continue;
      const T* brow = b + p * n;
      T* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
}

// C (+)= A[m x k] * B[n x k]^T
template <typename T>
void gemm_nt(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      T acc = T(0);
      const T* arow = a + i * k;
      const T* brow = b + j * k;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      c[i * n + j] += acc;
    }
}

// C (+)= A[m x k]^T * B[m x n]
template <typename T>
void gemm_tn(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* arow = a + i * k;
    const T* brow = b + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const T av = arow[p];
      if (av == T(0)) continue;
      T* crow = c + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

template <typename T>
std::shared_ptr<typename Tensor<T>::Node> make_node(std::size_t rows, std::size_t cols,
                                                    std::vector<T> value,
                                                    std::vector<Tensor<T>> parents) {
  auto n = std::make_shared<typename Tensor<T>::Node>();
  n->rows = rows;
  n->cols = cols;
  n->value = std::move(value);
  for (auto& p : parents) {
    n->requires_grad = n->requires_grad || p.requires_grad();
    n->parents.push_back(p.node());
  }
  if (n->requires_grad) n->grad.assign(n->value.size(), T(0));
  return n;
}

}  // namespace detail

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(Errc::invalid_argument, "add: shape mismatch");
  std::vector<T> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] + b.values()[i];
  auto n = detail::make_node(a.rows(), a.cols(), std::move(v), {a, b});
  auto* pa = n->parents[0].get();
  auto* pb = n->parents[1].get();
  n->backprop = [pa, pb](typename Tensor<T>::Node& self) {
    if (pa->requires_grad)
      for (std::size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
    if (pb->requires_grad)
      for (std::size_t i = 0; i < self.grad.size(); ++i) pb->grad[i] += self.grad[i];
  };
  return Tensor<T>(std::move(n));
}

// x[m x f] + v[1 x f] broadcast over rows.
template <typename T>
Tensor<T> add_rowvec(const Tensor<T>& x, const Tensor<T>& v) {
  if (v.rows() != 1 || v.cols() != x.cols())
    throw Error(Errc::invalid_argument, "add_rowvec: shape mismatch");
  std::vector<T> out(x.size());
  const std::size_t f = x.cols();
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < f; ++j) out[i * f + j] = x.values()[i * f + j] + v.values()[j];
  auto n = detail::make_node(x.rows(), x.cols(), std::move(out), {x, v});
  auto* px = n->parents[0].get();
  auto* pv = n->parents[1].get();
  n->backprop = [px, pv, f](typename Tensor<T>::Node& self) {
    if (px->requires_grad)
      for (std::size_t i = 0; i < self.grad.size(); ++i) px->grad[i] += self.grad[i];
    if (pv->requires_grad)
      for (std::size_t i = 0; i < self.rows; ++i)
        for (std::size_t j = 0; j < f; ++j) pv->grad[j] += self.grad[i * f + j];
  };
  return Tensor<T>(std::move(n));
}

template <typename T>
Tensor<T> scale(const Tensor<T>& x, T c) {
  std::vector<T> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.values()[i] * c;
  auto n = detail::make_node(x.rows(), x.cols(), std::move(v), {x});
  auto* px = n->parents[0].get();
  n->backprop = [px, c](typename Tensor<T>::Node& self) {
    if (px->requires_grad)
      for (std::size_t i = 0; i < self.grad.size(); ++i) px->grad[i] += self.grad[i] * c;
  };
  return Tensor<T>(std::move(n));
}

// y = x + constant (no gradient into the constant).
template <typename T>
Tensor<T> add_constant(const Tensor<T>& x, const std::vector<T>& c) {
  if (c.size() != x.size()) throw Error(Errc::invalid_argument, "add_constant: size mismatch");
  std::vector<T> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.values()[i] + c[i];
  auto n = detail::make_node(x.rows(), x.cols(), std::move(v), {x});
  auto* px = n->parents[0].get();
  n->backprop = [px](typename Tensor<T>::Node& self) {
    if (px->requires_grad)
      for (std::size_t i = 0; i < self.grad.size(); ++i) px->grad[i] += self.grad[i];
  };
  return Tensor<T>(std::move(n));
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.cols() != b.rows()) throw Error(Errc::invalid_argument, "matmul: shape mismatch");
  const std::size_t m = a.rows(), k = a.cols(), nn = b.cols();
  std::vector<T> v(m * nn, T(0));
  detail::gemm_nn(a.values().data(), b.values().data(), v.data(), m, k, nn);
  auto n = detail::make_node(m, nn, std::move(v), {a, b});
  auto* pa = n->parents[0].get();
  auto* pb = n->parents[1].get();
  n->backprop = [pa, pb, m, k, nn](typename Tensor<T>::Node& self) {
    if (pa->requires_grad)
      detail::gemm_nt(self.grad.data(), pb->value.data(), pa->grad.data(), m, nn, k);
    if (pb->requires_grad)
      detail::gemm_tn(pa->value.data(), self.grad.data(), pb->grad.data(), m, k, nn);
  };
  return Tensor<T>(std::move(n));
}

// a[m x k] * b[n x k]^T, as used for attention scores.
template <typename T>
Tensor<T> matmul_nt(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.cols() != b.cols()) throw Error(Errc::invalid_argument, "matmul_nt: shape mismatch");
  const std::size_t m = a.rows(), k = a.cols(), nn = b.rows();
  std::vector<T> v(m * nn, T(0));
  detail::gemm_nt(a.values().data(), b.values().data(), v.data(), m, k, nn);
  auto n = detail::make_node(m, nn, std::move(v), {a, b});
  auto* pa = n->parents[0].get();
  auto* pb = n->parents[1].get();
  n->backprop = [pa, pb, m, k, nn](typename Tensor<T>::Node& self) {
    if (pa->requires_grad)
      detail::gemm_nn(self.grad.data(), pb->value.data(), pa->grad.data(), m, nn, k);
    if (pb->requires_grad)
      detail::gemm_tn(self.grad.data(), pa->value.data(), pb->grad.data(), m, nn, k);
  };
  return Tensor<T>(std::move(n));
}

// Row-wise softmax. key_keep, when given, marks which columns participate;
// masked columns get exactly zero weight.
template <typename T>
Tensor<T> softmax_rows(const Tensor<T>& x, const std::vector<std::uint8_t>* key_keep = nullptr) {
  const std::size_t m = x.rows(), f = x.cols();
  if (key_keep) {
    if (key_keep->size() != f)
      throw Error(Errc::invalid_argument, "softmax mask length mismatch");
    bool any = false;
    for (auto k : *key_keep) any = any || k;
    if (!any) throw Error(Errc::invalid_argument, "softmax: all key positions masked");
  }
  std::vector<T> v(x.size());
  for (std::size_t i = 0; i < m; ++i) {
    const T* row = x.values().data() + i * f;
    T mx = -std::numeric_limits<T>::infinity();
    for (std::size_t j = 0; j < f; ++j)
      if (!key_keep || (*key_keep)[j])
        mx = std::max(mx, row[j]);
    T sum = T(0);
    for (std::size_t j = 0; j < f; ++j) {
      T e = T(0);
      if (!key_keep || (*key_keep)[j]) e = std::exp(row[j] - mx);
      v[i * f + j] = e;
      sum += e;
    }
    for (std::size_t j = 0; j < f; ++j) v[i * f + j] /= sum;
  }
  auto n = detail::make_node(m, f, std::move(v), {x});
  auto* px = n->parents[0].get();
  n->backprop = [px, m, f](typename Tensor<T>::Node& self) {
    if (!px->requires_grad) return;
    for (std::size_t i = 0; i < m; ++i) {
      const T* y = self.value.data() + i * f;
      const T* dy = self.grad.data() + i * f;
      T dot = T(0);
      for (std::size_t j = 0; j < f; ++j) dot += dy[j] * y[j];
      T* dx = px->grad.data() + i * f;
      for (std::size_t j = 0; j < f; ++j) dx[j] += y[j] * (dy[j] - dot);
    }
  };
  return Tensor<T>(std::move(n));
}

// Per-row normalization to zero mean / unit variance (population), then
// gain and bias. gain/bias are 1 x f.
template <typename T>
Tensor<T> layer_norm_rows(const Tensor<T>& x, const Tensor<T>& gain, const Tensor<T>& bias,
                          T eps = T(1e-6)) {
  const std::size_t m = x.rows(), f = x.cols();
  if (gain.rows() != 1 || gain.cols() != f || bias.rows() != 1 || bias.cols() != f)
    throw Error(Errc::invalid_argument, "layer_norm: gain/bias shape mismatch");
  std::vector<T> v(x.size());
  auto xhat = std::make_shared<std::vector<T>>(x.size());
  auto inv_std = std::make_shared<std::vector<T>>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const T* row = x.values().data() + i * f;
    T mean = T(0);
    for (std::size_t j = 0; j < f; ++j) mean += row[j];
    mean /= static_cast<T>(f);
    T var = T(0);
    for (std::size_t j = 0; j < f; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= static_cast<T>(f);
    const T is = T(1) / std::sqrt(var + eps);
    (*inv_std)[i] = is;
    for (std::size_t j = 0; j < f; ++j) {
      const T xh = (row[j] - mean) * is;
      (*xhat)[i * f + j] = xh;
      v[i * f + j] = xh * gain.values()[j] + bias.values()[j];
    }
  }
  auto n = detail::make_node(m, f, std::move(v), {x, gain, bias});
  auto* px = n->parents[0].get();
  auto* pg = n->parents[1].get();
  auto* pb = n->parents[2].get();
  n->backprop = [px, pg, pb, xhat, inv_std, m, f](typename Tensor<T>::Node& self) {
    for (std::size_t i = 0; i < m; ++i) {
      const T* dy = self.grad.data() + i * f;
      const T* xh = xhat->data() + i * f;
      if (pg->requires_grad)
        for (std::size_t j = 0; j < f; ++j) pg->grad[j] += dy[j] * xh[j];
      if (pb->requires_grad)
        for (std::size_t j = 0; j < f; ++j) pb->grad[j] += dy[j];
      if (px->requires_grad) {
        T sum_dxhat = T(0), sum_dxhat_xhat = T(0);
        for (std::size_t j = 0; j < f; ++j) {
          const T dxh = dy[j] * pg->value[j];
          sum_dxhat += dxh;
          sum_dxhat_xhat += dxh * xh[j];
        }
        const T is = (*inv_std)[i];
        T* dx = px->grad.data() + i * f;
        for (std::size_t j = 0; j < f; ++j) {
          const T dxh = dy[j] * pg->value[j];
          dx[j] += is * (dxh - (sum_dxhat + xh[j] * sum_dxhat_xhat) / static_cast<T>(f));
        }
      }
    }
  };
  return Tensor<T>(std::move(n));
}

// Exact (erf-based) GELU.
template <typename T>
Tensor<T> gelu(const Tensor<T>& x) {
  std::vector<T> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const T z = x.values()[i];
    v[i] = T(0.5) * z * (T(1) + std::erf(z / std::sqrt(T(2))));
  }
  auto n = detail::make_node(x.rows(), x.cols(), std::move(v), {x});
  auto* px = n->parents[0].get();
  n->backprop = [px](typename Tensor<T>::Node& self) {
    if (!px->requires_grad) return;
    const T inv_sqrt2 = T(1) / std::sqrt(T(2));
    const T inv_sqrt2pi = T(0.3989422804014326779399460599344);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const T z = px->value[i];
      const T cdf = T(0.5) * (T(1) + std::erf(z * inv_sqrt2));
      const T pdf = inv_sqrt2pi * std::exp(T(-0.5) * z * z);
      px->grad[i] += self.grad[i] * (cdf + z * pdf);
    }
  };
  return Tensor<T>(std::move(n));
}

// Gather rows of an embedding table by token id.
template <typename T>
Tensor<T> embedding_rows(const Tensor<T>& table, const std::vector<std::int32_t>& ids) {
  const std::size_t e = table.cols();
  for (auto id : ids)
    if (id < 0 || static_cast<std::size_t>(id) >= table.rows())
      throw Error(Errc::invalid_argument, "token id out of range");
  std::vector<T> v(ids.size() * e);
  for (std::size_t i = 0; i < ids.size(); ++i)
    std::copy_n(table.values().data() + static_cast<std::size_t>(ids[i]) * e, e,
                v.data() + i * e);
  auto n = detail::make_node(ids.size(), e, std::move(v), {table});
  auto* pt = n->parents[0].get();
  auto ids_copy = ids;
  n->backprop = [pt, ids_copy, e](typename Tensor<T>::Node& self) {
    if (!pt->requires_grad) return;
    for (std::size_t i = 0; i < ids_copy.size(); ++i) {
      T* dst = pt->grad.data() + static_cast<std::size_t>(ids_copy[i]) * e;
      const T* src = self.grad.data() + i * e;
      for (std::size_t j = 0; j < e; ++j) dst[j] += src[j];
    }
  };
  return Tensor<T>(std::move(n));
}

template <typename T>
Tensor<T> slice_rows(const Tensor<T>& x, std::size_t start, std::size_t count) {
  if (start + count > x.rows()) throw Error(Errc::invalid_argument, "slice_rows out of range");
  const std::size_t f = x.cols();
  std::vector<T> v(count * f);
  std::copy_n(x.values().data() + start * f, count * f, v.data());
  auto n = detail::make_node(count, f, std::move(v), {x});
  auto* px = n->parents[0].get();
  n->backprop = [px, start, f](typename Tensor<T>::Node& self) {
    if (!px->requires_grad) return;
    for (std::size_t i = 0; i < self.grad.size(); ++i)
      px->grad[start * f + i] += self.grad[i];
  };
  return Tensor<T>(std::move(n));
}

template <typename T>
Tensor<T> concat_cols(const std::vector<Tensor<T>>& parts) {
  if (parts.empty()) throw Error(Errc::invalid_argument, "concat_cols: no inputs");
  const std::size_t m = parts[0].rows();
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.rows() != m) throw Error(Errc::invalid_argument, "concat_cols: row mismatch");
    total += p.cols();
  }
  std::vector<T> v(m * total);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < m; ++i)
      std::copy_n(p.values().data() + i * p.cols(), p.cols(), v.data() + i * total + off);
    off += p.cols();
  }
  auto n = detail::make_node(m, total, std::move(v), parts);
  std::vector<std::size_t> widths;
  for (const auto& p : parts) widths.push_back(p.cols());
  n->backprop = [widths, m, total](typename Tensor<T>::Node& self) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      auto* p = self.parents[k].get();
      if (p->requires_grad) {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < widths[k]; ++j)
            p->grad[i * widths[k] + j] += self.grad[i * total + off + j];
      }
      off += widths[k];
    }
  };
  return Tensor<T>(std::move(n));
}

// Scales the whole block so the mean squared magnitude over (re, im) pairs
// is 1: with n reals there are n/2 complex symbols.
template <typename T>
Tensor<T> power_normalize(const Tensor<T>& x) {
  const std::size_t n_reals = x.size();
  if (n_reals == 0 || n_reals % 2 != 0)
    throw Error(Errc::invalid_argument, "power_normalize needs an even element count");
  const T mc = static_cast<T>(n_reals / 2);
  T power = T(0);
  for (T v : x.values()) power += v * v;
  power /= mc;
  if (!(power > T(0))) throw Error(Errc::numeric, "zero-power block");
  const T inv = T(1) / std::sqrt(power);
  std::vector<T> v(n_reals);
  for (std::size_t i = 0; i < n_reals; ++i) v[i] = x.values()[i] * inv;
  auto n = detail::make_node(x.rows(), x.cols(), std::move(v), {x});
  auto* px = n->parents[0].get();
  n->backprop = [px, inv, mc](typename Tensor<T>::Node& self) {
    if (!px->requires_grad) return;
    T gdotx = T(0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) gdotx += self.grad[i] * px->value[i];
    const T inv3_over_mc = inv * inv * inv / mc;
    for (std::size_t i = 0; i < self.grad.size(); ++i)
      px->grad[i] += self.grad[i] * inv - px->value[i] * gdotx * inv3_over_mc;
  };
  return Tensor<T>(std::move(n));
}

// Mean over active positions of -ln p(target); probabilities below 1e-12
// are clamped before the log.
template <typename T>
Tensor<T> cross_entropy_mean(const Tensor<T>& probs, const std::vector<std::int32_t>& targets,
                             const std::vector<std::uint8_t>* active = nullptr) {
  const std::size_t m = probs.rows(), vsz = probs.cols();
  if (targets.size() != m)
    throw Error(Errc::invalid_argument, "cross_entropy: target count mismatch");
  if (active && active->size() != m)
    throw Error(Errc::invalid_argument, "cross_entropy: mask length mismatch");
  const T clamp = T(1e-12);
  std::size_t count = 0;
  T loss = T(0);
  for (std::size_t i = 0; i < m; ++i) {
    if (active && !(*active)[i]) continue;
    const auto t = targets[i];
    if (t < 0 || static_cast<std::size_t>(t) >= vsz)
      throw Error(Errc::invalid_argument, "cross_entropy: target id out of range");
    loss -= std::log(std::max(probs.values()[i * vsz + static_cast<std::size_t>(t)], clamp));
    ++count;
  }
  if (count == 0) throw Error(Errc::invalid_argument, "cross_entropy: no active positions");
  loss /= static_cast<T>(count);
  auto n = detail::make_node(std::size_t{1}, std::size_t{1}, std::vector<T>{loss}, {probs});
  auto* pp = n->parents[0].get();
  auto targets_copy = targets;
  auto mask_copy = active ? std::make_shared<std::vector<std::uint8_t>>(*active)
                          : std::shared_ptr<std::vector<std::uint8_t>>();
  n->backprop = [pp, targets_copy, mask_copy, vsz, count, clamp](typename Tensor<T>::Node& self) {
    if (!pp->requires_grad) return;
    const T g = self.grad[0] / static_cast<T>(count);
    for (std::size_t i = 0; i < targets_copy.size(); ++i) {
      if (mask_copy && !(*mask_copy)[i]) continue;
      const std::size_t idx = i * vsz + static_cast<std::size_t>(targets_copy[i]);
      pp->grad[idx] -= g / std::max(pp->value[idx], clamp);
    }
  };
  return Tensor<T>(std::move(n));
}

// Fixed-weight scalar reduction; handy for finite-difference checks.
template <typename T>
Tensor<T> weighted_sum(const Tensor<T>& x, const std::vector<T>& w) {
  if (w.size() != x.size()) throw Error(Errc::invalid_argument, "weighted_sum: size mismatch");
  T s = T(0);
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x.values()[i];
  auto n = detail::make_node(std::size_t{1}, std::size_t{1}, std::vector<T>{s}, {x});
  auto* px = n->parents[0].get();
  auto w_copy = w;
  n->backprop = [px, w_copy](typename Tensor<T>::Node& self) {
    if (!px->requires_grad) return;
    for (std::size_t i = 0; i < w_copy.size(); ++i) px->grad[i] += self.grad[0] * w_copy[i];
  };
  return Tensor<T>(std::move(n));
}

}  // namespace semcomm::neural
