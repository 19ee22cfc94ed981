// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "semcomm/error.hpp"

namespace semcomm::neural {

// Dense 2-D tensor participating in reverse-mode differentiation. Tensors
// are value-semantic handles onto graph nodes; the graph is built eagerly
// by the ops in ops.hpp and freed when the handles go out of scope.
// Parameters are long-lived leaf tensors whose gradients accumulate across
// backward() calls until zero_grad().
template <typename T>
class Tensor {
 public:
  struct Node {
    std::size_t rows = 0, cols = 0;
    std::vector<T> value;
    std::vector<T> grad;  // sized only when requires_grad
    bool requires_grad = false;
    std::string name;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backprop;
  };

  Tensor() = default;

  static Tensor zeros(std::size_t rows, std::size_t cols, bool requires_grad = false) {
    return from_values(rows, cols, std::vector<T>(rows * cols, T(0)), requires_grad);
  }

  static Tensor from_values(std::size_t rows, std::size_t cols, std::vector<T> v,
                            bool requires_grad = false) {
    if (v.size() != rows * cols)
      throw Error(Errc::invalid_argument, "tensor value count does not match shape");
    auto n = std::make_shared<Node>();
    n->rows = rows;
    n->cols = cols;
    n->value = std::move(v);
    n->requires_grad = requires_grad;
    if (requires_grad) n->grad.assign(rows * cols, T(0));
    return Tensor(std::move(n));
  }

  bool defined() const { return node_ != nullptr; }
  std::size_t rows() const { return node_->rows; }
  std::size_t cols() const { return node_->cols; }
  std::size_t size() const { return node_->value.size(); }

  const std::vector<T>& values() const { return node_->value; }
  std::vector<T>& mutable_values() { return node_->value; }
  const std::vector<T>& grad() const { return node_->grad; }
  std::vector<T>& mutable_grad() { return node_->grad; }
  bool requires_grad() const { return node_->requires_grad; }

  const std::string& name() const { return node_->name; }
  void set_name(std::string name) { node_->name = std::move(name); }

  T item() const {
    if (size() != 1) throw Error(Errc::invalid_argument, "item() needs a scalar tensor");
    return node_->value[0];
  }

  void zero_grad() {
    if (node_->requires_grad) node_->grad.assign(node_->value.size(), T(0));
  }

  // Reverse-mode sweep from a scalar root; gradients accumulate (+=) into
  // every reachable requires_grad node.
  void backward() {
    if (size() != 1) throw Error(Errc::invalid_argument, "backward() needs a scalar root");
    std::vector<Node*> order;
    std::unordered_set<Node*> seen;
    std::vector<std::pair<Node*, std::size_t>> stack{{node_.get(), 0}};
    seen.insert(node_.get());
    while (!stack.empty()) {
      auto& [n, i] = stack.back();
      if (i < n->parents.size()) {
        Node* p = n->parents[i++].get();
        if (seen.insert(p).second) stack.push_back({p, 0});
      } else {
        order.push_back(n);
        stack.pop_back();
      }
    }
    node_->grad.assign(1, T(1));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Node* n = *it;
      if (n->backprop && n->requires_grad) n->backprop(*n);
    }
  }

  std::shared_ptr<Node> node() const { return node_; }
  explicit Tensor(std::shared_ptr<Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<Node> node_;
};

}  // namespace semcomm::neural
