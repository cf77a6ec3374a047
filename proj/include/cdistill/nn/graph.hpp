/*
 * Copyright 2026 The cdistill Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "cdistill/nn/tensor.hpp"

namespace cdistill::nn {

// Handle to a node recorded on a Graph.
struct Var {
  std::uint32_t id = 0;
};

class Graph;

// Receives the upstream gradient of the node's output and accumulates
// into its inputs through Graph::grad_of.
using BackwardFn = std::function<void(Graph&, const Matrix& upstream)>;

enum class GradMode { kEnabled, kDisabled };

// Operation tape for reverse-mode differentiation. Nodes are appended in
// evaluation order, so reverse insertion order is a valid topological
// order and backward visits each node exactly once.
class Graph {
 public:
  explicit Graph(GradMode mode = GradMode::kEnabled) : mode_(mode) {}

  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Matrix value);
  // Binds a parameter. Binding the same tensor twice returns the same node.
  Var parameter(ParamTensor& p);

  Var record(Matrix value, bool requires_grad, BackwardFn backward);

  const Matrix& value(Var v) const { return nodes_[v.id].value; }
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  bool grad_enabled() const noexcept { return mode_ == GradMode::kEnabled; }
  std::size_t size() const noexcept { return nodes_.size(); }

  // Gradient buffer of `v`, allocated (zeroed) on first use.
  Matrix& grad_of(Var v);

  // Backpropagates from a 1x1 loss. Parameter gradients are added to
  // ParamTensor::grad, so repeated calls accumulate.
  void backward(Var loss);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    BackwardFn backward;
    ParamTensor* param = nullptr;
    bool requires_grad = false;
  };

  GradMode mode_;
  std::vector<Node> nodes_;
  std::unordered_map<const ParamTensor*, std::uint32_t> bound_;
};

}  // namespace cdistill::nn
