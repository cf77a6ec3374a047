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

#include "cdistill/nn/graph.hpp"

#include <cmath>

#include "cdistill/error.hpp"

namespace cdistill::nn {

Var Graph::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, nullptr, false});
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::parameter(ParamTensor& p) {
  if (const auto it = bound_.find(&p); it != bound_.end()) return Var{it->second};
  const bool rg = grad_enabled() && p.trainable;
  nodes_.push_back(Node{p.value, {}, {}, &p, rg});
  const auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
  bound_.emplace(&p, id);
  return Var{id};
}

Var Graph::record(Matrix value, bool requires_grad, BackwardFn backward) {
  const bool rg = grad_enabled() && requires_grad;
  nodes_.push_back(Node{std::move(value), {}, rg ? std::move(backward) : BackwardFn{}, nullptr, rg});
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Matrix& Graph::grad_of(Var v) {
  Node& n = nodes_[v.id];
  if (n.grad.empty() && !n.value.empty()) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

void Graph::backward(Var loss) {
  Node& root = nodes_.at(loss.id);
  if (root.value.rows() != 1 || root.value.cols() != 1) {
    throw NumericError("backward expects a 1x1 loss, got " + shape_string(root.value));
  }
  if (!std::isfinite(root.value[0])) throw NumericError("backward called on a non-finite loss");

  for (auto& n : nodes_) n.grad = Matrix();
  if (!root.requires_grad) return;
  grad_of(loss)[0] = 1.0;

  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.param != nullptr) {
      n.param->grad += n.grad;
    } else if (n.backward) {
      n.backward(*this, n.grad);
    }
  }
}

}  // namespace cdistill::nn
