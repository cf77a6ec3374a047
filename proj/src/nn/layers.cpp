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

#include "cdistill/nn/layers.hpp"

#include "cdistill/error.hpp"

namespace cdistill::nn {

Dense::Dense(const std::string& name, std::size_t in, std::size_t out)
    : weight(name + ".weight", out, in), bias(name + ".bias", out, 1) {}

Var Dense::forward(Graph& g, Var x) {
  if (g.value(x).rows() != in_dim()) {
    throw NumericError(weight.name + ": expected input with " + std::to_string(in_dim()) + " rows, got " +
                       shape_string(g.value(x)));
  }
  return ops::add_bias(g, ops::matmul(g, g.parameter(weight), x), g.parameter(bias));
}

void Dense::collect(ParamList& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

Mlp::Mlp(const std::string& name, const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) throw NumericError(name + ": an MLP needs at least input and output sizes");
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    layers_.emplace_back(name + "." + std::to_string(i), dims[i], dims[i + 1]);
  }
}

Var Mlp::forward(Graph& g, Var x) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    x = layers_[i].forward(g, x);
    if (i + 1 < layers_.size()) x = ops::tanh(g, x);
  }
  return x;
}

void Mlp::collect(ParamList& out) {
  for (auto& l : layers_) l.collect(out);
}

MaskAttentionLayer::MaskAttentionLayer(const std::string& name, std::size_t d, std::size_t k)
    : scorer_(name + ".scorer", {d, k, 1}) {}

MaskAttentionLayer::Output MaskAttentionLayer::forward(Graph& g, Var tokens, const std::vector<bool>& mask) {
  const Var scores = scorer_.forward(g, tokens);  // 1 x L
  const Var weights = ops::masked_softmax(g, scores, mask);
  const Var feature = ops::matmul_nt(g, tokens, weights);  // d x 1
  return {feature, weights};
}

void MaskAttentionLayer::collect(ParamList& out) { scorer_.collect(out); }

void init_params(const ParamList& params, std::uint64_t seed) {
  for (auto* p : params) {
    if (p->name.ends_with(".bias")) {
      p->value.fill(0.0);
      p->grad = Matrix(p->value.rows(), p->value.cols());
    } else {
      init_xavier(*p, seed);
    }
  }
}

}  // namespace cdistill::nn
