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
#include <string>
#include <vector>

#include "cdistill/nn/graph.hpp"
#include "cdistill/nn/ops.hpp"

namespace cdistill::nn {

// out = W x + b, applied column-wise when x has several columns.
struct Dense {
  Dense() = default;
  Dense(const std::string& name, std::size_t in, std::size_t out);

  ParamTensor weight;  // out x in
  ParamTensor bias;    // out x 1

  std::size_t in_dim() const { return weight.value.cols(); }
  std::size_t out_dim() const { return weight.value.rows(); }
  Var forward(Graph& g, Var x);
  void collect(ParamList& out);
};

// Affine layers with tanh between them; the last layer is linear.
class Mlp {
 public:
  Mlp() = default;
  // dims = {in, hidden..., out}
  Mlp(const std::string& name, const std::vector<std::size_t>& dims);

  Var forward(Graph& g, Var x);
  std::size_t in_dim() const { return layers_.front().in_dim(); }
  std::size_t out_dim() const { return layers_.back().out_dim(); }
  std::vector<Dense>& layers() { return layers_; }
  const std::vector<Dense>& layers() const { return layers_; }
  void collect(ParamList& out);

 private:
  std::vector<Dense> layers_;
};

// Scores every token column with a d -> k -> 1 MLP, normalizes the
// scores with a masked softmax and pools the columns with those weights.
class MaskAttentionLayer {
 public:
  struct Output {
    Var feature;  // d x 1
    Var weights;  // 1 x L
  };

  MaskAttentionLayer() = default;
  MaskAttentionLayer(const std::string& name, std::size_t d, std::size_t k);

  Output forward(Graph& g, Var tokens, const std::vector<bool>& mask);
  Mlp& scorer() { return scorer_; }
  void collect(ParamList& out);

 private:
  Mlp scorer_;
};

// All parameters of `params` initialized from `seed` (per-tensor stream).
void init_params(const ParamList& params, std::uint64_t seed);

}  // namespace cdistill::nn
