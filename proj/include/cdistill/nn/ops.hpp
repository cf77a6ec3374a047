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

#include <cstddef>
#include <span>
#include <vector>

#include "cdistill/nn/graph.hpp"

// Differentiable primitives. Shape errors throw NumericError.
namespace cdistill::nn::ops {

Var matmul(Graph& g, Var a, Var b);     // a * b
Var matmul_tn(Graph& g, Var a, Var b);  // a^T * b
Var matmul_nt(Graph& g, Var a, Var b);  // a * b^T

Var add(Graph& g, Var a, Var b);
Var sub(Graph& g, Var a, Var b);
Var mul(Graph& g, Var a, Var b);        // elementwise
Var add_bias(Graph& g, Var x, Var bias);  // x (r x c) + bias (r x 1) broadcast over columns
Var scale(Graph& g, Var x, Var s);      // s (1 x 1) * x
Var scale(Graph& g, Var x, double s);

Var tanh(Graph& g, Var x);
Var sigmoid(Graph& g, Var x);

// Softmax over the entries of a 1 x L row restricted to mask-true
// positions; masked-out entries are exactly 0.
Var masked_softmax(Graph& g, Var scores, const std::vector<bool>& mask);
// Softmax over the entries of a column vector.
Var softmax(Graph& g, Var x);

Var element(Graph& g, Var x, std::size_t index);  // 1 x 1
Var sum(Graph& g, std::span<const Var> scalars);  // sum of 1 x 1 nodes

// (1/n) sum (a - b)^2 over all n entries.
Var mse(Graph& g, Var a, Var b);
// (1/|mask|) sum over mask-true i of (a_i - b_i)^2.
Var masked_mse(Graph& g, Var a, Var b, const std::vector<bool>& mask);

inline constexpr double kProbClamp = 1e-7;
// -y log p - (1-y) log(1-p), with p clamped to [1e-7, 1 - 1e-7].
Var binary_cross_entropy(Graph& g, Var prob, double label);

// Columns j of the result are rows ids[j] of `table` (V x d -> d x n).
Var gather_rows_as_columns(Graph& g, Var table, std::span<const std::size_t> ids);

// Plain-double evaluation of masked softmax; used outside of graphs.
std::vector<double> masked_softmax_values(std::span<const double> scores, const std::vector<bool>& mask);

}  // namespace cdistill::nn::ops
