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

#include "cdistill/nn/tensor.hpp"

#include <cmath>

#include "cdistill/error.hpp"
#include "cdistill/rng.hpp"

namespace cdistill::nn {

bool Matrix::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (!same_shape(o)) {
    throw NumericError("shape mismatch in +=: " + shape_string(*this) + " vs " + shape_string(o));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

std::string shape_string(const Matrix& m) {
  return "(" + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")";
}

void zero_grads(const ParamList& params) {
  for (auto* p : params) p->zero_grad();
}

void set_trainable(const ParamList& params, bool trainable) {
  for (auto* p : params) p->trainable = trainable;
}

void init_xavier(ParamTensor& p, std::uint64_t seed) {
  Rng rng(derive_seed(seed, p.name));
  const double fan = static_cast<double>(p.value.rows() + p.value.cols());
  const double a = std::sqrt(6.0 / fan);
  for (double& v : p.value.data()) v = rng.uniform(-a, a);
  p.grad = Matrix(p.value.rows(), p.value.cols());
}

}  // namespace cdistill::nn
