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
#include <string>
#include <vector>

#include "cdistill/nn/graph.hpp"

namespace cdistill::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::int64_t step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
};

// One Adam update over the current ParamTensor::grad values. Frozen
// parameters are skipped. Throws NumericError on a non-finite gradient
// before touching any parameter.
void adam_step(const ParamList& params, const AdamConfig& config, AdamState& state);

class Adam {
 public:
  Adam(ParamList params, AdamConfig config) : params_(std::move(params)), config_(config) {}

  void step() { adam_step(params_, config_, state_); }
  void zero_grad() { zero_grads(params_); }
  const AdamState& state() const { return state_; }
  AdamConfig& config() { return config_; }

 private:
  ParamList params_;
  AdamConfig config_;
  AdamState state_;
};

struct GradCheckEntry {
  std::string name;
  std::size_t count = 0;
  bool trainable = true;
  double max_rel_error = 0.0;
  double max_abs_grad = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double tolerance = 0.0;
  bool passed = false;

  double max_rel_error() const;
  std::string to_string() const;
};

// Builds the scalar loss on a fresh graph each call.
using LossBuilder = std::function<Var(Graph&)>;

// Compares backprop gradients with central differences of step `h`.
// The relative error of one coordinate is |a - n| / max(|a|, |n|, 1e-6);
// the floor keeps exact zeros from dividing by zero. Frozen tensors are
// reported with their analytic gradient, skipped by the numeric probe,
// and fail the check if that gradient is nonzero.
GradCheckReport grad_check(const LossBuilder& build_loss, const ParamList& params, double h = 1e-5,
                           double tol = 1e-4);

}  // namespace cdistill::nn
