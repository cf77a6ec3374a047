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
#include <vector>

#include "cdistill/corpus.hpp"
#include "cdistill/model.hpp"
#include "cdistill/nn/optim.hpp"
#include "cdistill/student.hpp"

namespace cdistill::diagnostics {

struct GradCheckOptions {
  ModelDims dims{8, 4, 16, 32, 4};
  std::size_t batch = 4;
  double alpha = 0.4;
  std::uint64_t seed = 7;
  double h = 1e-5;
  double tolerance = 1e-4;
  student::StudentConfig student;
};

struct GradCheckSuite {
  nn::GradCheckReport teacher;
  nn::GradCheckReport student;
  bool passed() const { return teacher.passed && student.passed; }
};

// Finite-difference check of the mean teacher loss and the mean student
// total loss over the first `batch` records. The student check probes
// student parameters only; the frozen teacher and encoder are reported
// with their analytic gradients, which must be zero.
GradCheckSuite run_grad_checks(const std::vector<corpus::NewsRecord>& records, const GradCheckOptions& options);

}  // namespace cdistill::diagnostics
