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
#include <optional>
#include <span>
#include <string>

namespace cdistill::metrics {

// Fake (label 1) is the positive class.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t n() const noexcept { return tp + fp + fn + tn; }
  bool operator==(const Confusion&) const = default;
};

Confusion confusion(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);

// 2 tp / (2 tp + fp + fn); 0 when the class is neither present nor predicted.
double f1_fake(const Confusion& c);
double f1_real(const Confusion& c);
double accuracy(const Confusion& c);

// Mann-Whitney statistic with ties counted as one half. Empty when only
// one class is present.
std::optional<double> auc(std::span<const double> scores, std::span<const int> labels);

// Area under the empirical ROC restricted to FPR <= fpr_max, rescaled to
// 0.5 * (1 + (pAUC - f^2/2) / (f - f^2/2)). Tied scores form a single
// diagonal ROC segment.
std::optional<double> spauc(std::span<const double> scores, std::span<const int> labels, double fpr_max = 0.1);

struct EvalReport {
  double macro_f1 = 0.0;
  double acc = 0.0;
  double f1_real = 0.0;
  double f1_fake = 0.0;
  std::optional<double> auc;
  std::optional<double> spauc;
  Confusion counts;
  std::size_t n = 0;

  std::string to_json() const;
};

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);

}  // namespace cdistill::metrics
