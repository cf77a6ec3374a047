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
#include <optional>
#include <string>
#include <vector>

#include "cdistill/bundle.hpp"
#include "cdistill/config.hpp"
#include "cdistill/metrics.hpp"
#include "cdistill/student.hpp"

namespace cdistill::evalkit {

// Rows of string cells under named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::string to_text() const;  // aligned columns
  std::string to_json() const;  // array of objects
};

metrics::EvalReport evaluate(TeacherBundle& teacher, const std::vector<corpus::NewsRecord>& records,
                             double threshold = 0.5);
metrics::EvalReport evaluate(StudentBundle& student, const std::vector<corpus::NewsRecord>& records,
                             double threshold = 0.5);

inline const std::vector<double> kDefaultProportions{0.0, 0.25, 0.5, 0.75, 1.0};
inline const std::vector<double> kAlphaGrid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
inline const std::vector<double> kLearningRateGrid{3e-5, 5e-5, 7e-5, 1e-4, 2e-4, 5e-4, 9e-4, 1e-3};

struct ProportionCell {
  std::string model;  // "student" or "teacher"
  double proportion = 0.0;
  metrics::EvalReport report;
};

struct ProportionSweep {
  std::vector<double> proportions;
  std::vector<ProportionCell> cells;

  std::optional<metrics::EvalReport> find(const std::string& model, double proportion) const;
  // One row per model, one macro F1 column per proportion; empty cells
  // where a model is not evaluated.
  Table matrix() const;
  // One row per evaluated cell with every metric.
  Table long_form() const;
};

// The teacher is evaluated at every nonzero proportion with test comments
// subsampled; the student (if given) only at 0.
ProportionSweep comment_proportion_sweep(TeacherBundle& teacher, StudentBundle* student,
                                         const std::vector<corpus::NewsRecord>& test,
                                         const std::vector<double>& proportions = kDefaultProportions);

struct VariantResult {
  student::Ablation kind = student::Ablation::kNone;
  std::vector<std::uint64_t> seeds;
  std::vector<metrics::EvalReport> reports;  // one per seed
  double mean_macro_f1() const;
};

struct AblationSweep {
  std::vector<VariantResult> variants;  // full student first
  Table table() const;
};

// For every seed: one teacher, then the full student and the three
// ablations trained with that seed, all evaluated on the test split.
AblationSweep ablation_sweep(const corpus::CorpusSplit& split, const ExperimentConfig& config,
                             const std::vector<std::uint64_t>& seeds);

struct GridPoint {
  double value = 0.0;
  std::optional<metrics::EvalReport> teacher;
  metrics::EvalReport student;
};

struct GridSweep {
  std::string parameter;
  std::vector<GridPoint> points;
  Table table() const;
};

// One teacher; one student per alpha.
GridSweep alpha_sweep(const corpus::CorpusSplit& split, const ExperimentConfig& config,
                      const std::vector<double>& alphas = kAlphaGrid);

// Teacher and student both trained at each learning rate.
GridSweep lr_sweep(const corpus::CorpusSplit& split, const ExperimentConfig& config,
                   const std::vector<double>& rates = kLearningRateGrid);

std::string format_number(double v);

}  // namespace cdistill::evalkit
