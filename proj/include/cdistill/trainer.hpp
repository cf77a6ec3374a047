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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdistill/bundle.hpp"
#include "cdistill/config.hpp"
#include "cdistill/corpus.hpp"

namespace cdistill::trainer {

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_macro_f1 = 0.0;
  double val_acc = 0.0;
  std::optional<double> val_auc;
  double val_loss = 0.0;  // mean BCE, breaks macro F1 ties
};

struct History {
  std::vector<EpochStats> epochs;
  std::vector<double> step_losses;  // mean batch loss of every optimizer step
  int best_epoch = 0;
  double best_val_macro_f1 = -1.0;

  // Header "epoch,train_loss,val_macF1,val_acc,val_auc".
  std::string to_csv() const;
  void save(const std::filesystem::path& path) const;
};

using EpochCallback = std::function<void(const EpochStats&)>;

struct TeacherRun {
  TeacherBundle bundle;
  History history;
};

struct StudentRun {
  StudentBundle bundle;
  History history;
};

// Builds the vocabulary from the training records, then fits the
// encoder and teacher with Adam, early stopping on validation macro F1.
// The best validation epoch is returned.
TeacherRun train_teacher(const corpus::CorpusSplit& split, const ExperimentConfig& config,
                         const EpochCallback& on_epoch = {});

// Fits a student under a frozen teacher. `teacher_hash` is recorded as the
// student's parent hash.
StudentRun train_student(const corpus::CorpusSplit& split, TeacherBundle& teacher, std::uint64_t teacher_hash,
                         const ExperimentConfig& config, const EpochCallback& on_epoch = {});

// Loads and verifies the teacher checkpoint first.
StudentRun train_student(const corpus::CorpusSplit& split, const std::filesystem::path& teacher_checkpoint,
                         const ExperimentConfig& config, const EpochCallback& on_epoch = {});

// Hash of the checkpoint bytes `bundle` would be saved as.
std::uint64_t checkpoint_hash(TeacherBundle& bundle);

struct BudgetRun {
  double proportion = 1.0;
  TeacherRun teacher;
  StudentRun student;
};

// Keeps the earliest ceil(p * |C|) comments of every training record
// before teacher training; validation and test records are untouched.
BudgetRun train_with_comment_budget(const corpus::CorpusSplit& split, double proportion,
                                    const ExperimentConfig& config);

}  // namespace cdistill::trainer
