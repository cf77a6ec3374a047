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
#include <string>

#include "cdistill/corpus.hpp"
#include "cdistill/model.hpp"
#include "cdistill/student.hpp"

namespace cdistill {

struct TrainOptions {
  double lr = 1e-3;
  std::size_t batch_size = 16;
  int max_epochs = 50;
  int patience = 5;

  bool operator==(const TrainOptions&) const = default;
};

struct StudentOptions {
  TrainOptions train;
  double alpha = 0.4;
  student::StudentConfig model;

  bool operator==(const StudentOptions&) const = default;
};

// Every setting of a training run. Serialized as a JSON object; missing
// keys keep their defaults and unknown keys are rejected.
struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::string split_dir;          // directory with train/val/test.jsonl
  bool keep_empty_comments = false;
  std::string emotion_resources;  // empty: built-in lexicon
  int vocab_min_count = 1;
  ModelDims model;
  TrainOptions teacher;
  double train_comment_proportion = 1.0;
  StudentOptions student;

  bool operator==(const ExperimentConfig&) const = default;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  std::uint64_t hash() const;
  void validate() const;
  corpus::CorpusConfig corpus_config() const { return {keep_empty_comments}; }
};

std::string dims_to_json(const ModelDims& dims);
ModelDims dims_from_json(const std::string& text);

corpus::SyntheticSpec synthetic_spec_from_json(const std::string& text);
std::string synthetic_spec_to_json(const corpus::SyntheticSpec& spec);

}  // namespace cdistill
