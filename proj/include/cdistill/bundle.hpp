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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdistill/emolex.hpp"
#include "cdistill/model.hpp"
#include "cdistill/nn/checkpoint.hpp"
#include "cdistill/student.hpp"
#include "cdistill/teacher.hpp"
#include "cdistill/textenc.hpp"

namespace cdistill {

inline constexpr const char* kKindTeacher = "teacher";
inline constexpr const char* kKindStudent = "student";

// A trained teacher with everything needed to run it on raw records.
struct TeacherBundle {
  ModelDims dims;
  textenc::Vocabulary vocab;
  textenc::EncoderParams encoder;
  teacher::TeacherModel model;
  std::string resources_path;  // empty: built-in lexicon
  emolex::EmotionResources resources;
  std::uint64_t config_hash = 0;
  std::map<std::string, std::string> extra_meta;

  TeacherBundle() = default;
  TeacherBundle(const ModelDims& dims, textenc::Vocabulary vocab, std::string resources_path);

  nn::ParamList params();
  nn::Checkpoint to_checkpoint();
  static TeacherBundle from_checkpoint(const nn::Checkpoint& ckpt);
  void save(const std::filesystem::path& path);
  static TeacherBundle load(const std::filesystem::path& path);

  std::vector<double> predict(const std::vector<corpus::NewsRecord>& records);
  std::vector<teacher::TeacherTrace> traces(const std::vector<corpus::NewsRecord>& records);
};

// A trained student. The encoder is a frozen copy of the teacher's.
struct StudentBundle {
  ModelDims dims;
  textenc::Vocabulary vocab;
  textenc::EncoderParams encoder;
  student::StudentModel model;
  double alpha = 0.4;
  std::uint64_t teacher_hash = 0;
  std::uint64_t config_hash = 0;
  std::map<std::string, std::string> extra_meta;

  StudentBundle() = default;
  StudentBundle(const TeacherBundle& teacher, const student::StudentConfig& config, double alpha);

  nn::ParamList params();
  nn::Checkpoint to_checkpoint();
  static StudentBundle from_checkpoint(const nn::Checkpoint& ckpt);
  void save(const std::filesystem::path& path);
  // With `teacher_path`, the recorded teacher hash must match that file.
  static StudentBundle load(const std::filesystem::path& path,
                            const std::optional<std::filesystem::path>& teacher_path = std::nullopt);

  // Encoded real content tokens (d x M_real).
  nn::Matrix encode_content(const corpus::NewsRecord& record);
  std::vector<double> predict(const std::vector<corpus::NewsRecord>& records);
  std::vector<student::StudentTrace> traces(const std::vector<corpus::NewsRecord>& records);
};

// "teacher" or "student"; throws DataError for anything else.
std::string checkpoint_kind(const nn::Checkpoint& ckpt);

emolex::EmotionResources resolve_resources(const std::string& path);

std::vector<int> labels_of(const std::vector<corpus::NewsRecord>& records);

}  // namespace cdistill
