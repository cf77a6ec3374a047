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
#include <string>
#include <string_view>
#include <vector>

#include "cdistill/nn/tensor.hpp"

namespace cdistill::nn {

// Binary, little-endian. Layout (see docs/checkpoint_format.md):
//   "CDKDCKPT" | u32 version | u64 vocab_hash | u64 config_hash | u64 parent_hash
//   u32 n_meta  { str key, str value }*
//   u32 n_tensor { str name, u32 rank=2, u64 rows, u64 cols, u8 trainable, f64 values[rows*cols] }*
//   u64 fnv1a64 of every preceding byte
// where str = u32 byte length followed by the bytes.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TensorRecord {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool trainable = true;
  std::vector<double> values;

  bool operator==(const TensorRecord&) const = default;
};

struct Checkpoint {
  std::uint64_t vocab_hash = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t parent_hash = 0;
  std::map<std::string, std::string> metadata;
  std::vector<TensorRecord> tensors;

  bool operator==(const Checkpoint&) const = default;

  void add_params(const ParamList& params);
  // Copies values into `params` by name; every parameter must be present
  // with a matching shape.
  void restore(const ParamList& params) const;
  const std::string& meta(const std::string& key) const;
};

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string read_file_bytes(const std::filesystem::path& path);
// FNV-1a of the file's bytes.
std::uint64_t file_hash(const std::filesystem::path& path);

}  // namespace cdistill::nn
