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
#include <vector>

#include "cdistill/corpus.hpp"
#include "cdistill/emolex.hpp"
#include "cdistill/nn/tensor.hpp"
#include "cdistill/textenc.hpp"

namespace cdistill {

struct ModelDims {
  std::size_t d = 32;                   // token feature size
  std::size_t k = 16;                   // co-attention and scorer hidden size
  std::size_t max_content_len = 64;     // M
  std::size_t max_comment_len = 128;    // N
  std::size_t classifier_hidden = 16;

  bool operator==(const ModelDims&) const = default;
};

// Everything the models read from one record, computed once per run.
struct Example {
  std::vector<textenc::TokenId> content_ids;
  std::vector<textenc::TokenId> comment_ids;
  nn::Matrix emotion;  // kEmotionDim x 1, extracted from comments only
  int label = 0;
};

Example prepare_example(const corpus::NewsRecord& record, const textenc::Vocabulary& vocab,
                        const emolex::EmotionResources& resources, const ModelDims& dims);
std::vector<Example> prepare_examples(const std::vector<corpus::NewsRecord>& records,
                                      const textenc::Vocabulary& vocab, const emolex::EmotionResources& resources,
                                      const ModelDims& dims);

// Scatters values of the first real.size() positions into a padded vector.
std::vector<double> pad_to(std::span<const double> real, std::size_t length);

}  // namespace cdistill
