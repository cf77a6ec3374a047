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

#include "cdistill/model.hpp"

namespace cdistill {

Example prepare_example(const corpus::NewsRecord& record, const textenc::Vocabulary& vocab,
                        const emolex::EmotionResources& resources, const ModelDims& dims) {
  Example ex;
  ex.content_ids = textenc::tokenize(record.content, vocab, dims.max_content_len);
  ex.comment_ids = textenc::tokenize_comments(record, vocab, dims.max_comment_len);
  std::vector<std::string> texts;
  texts.reserve(record.comments.size());
  for (const auto& c : record.comments) texts.push_back(c.text);
  ex.emotion = nn::Matrix::column(emolex::extract_emotion(texts, resources).values);
  ex.label = record.label;
  return ex;
}

std::vector<Example> prepare_examples(const std::vector<corpus::NewsRecord>& records,
                                      const textenc::Vocabulary& vocab, const emolex::EmotionResources& resources,
                                      const ModelDims& dims) {
  std::vector<Example> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(prepare_example(r, vocab, resources, dims));
  return out;
}

std::vector<double> pad_to(std::span<const double> real, std::size_t length) {
  std::vector<double> out(length, 0.0);
  std::copy(real.begin(), real.begin() + static_cast<std::ptrdiff_t>(std::min(real.size(), length)), out.begin());
  return out;
}

}  // namespace cdistill
