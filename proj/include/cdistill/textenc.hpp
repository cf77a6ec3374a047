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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdistill/corpus.hpp"
#include "cdistill/nn/graph.hpp"
#include "cdistill/nn/layers.hpp"

namespace cdistill::textenc {

using TokenId = std::size_t;

inline constexpr TokenId kPad = 0;
inline constexpr TokenId kUnk = 1;
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

// Lowercased pieces of `text`: runs of word characters and runs of
// punctuation, split on whitespace. Used both for vocabulary building
// and for encoding.
std::vector<std::string> split_tokens(std::string_view text);

class Vocabulary {
 public:
  Vocabulary();

  // Counts tokens of content and comments of `train`. Tokens seen fewer
  // than `min_count` times map to UNK; the rest are indexed by count
  // (descending), ties broken lexicographically.
  static Vocabulary build(std::span<const corpus::NewsRecord> train, int min_count);

  std::size_t size() const noexcept { return tokens_.size(); }
  int min_count() const noexcept { return min_count_; }
  TokenId index_of(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  // Header "# V=<size> min_count=<n>", then "token<TAB>index" per line.
  std::string serialize() const;
  static Vocabulary parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);
  std::uint64_t hash() const;

  bool operator==(const Vocabulary& o) const { return tokens_ == o.tokens_ && min_count_ == o.min_count_; }

 private:
  void add(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  int min_count_ = 1;
};

// Token ids of `text`, truncated to `max_len`. Empty text yields [UNK].
std::vector<TokenId> tokenize(std::string_view text, const Vocabulary& vocab, std::size_t max_len);

// Comments in time order joined by a space. Zero comments yield [UNK].
std::vector<TokenId> tokenize_comments(const corpus::NewsRecord& record, const Vocabulary& vocab,
                                       std::size_t max_len);

// d x L token features; masked-out columns are zero. At least one
// column is real.
struct TokenMatrix {
  nn::Matrix values;
  std::vector<bool> mask;

  std::size_t length() const noexcept { return mask.size(); }
  std::size_t real_count() const;
  // Matrix of the mask-true columns in order.
  nn::Matrix real_columns() const;
};

// Embedding table followed by tanh(W e + b); the trainable stand-in for
// a pretrained encoder.
class EncoderParams {
 public:
  EncoderParams() = default;
  EncoderParams(std::size_t vocab_size, std::size_t dim);

  nn::ParamTensor embedding;   // V x d
  nn::Dense projection;        // d -> d

  std::size_t dim() const { return embedding.value.cols(); }
  std::size_t vocab_size() const { return embedding.value.rows(); }
  nn::ParamList params();

  // d x ids.size() features of real tokens.
  nn::Var encode(nn::Graph& g, std::span<const TokenId> ids);
};

// Pads `ids` to `length` columns.
TokenMatrix encode_ids(std::span<const TokenId> ids, EncoderParams& params, std::size_t length);

TokenMatrix encode_content(const corpus::NewsRecord& record, const Vocabulary& vocab, EncoderParams& params,
                           std::size_t max_len);
TokenMatrix encode_comments(const corpus::NewsRecord& record, const Vocabulary& vocab, EncoderParams& params,
                            std::size_t max_len);

}  // namespace cdistill::textenc
