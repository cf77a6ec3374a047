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

#include "cdistill/textenc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "cdistill/error.hpp"
#include "cdistill/nn/checkpoint.hpp"
#include "cdistill/rng.hpp"

namespace cdistill::textenc {
namespace {

enum class CharClass { kSpace, kPunct, kWord };

CharClass classify(unsigned char c) {
  if (std::isspace(c)) return CharClass::kSpace;
  if (c < 0x80 && std::ispunct(c)) return CharClass::kPunct;
  return CharClass::kWord;
}

}  // namespace

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const CharClass cls = classify(static_cast<unsigned char>(text[i]));
    if (cls == CharClass::kSpace) {
      ++i;
      continue;
    }
    std::string tok;
    while (i < text.size() && classify(static_cast<unsigned char>(text[i])) == cls) {
      tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
      ++i;
    }
    out.push_back(std::move(tok));
  }
  return out;
}

Vocabulary::Vocabulary() {
  add(std::string(kPadToken));
  add(std::string(kUnkToken));
}

void Vocabulary::add(std::string token) {
  const TokenId id = tokens_.size();
  if (!index_.emplace(token, id).second) throw DataError("duplicate vocabulary token '" + token + "'");
  tokens_.push_back(std::move(token));
}

Vocabulary Vocabulary::build(std::span<const corpus::NewsRecord> train, int min_count) {
  if (train.empty()) throw DataError("cannot build a vocabulary from an empty training set");
  std::map<std::string, std::size_t> counts;
  const auto count_text = [&](std::string_view text) {
    for (auto& t : split_tokens(text)) ++counts[std::move(t)];
  };
  for (const auto& r : train) {
    count_text(r.content);
    for (const auto& c : r.comments) count_text(c.text);
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : counts) {
    if (static_cast<int>(n) >= min_count && tok != kPadToken && tok != kUnkToken) kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary v;
  v.min_count_ = min_count;
  for (auto& [tok, n] : kept) v.add(std::move(tok));
  return v;
}

TokenId Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

std::string Vocabulary::serialize() const {
  std::ostringstream os;
  os << "# V=" << tokens_.size() << " min_count=" << min_count_ << '\n';
  for (std::size_t i = 0; i < tokens_.size(); ++i) os << tokens_[i] << '\t' << i << '\n';
  return os.str();
}

Vocabulary Vocabulary::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("# V=")) throw DataError("vocabulary: missing header line");
  std::size_t declared = 0;
  int min_count = 1;
  if (std::sscanf(line.c_str(), "# V=%zu min_count=%d", &declared, &min_count) != 2) {
    throw DataError("vocabulary: malformed header '" + line + "'");
  }
  Vocabulary v;
  v.tokens_.clear();
  v.index_.clear();
  v.min_count_ = min_count;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw DataError("vocabulary line " + std::to_string(n) + ": expected token<TAB>index");
    const std::size_t idx = std::stoul(line.substr(tab + 1));
    if (idx != v.tokens_.size()) throw DataError("vocabulary line " + std::to_string(n) + ": indices must be dense");
    v.add(line.substr(0, tab));
  }
  if (v.tokens_.size() != declared) throw DataError("vocabulary: header declares a different size");
  if (v.tokens_.size() < 2 || v.tokens_[kPad] != kPadToken || v.tokens_[kUnk] != kUnkToken) {
    throw DataError("vocabulary: PAD and UNK must occupy indices 0 and 1");
  }
  return v;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write vocabulary " + path.string());
  out << serialize();
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) { return parse(nn::read_file_bytes(path)); }

std::uint64_t Vocabulary::hash() const { return fnv1a64(serialize()); }

std::vector<TokenId> tokenize(std::string_view text, const Vocabulary& vocab, std::size_t max_len) {
  if (max_len == 0) throw UsageError("tokenize: max_len must be at least 1");
  std::vector<TokenId> ids;
  for (const auto& t : split_tokens(text)) {
    if (ids.size() == max_len) break;
    ids.push_back(vocab.index_of(t));
  }
  if (ids.empty()) ids.push_back(kUnk);
  return ids;
}

std::vector<TokenId> tokenize_comments(const corpus::NewsRecord& record, const Vocabulary& vocab,
                                       std::size_t max_len) {
  std::vector<const corpus::Comment*> ordered;
  for (const auto& c : record.comments) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return a->time < b->time; });
  std::string joined;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i) joined.push_back(' ');
    joined += ordered[i]->text;
  }
  return tokenize(joined, vocab, max_len);
}

std::size_t TokenMatrix::real_count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)); }

nn::Matrix TokenMatrix::real_columns() const {
  nn::Matrix out(values.rows(), real_count());
  std::size_t j = 0;
  for (std::size_t c = 0; c < mask.size(); ++c) {
    if (!mask[c]) continue;
    for (std::size_t r = 0; r < values.rows(); ++r) out(r, j) = values(r, c);
    ++j;
  }
  return out;
}

EncoderParams::EncoderParams(std::size_t vocab_size, std::size_t dim)
    : embedding("encoder.embedding", vocab_size, dim), projection("encoder.projection", dim, dim) {}

nn::ParamList EncoderParams::params() {
  nn::ParamList out{&embedding};
  projection.collect(out);
  return out;
}

nn::Var EncoderParams::encode(nn::Graph& g, std::span<const TokenId> ids) {
  const nn::Var e = nn::ops::gather_rows_as_columns(g, g.parameter(embedding), ids);
  return nn::ops::tanh(g, projection.forward(g, e));
}

TokenMatrix encode_ids(std::span<const TokenId> ids, EncoderParams& params, std::size_t length) {
  if (ids.empty() || ids.size() > length) throw NumericError("encode: token count must be in [1, length]");
  nn::Graph g(nn::GradMode::kDisabled);
  const nn::Matrix& real = g.value(params.encode(g, ids));
  TokenMatrix tm{nn::Matrix(params.dim(), length), std::vector<bool>(length, false)};
  for (std::size_t j = 0; j < ids.size(); ++j) {
    tm.mask[j] = true;
    for (std::size_t r = 0; r < real.rows(); ++r) tm.values(r, j) = real(r, j);
  }
  return tm;
}

TokenMatrix encode_content(const corpus::NewsRecord& record, const Vocabulary& vocab, EncoderParams& params,
                           std::size_t max_len) {
  return encode_ids(tokenize(record.content, vocab, max_len), params, max_len);
}

TokenMatrix encode_comments(const corpus::NewsRecord& record, const Vocabulary& vocab, EncoderParams& params,
                            std::size_t max_len) {
  return encode_ids(tokenize_comments(record, vocab, max_len), params, max_len);
}

}  // namespace cdistill::textenc
