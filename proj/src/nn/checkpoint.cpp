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

#include "cdistill/nn/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cdistill/error.hpp"
#include "cdistill/rng.hpp"

namespace cdistill::nn {
namespace {

constexpr std::string_view kMagic = "CDKDCKPT";

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : in_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view raw(std::size_t n) {
    need(n);
    const auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw DataError("checkpoint is truncated");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

void Checkpoint::add_params(const ParamList& params) {
  for (const auto* p : params) {
    tensors.push_back(TensorRecord{p->name, p->value.rows(), p->value.cols(), p->trainable, p->value.to_vector()});
  }
}

void Checkpoint::restore(const ParamList& params) const {
  std::map<std::string_view, const TensorRecord*> by_name;
  for (const auto& t : tensors) by_name.emplace(t.name, &t);
  for (auto* p : params) {
    const auto it = by_name.find(p->name);
    if (it == by_name.end()) throw DataError("checkpoint has no tensor named " + p->name);
    const TensorRecord& t = *it->second;
    if (t.rows != p->value.rows() || t.cols != p->value.cols()) {
      throw DataError("checkpoint tensor " + p->name + " has shape (" + std::to_string(t.rows) + "x" +
                      std::to_string(t.cols) + "), expected " + shape_string(p->value));
    }
    std::copy(t.values.begin(), t.values.end(), p->value.data().begin());
    p->grad = Matrix(t.rows, t.cols);
  }
}

const std::string& Checkpoint::meta(const std::string& key) const {
  const auto it = metadata.find(key);
  if (it == metadata.end()) throw DataError("checkpoint metadata is missing '" + key + "'");
  return it->second;
}

std::string encode_checkpoint(const Checkpoint& c) {
  Writer w;
  w.raw(kMagic);
  w.u32(kCheckpointVersion);
  w.u64(c.vocab_hash);
  w.u64(c.config_hash);
  w.u64(c.parent_hash);
  w.u32(static_cast<std::uint32_t>(c.metadata.size()));
  for (const auto& [k, v] : c.metadata) {
    w.str(k);
    w.str(v);
  }
  w.u32(static_cast<std::uint32_t>(c.tensors.size()));
  for (const auto& t : c.tensors) {
    w.str(t.name);
    w.u32(2);
    w.u64(t.rows);
    w.u64(t.cols);
    w.u8(t.trainable ? 1 : 0);
    for (double v : t.values) w.f64(v);
  }
  w.u64(fnv1a64(w.bytes()));
  return std::move(w.bytes());
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.raw(kMagic.size()) != kMagic) throw DataError("not a checkpoint file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  if (bytes.size() < kMagic.size() + 8) throw DataError("checkpoint is truncated");
  const std::size_t body = bytes.size() - 8;
  std::uint64_t stored = 0;
  for (std::size_t i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[body + i])) << (8 * i);
  if (stored != fnv1a64(bytes.substr(0, body))) throw DataError("checkpoint checksum mismatch");
  Checkpoint c;
  c.vocab_hash = r.u64();
  c.config_hash = r.u64();
  c.parent_hash = r.u64();
  const std::uint32_t n_meta = r.u32();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string k = r.str();
    c.metadata[k] = r.str();
  }
  const std::uint32_t n_tensors = r.u32();
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    TensorRecord t;
    t.name = r.str();
    if (r.u32() != 2) throw DataError("checkpoint tensor " + t.name + " has unsupported rank");
    t.rows = r.u64();
    t.cols = r.u64();
    t.trainable = r.u8() != 0;
    if (t.rows != 0 && t.cols > r.remaining() / 8 / t.rows) throw DataError("checkpoint is truncated");
    t.values.resize(t.rows * t.cols);
    for (double& v : t.values) v = r.f64();
    c.tensors.push_back(std::move(t));
  }
  if (r.pos() != body) throw DataError("trailing bytes after checkpoint");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  const std::string bytes = encode_checkpoint(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file_bytes(path)); }

std::uint64_t file_hash(const std::filesystem::path& path) { return fnv1a64(read_file_bytes(path)); }

}  // namespace cdistill::nn
