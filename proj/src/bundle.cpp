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

#include "cdistill/bundle.hpp"

#include <cstdio>

#include "cdistill/config.hpp"
#include "cdistill/error.hpp"

namespace cdistill {

namespace {

void check_vocab(const nn::Checkpoint& ckpt, const textenc::Vocabulary& vocab) {
  if (vocab.hash() != ckpt.vocab_hash) {
    throw DataError("checkpoint vocabulary hash mismatch: header " + std::to_string(ckpt.vocab_hash) +
                    ", embedded vocabulary " + std::to_string(vocab.hash()));
  }
}

std::map<std::string, std::string> extras(const nn::Checkpoint& ckpt, std::initializer_list<const char*> known) {
  auto out = ckpt.metadata;
  for (const char* k : known) out.erase(k);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

emolex::EmotionResources resolve_resources(const std::string& path) {
  return path.empty() ? emolex::builtin_resources() : emolex::load_resources(path);
}

std::vector<int> labels_of(const std::vector<corpus::NewsRecord>& records) {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.label);
  return out;
}

std::string checkpoint_kind(const nn::Checkpoint& ckpt) {
  const std::string& kind = ckpt.meta("kind");
  if (kind != kKindTeacher && kind != kKindStudent) throw DataError("unknown checkpoint kind '" + kind + "'");
  return kind;
}

TeacherBundle::TeacherBundle(const ModelDims& d, textenc::Vocabulary v, std::string rp)
    : dims(d),
      vocab(std::move(v)),
      encoder(vocab.size(), d.d),
      model(d),
      resources_path(std::move(rp)),
      resources(resolve_resources(resources_path)) {}

nn::ParamList TeacherBundle::params() {
  nn::ParamList out = encoder.params();
  for (auto* p : model.params()) out.push_back(p);
  return out;
}

nn::Checkpoint TeacherBundle::to_checkpoint() {
  nn::Checkpoint c;
  c.vocab_hash = vocab.hash();
  c.config_hash = config_hash;
  c.metadata = extra_meta;
  c.metadata["kind"] = kKindTeacher;
  c.metadata["dims"] = dims_to_json(dims);
  c.metadata["vocab"] = vocab.serialize();
  c.metadata["emotion_resources"] = resources_path;
  c.add_params(params());
  return c;
}

TeacherBundle TeacherBundle::from_checkpoint(const nn::Checkpoint& ckpt) {
  if (checkpoint_kind(ckpt) != kKindTeacher) throw DataError("expected a teacher checkpoint, got a student");
  TeacherBundle b(dims_from_json(ckpt.meta("dims")), textenc::Vocabulary::parse(ckpt.meta("vocab")),
                  ckpt.meta("emotion_resources"));
  check_vocab(ckpt, b.vocab);
  b.config_hash = ckpt.config_hash;
  b.extra_meta = extras(ckpt, {"kind", "dims", "vocab", "emotion_resources"});
  ckpt.restore(b.params());
  return b;
}

void TeacherBundle::save(const std::filesystem::path& path) { nn::save_checkpoint(path, to_checkpoint()); }

TeacherBundle TeacherBundle::load(const std::filesystem::path& path) {
  return from_checkpoint(nn::load_checkpoint(path));
}

std::vector<teacher::TeacherTrace> TeacherBundle::traces(const std::vector<corpus::NewsRecord>& records) {
  std::vector<teacher::TeacherTrace> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(teacher::teacher_forward(r, vocab, encoder, resources, model, dims));
  return out;
}

std::vector<double> TeacherBundle::predict(const std::vector<corpus::NewsRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& t : traces(records)) out.push_back(t.prob);
  return out;
}

StudentBundle::StudentBundle(const TeacherBundle& t, const student::StudentConfig& config, double a)
    : dims(t.dims), vocab(t.vocab), encoder(t.encoder), model(t.dims, config), alpha(a) {
  nn::set_trainable(encoder.params(), false);
}

nn::ParamList StudentBundle::params() {
  nn::ParamList out = encoder.params();
  for (auto* p : model.params()) out.push_back(p);
  return out;
}

nn::Checkpoint StudentBundle::to_checkpoint() {
  nn::Checkpoint c;
  c.vocab_hash = vocab.hash();
  c.config_hash = config_hash;
  c.parent_hash = teacher_hash;
  c.metadata = extra_meta;
  c.metadata["kind"] = kKindStudent;
  c.metadata["dims"] = dims_to_json(dims);
  c.metadata["vocab"] = vocab.serialize();
  c.metadata["alpha"] = format_double(alpha);
  c.metadata["mode"] = std::string(student::to_string(model.config.mode));
  c.metadata["ablation"] = std::string(student::to_string(model.config.ablation));
  c.add_params(params());
  return c;
}

StudentBundle StudentBundle::from_checkpoint(const nn::Checkpoint& ckpt) {
  if (checkpoint_kind(ckpt) != kKindStudent) throw DataError("expected a student checkpoint, got a teacher");
  StudentBundle b;
  b.dims = dims_from_json(ckpt.meta("dims"));
  b.vocab = textenc::Vocabulary::parse(ckpt.meta("vocab"));
  check_vocab(ckpt, b.vocab);
  b.encoder = textenc::EncoderParams(b.vocab.size(), b.dims.d);
  const student::StudentConfig config{student::parse_distill_mode(ckpt.meta("mode")),
                                      student::parse_ablation(ckpt.meta("ablation"))};
  b.model = student::StudentModel(b.dims, config);
  b.alpha = std::stod(ckpt.meta("alpha"));
  b.teacher_hash = ckpt.parent_hash;
  b.config_hash = ckpt.config_hash;
  b.extra_meta = extras(ckpt, {"kind", "dims", "vocab", "alpha", "mode", "ablation"});
  ckpt.restore(b.params());
  nn::set_trainable(b.encoder.params(), false);
  return b;
}

void StudentBundle::save(const std::filesystem::path& path) { nn::save_checkpoint(path, to_checkpoint()); }

StudentBundle StudentBundle::load(const std::filesystem::path& path,
                                  const std::optional<std::filesystem::path>& teacher_path) {
  StudentBundle b = from_checkpoint(nn::load_checkpoint(path));
  if (teacher_path) {
    const std::uint64_t h = nn::file_hash(*teacher_path);
    if (h != b.teacher_hash) {
      throw DataError("student " + path.string() + " was not distilled from " + teacher_path->string() +
                      " (teacher hash mismatch)");
    }
  }
  return b;
}

nn::Matrix StudentBundle::encode_content(const corpus::NewsRecord& record) {
  const auto ids = textenc::tokenize(record.content, vocab, dims.max_content_len);
  nn::Graph g(nn::GradMode::kDisabled);
  return g.value(encoder.encode(g, ids));
}

std::vector<student::StudentTrace> StudentBundle::traces(const std::vector<corpus::NewsRecord>& records) {
  std::vector<student::StudentTrace> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(student::trace(model, encode_content(r), dims));
  return out;
}

std::vector<double> StudentBundle::predict(const std::vector<corpus::NewsRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& t : traces(records)) out.push_back(t.prob);
  return out;
}

}  // namespace cdistill
