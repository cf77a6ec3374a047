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

#include "cdistill/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cdistill/error.hpp"
#include "cdistill/rng.hpp"
#include "json.hpp"

namespace cdistill {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw UsageError("config: '" + where + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw UsageError("config: unknown key '" + where + (where.empty() ? "" : ".") + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError("config: bad value for '" + where + (where.empty() ? "" : ".") + key + "'");
  }
}

json dims_json(const ModelDims& d) {
  return {{"d", d.d},
          {"k", d.k},
          {"max_content_len", d.max_content_len},
          {"max_comment_len", d.max_comment_len},
          {"classifier_hidden", d.classifier_hidden}};
}

ModelDims parse_dims(const json& j, const std::string& where) {
  reject_unknown(j, {"d", "k", "max_content_len", "max_comment_len", "classifier_hidden"}, where);
  ModelDims d;
  read(j, "d", d.d, where);
  read(j, "k", d.k, where);
  read(j, "max_content_len", d.max_content_len, where);
  read(j, "max_comment_len", d.max_comment_len, where);
  read(j, "classifier_hidden", d.classifier_hidden, where);
  return d;
}

json train_json(const TrainOptions& t) {
  return {{"lr", t.lr}, {"batch_size", t.batch_size}, {"max_epochs", t.max_epochs}, {"patience", t.patience}};
}

void parse_train(const json& j, TrainOptions& t, const std::string& where,
                 std::set<std::string> extra = {}) {
  extra.insert({"lr", "batch_size", "max_epochs", "patience"});
  reject_unknown(j, extra, where);
  read(j, "lr", t.lr, where);
  read(j, "batch_size", t.batch_size, where);
  read(j, "max_epochs", t.max_epochs, where);
  read(j, "patience", t.patience, where);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json student_j = train_json(student.train);
  student_j["alpha"] = student.alpha;
  student_j["mode"] = std::string(student::to_string(student.model.mode));
  student_j["ablation"] = std::string(student::to_string(student.model.ablation));
  json teacher_j = train_json(teacher);
  teacher_j["train_comment_proportion"] = train_comment_proportion;
  json j = {{"seed", seed},
            {"data", {{"split_dir", split_dir}, {"keep_empty_comments", keep_empty_comments}}},
            {"emotion_resources", emotion_resources},
            {"vocab_min_count", vocab_min_count},
            {"model", dims_json(model)},
            {"teacher", teacher_j},
            {"student", student_j}};
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const json j = parse_text(text);
  reject_unknown(j, {"seed", "data", "emotion_resources", "vocab_min_count", "model", "teacher", "student"}, "");
  ExperimentConfig c;
  read(j, "seed", c.seed, "");
  read(j, "emotion_resources", c.emotion_resources, "");
  read(j, "vocab_min_count", c.vocab_min_count, "");
  if (j.contains("data")) {
    const json& d = j.at("data");
    reject_unknown(d, {"split_dir", "keep_empty_comments"}, "data");
    read(d, "split_dir", c.split_dir, "data");
    read(d, "keep_empty_comments", c.keep_empty_comments, "data");
  }
  if (j.contains("model")) c.model = parse_dims(j.at("model"), "model");
  if (j.contains("teacher")) {
    const json& t = j.at("teacher");
    parse_train(t, c.teacher, "teacher", {"train_comment_proportion"});
    read(t, "train_comment_proportion", c.train_comment_proportion, "teacher");
  }
  if (j.contains("student")) {
    const json& s = j.at("student");
    parse_train(s, c.student.train, "student", {"alpha", "mode", "ablation"});
    read(s, "alpha", c.student.alpha, "student");
    std::string mode(student::to_string(c.student.model.mode));
    std::string ablation(student::to_string(c.student.model.ablation));
    read(s, "mode", mode, "student");
    read(s, "ablation", ablation, "student");
    c.student.model.mode = student::parse_distill_mode(mode);
    c.student.model.ablation = student::parse_ablation(ablation);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) { return from_json(read_text(path)); }

void ExperimentConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(to_json()); }

void ExperimentConfig::validate() const {
  auto check_train = [](const TrainOptions& t, const std::string& where) {
    if (!(t.lr > 0.0)) throw UsageError("config: " + where + ".lr must be positive");
    if (t.batch_size == 0) throw UsageError("config: " + where + ".batch_size must be positive");
    if (t.max_epochs < 1) throw UsageError("config: " + where + ".max_epochs must be at least 1");
    if (t.patience < 1) throw UsageError("config: " + where + ".patience must be at least 1");
  };
  check_train(teacher, "teacher");
  check_train(student.train, "student");
  if (!(student.alpha >= 0.0)) throw UsageError("config: student.alpha must be non-negative");
  if (!(train_comment_proportion >= 0.0 && train_comment_proportion <= 1.0)) {
    throw UsageError("config: teacher.train_comment_proportion must lie in [0, 1]");
  }
  if (model.d == 0 || model.k == 0 || model.classifier_hidden == 0) {
    throw UsageError("config: model sizes must be positive");
  }
  if (model.max_content_len == 0 || model.max_comment_len == 0) {
    throw UsageError("config: max_content_len and max_comment_len must be positive");
  }
  if (vocab_min_count < 1) throw UsageError("config: vocab_min_count must be at least 1");
}

std::string dims_to_json(const ModelDims& dims) { return dims_json(dims).dump(); }

ModelDims dims_from_json(const std::string& text) { return parse_dims(parse_text(text), "model"); }

std::string synthetic_spec_to_json(const corpus::SyntheticSpec& s) {
  auto range = [](const corpus::IntRange& r) { return json{{"min", r.min}, {"max", r.max}}; };
  json j = {{"num_records", s.num_records},
            {"fake_fraction", s.fake_fraction},
            {"vocab_size", s.vocab_size},
            {"markers_per_class", s.markers_per_class},
            {"marker_periods", s.marker_periods},
            {"cues_per_class", s.cues_per_class},
            {"p_marker", s.p_marker},
            {"p_cue", s.p_cue},
            {"marker_leak", s.marker_leak},
            {"content_len", range(s.content_len)},
            {"num_comments", range(s.num_comments)},
            {"comment_len", range(s.comment_len)},
            {"emotion_rate_fake", s.emotion_rate_fake},
            {"emotion_rate_real", s.emotion_rate_real},
            {"p_echo", s.p_echo},
            {"start_time", s.start_time},
            {"time_span", s.time_span}};
  return j.dump(2) + "\n";
}

corpus::SyntheticSpec synthetic_spec_from_json(const std::string& text) {
  const json j = parse_text(text);
  reject_unknown(j,
                 {"num_records", "fake_fraction", "vocab_size", "markers_per_class", "marker_periods",
                  "cues_per_class", "p_marker", "p_cue", "marker_leak", "content_len", "num_comments", "comment_len",
                  "emotion_rate_fake", "emotion_rate_real", "p_echo", "start_time", "time_span"},
                 "");
  corpus::SyntheticSpec s;
  read(j, "num_records", s.num_records, "");
  read(j, "fake_fraction", s.fake_fraction, "");
  read(j, "vocab_size", s.vocab_size, "");
  read(j, "markers_per_class", s.markers_per_class, "");
  read(j, "marker_periods", s.marker_periods, "");
  read(j, "cues_per_class", s.cues_per_class, "");
  read(j, "p_marker", s.p_marker, "");
  read(j, "p_cue", s.p_cue, "");
  read(j, "marker_leak", s.marker_leak, "");
  auto range = [&](const char* key, corpus::IntRange& r) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    reject_unknown(v, {"min", "max"}, key);
    read(v, "min", r.min, key);
    read(v, "max", r.max, key);
  };
  range("content_len", s.content_len);
  range("num_comments", s.num_comments);
  range("comment_len", s.comment_len);
  read(j, "emotion_rate_fake", s.emotion_rate_fake, "");
  read(j, "emotion_rate_real", s.emotion_rate_real, "");
  read(j, "p_echo", s.p_echo, "");
  read(j, "start_time", s.start_time, "");
  read(j, "time_span", s.time_span, "");
  return s;
}

}  // namespace cdistill
