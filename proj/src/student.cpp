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

#include "cdistill/student.hpp"

#include <algorithm>
#include <cmath>

#include "cdistill/error.hpp"
#include "cdistill/nn/ops.hpp"

namespace cdistill::student {

using nn::Graph;
using nn::Var;
namespace ops = nn::ops;

std::string_view to_string(Ablation a) {
  switch (a) {
    case Ablation::kNone: return "none";
    case Ablation::kWithoutSemantic: return "wo_semantic";
    case Ablation::kWithoutEmotional: return "wo_emotional";
    case Ablation::kWithoutOverall: return "wo_overall";
  }
  return "none";
}

std::string_view to_string(DistillMode m) {
  switch (m) {
    case DistillMode::kAdaptive: return "adaptive";
    case DistillMode::kFeature: return "feature";
    case DistillMode::kResponse: return "response";
  }
  return "adaptive";
}

Ablation parse_ablation(std::string_view s) {
  for (auto a : {Ablation::kNone, Ablation::kWithoutSemantic, Ablation::kWithoutEmotional, Ablation::kWithoutOverall}) {
    if (to_string(a) == s) return a;
  }
  throw UsageError("unknown ablation '" + std::string(s) + "' (none, wo_semantic, wo_emotional, wo_overall)");
}

DistillMode parse_distill_mode(std::string_view s) {
  for (auto m : {DistillMode::kAdaptive, DistillMode::kFeature, DistillMode::kResponse}) {
    if (to_string(m) == s) return m;
  }
  throw UsageError("unknown distillation mode '" + std::string(s) + "' (adaptive, feature, response)");
}

std::vector<Knowledge> StudentConfig::knowledge() const {
  std::vector<Knowledge> out;
  for (auto k : {Knowledge::kOverall, Knowledge::kSemantic, Knowledge::kEmotional}) {
    if (k == Knowledge::kOverall && ablation == Ablation::kWithoutOverall) continue;
    if (k == Knowledge::kSemantic && ablation == Ablation::kWithoutSemantic) continue;
    if (k == Knowledge::kEmotional && ablation == Ablation::kWithoutEmotional) continue;
    out.push_back(k);
  }
  return out;
}

StudentModel::StudentModel(const ModelDims& dims, const StudentConfig& cfg)
    : content_attention("student.content_attention", dims.d, dims.k),
      emotion_attention("student.emotion_predictor.attention", dims.d, dims.k),
      emotion_mlp("student.emotion_predictor.mlp", {dims.d, dims.d, dims.d}),
      preference_attention("student.preference.attention", dims.d, dims.k),
      preference_mlp("student.preference.mlp", {dims.d, dims.k, cfg.knowledge().size()}),
      aggregator_raw("student.aggregator.raw", 2, 1),
      classifier("student.classifier", {dims.d, dims.classifier_hidden, 1}),
      config(cfg) {}

nn::ParamList StudentModel::params() {
  nn::ParamList out;
  content_attention.collect(out);
  emotion_attention.collect(out);
  emotion_mlp.collect(out);
  preference_attention.collect(out);
  preference_mlp.collect(out);
  out.push_back(&aggregator_raw);
  classifier.collect(out);
  return out;
}

void StudentModel::init(std::uint64_t seed) {
  nn::init_params(params(), seed);
  aggregator_raw.value.fill(0.0);
}

std::array<double, 2> StudentModel::aggregator_weights() const {
  return {1.0 / (1.0 + std::exp(-aggregator_raw.value[0])), 1.0 / (1.0 + std::exp(-aggregator_raw.value[1]))};
}

std::pair<Var, Var> content_attention(Graph& g, Var content, const std::vector<bool>& mask, StudentModel& model) {
  const auto out = model.content_attention.forward(g, content, mask);
  return {out.weights, out.feature};
}

Var predict_social_emotion(Graph& g, Var content, const std::vector<bool>& mask, StudentModel& model) {
  const auto pooled = model.emotion_attention.forward(g, content, mask);
  return model.emotion_mlp.forward(g, pooled.feature);
}

Var knowledge_preference(Graph& g, Var content, const std::vector<bool>& mask, StudentModel& model) {
  const auto pooled = model.preference_attention.forward(g, content, mask);
  return ops::softmax(g, model.preference_mlp.forward(g, pooled.feature));
}

Var aggregate(Graph& g, Var content_feature, Var emotion_feature, StudentModel& model) {
  const Var w = ops::sigmoid(g, g.parameter(model.aggregator_raw));
  return ops::add(g, ops::scale(g, content_feature, ops::element(g, w, 0)),
                  ops::scale(g, emotion_feature, ops::element(g, w, 1)));
}

StudentNodes forward(Graph& g, StudentModel& model, Var content, const std::vector<bool>& mask) {
  StudentNodes n;
  std::tie(n.content_weights, n.content_feature) = content_attention(g, content, mask, model);
  const auto pooled = model.emotion_attention.forward(g, content, mask);
  n.emotion_pooled = pooled.feature;
  n.emotion = model.emotion_mlp.forward(g, pooled.feature);
  n.scores = knowledge_preference(g, content, mask, model);
  n.overall = aggregate(g, n.content_feature, n.emotion, model);
  n.prob = ops::sigmoid(g, model.classifier.forward(g, n.overall));
  return n;
}

TeacherTargets targets_from(const teacher::TeacherTrace& t) {
  TeacherTargets out;
  out.content_weights = nn::Matrix::row(std::span<const double>(t.content_weights).first(t.content_tokens));
  out.emotion = nn::Matrix::column(t.emotion);
  out.overall = nn::Matrix::column(t.overall);
  out.prob = t.prob;
  return out;
}

Var semantic_kd_loss(Graph& g, Var teacher_weights, Var student_weights, const std::vector<bool>& teacher_mask,
                     const std::vector<bool>& student_mask) {
  if (teacher_mask != student_mask) {
    throw NumericError("semantic_kd_loss: teacher and student content masks differ");
  }
  return ops::masked_mse(g, teacher_weights, student_weights, student_mask);
}

Var emotional_kd_loss(Graph& g, Var teacher_emotion, Var student_emotion) {
  return ops::mse(g, teacher_emotion, student_emotion);
}

Var overall_kd_loss(Graph& g, Var teacher_overall, Var student_overall) {
  return ops::mse(g, teacher_overall, student_overall);
}

Var baseline_kd_loss(Graph& g, DistillMode mode, Var teacher_overall, Var student_overall, Var teacher_prob,
                     Var student_prob) {
  switch (mode) {
    case DistillMode::kFeature: return overall_kd_loss(g, teacher_overall, student_overall);
    case DistillMode::kResponse: return ops::mse(g, teacher_prob, student_prob);
    case DistillMode::kAdaptive: break;
  }
  throw UsageError("baseline_kd_loss expects the feature or response mode");
}

LossTerms total_loss(Graph& g, const StudentNodes& n, const std::vector<bool>& mask, const TeacherTargets* targets,
                     int label, double alpha, const StudentConfig& config) {
  if (!(alpha >= 0.0)) throw UsageError("distillation weight alpha must be non-negative");
  LossTerms t;
  t.classification = ops::binary_cross_entropy(g, n.prob, static_cast<double>(label));
  t.total = t.classification;
  if (alpha == 0.0) return t;
  if (targets == nullptr) throw UsageError("distillation with alpha > 0 needs teacher targets");

  const Var f_t = g.constant(targets->overall);
  if (config.mode == DistillMode::kFeature || config.mode == DistillMode::kResponse) {
    const Var d = baseline_kd_loss(g, config.mode, f_t, n.overall, g.constant(nn::Matrix(1, 1, targets->prob)), n.prob);
    (config.mode == DistillMode::kFeature ? t.overall : t.response) = d;
    t.distill = d;
  } else {
    std::vector<Var> weighted;
    const auto kinds = config.knowledge();
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      Var term;
      switch (kinds[i]) {
        case Knowledge::kOverall:
          term = overall_kd_loss(g, f_t, n.overall);
          t.overall = term;
          break;
        case Knowledge::kSemantic:
          term = semantic_kd_loss(g, g.constant(targets->content_weights), n.content_weights,
                                  std::vector<bool>(targets->content_weights.size(), true), mask);
          t.semantic = term;
          break;
        case Knowledge::kEmotional:
          term = emotional_kd_loss(g, g.constant(targets->emotion), n.emotion);
          t.emotional = term;
          break;
      }
      weighted.push_back(ops::mul(g, ops::element(g, n.scores, i), term));
    }
    t.distill = ops::sum(g, weighted);
  }
  t.total = ops::add(g, t.classification, ops::scale(g, *t.distill, alpha));
  return t;
}

StudentTrace trace(StudentModel& model, const nn::Matrix& content, const ModelDims& dims) {
  Graph g(nn::GradMode::kDisabled);
  const std::vector<bool> mask(content.cols(), true);
  const StudentNodes n = forward(g, model, g.constant(content), mask);
  StudentTrace t;
  t.content_tokens = content.cols();
  t.content_weights = pad_to(g.value(n.content_weights).data(), dims.max_content_len);
  t.content_feature = g.value(n.content_feature).to_vector();
  t.emotion = g.value(n.emotion).to_vector();
  t.overall = g.value(n.overall).to_vector();
  t.scores = g.value(n.scores).to_vector();
  t.prob = g.value(n.prob)[0];
  return t;
}

StudentModel ablation_variant(const ModelDims& dims, Ablation kind, DistillMode mode) {
  return StudentModel(dims, StudentConfig{mode, kind});
}

}  // namespace cdistill::student
