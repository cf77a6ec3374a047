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

#include "cdistill/teacher.hpp"

#include <algorithm>
#include <cmath>

#include "cdistill/error.hpp"
#include "cdistill/nn/ops.hpp"

namespace cdistill::teacher {

using nn::Graph;
using nn::Var;
namespace ops = nn::ops;

TeacherModel::TeacherModel(const ModelDims& dims, std::size_t emotion_dim)
    : affinity("teacher.coattention.affinity", dims.d, dims.d),
      content_proj("teacher.coattention.content_proj", dims.k, dims.d),
      comment_proj("teacher.coattention.comment_proj", dims.k, dims.d),
      content_score("teacher.coattention.content_score", dims.k, 1),
      comment_score("teacher.coattention.comment_score", dims.k, 1),
      emotion_mlp("teacher.emotion", {emotion_dim, dims.d, dims.d}),
      aggregator_raw("teacher.aggregator.raw", 3, 1),
      classifier("teacher.classifier", {dims.d, dims.classifier_hidden, 1}) {}

nn::ParamList TeacherModel::params() {
  nn::ParamList out{&affinity, &content_proj, &comment_proj, &content_score, &comment_score};
  emotion_mlp.collect(out);
  out.push_back(&aggregator_raw);
  classifier.collect(out);
  return out;
}

void TeacherModel::init(std::uint64_t seed) {
  nn::init_params(params(), seed);
  aggregator_raw.value.fill(0.0);
}

std::array<double, 3> TeacherModel::aggregator_weights() const {
  std::array<double, 3> w{};
  for (std::size_t i = 0; i < 3; ++i) w[i] = 1.0 / (1.0 + std::exp(-aggregator_raw.value[i]));
  return w;
}

CoAttention co_attention(Graph& g, Var content, const std::vector<bool>& content_mask, Var comments,
                         const std::vector<bool>& comment_mask, TeacherModel& model) {
  const auto& P = g.value(content);
  const auto& C = g.value(comments);
  if (P.rows() != model.affinity.value.rows() || C.rows() != model.affinity.value.rows()) {
    throw NumericError("co_attention: token features must have " + std::to_string(model.affinity.value.rows()) +
                       " rows, got " + nn::shape_string(P) + " and " + nn::shape_string(C));
  }
  // F = tanh(P^T W_l C), M x N
  const Var affinity = ops::tanh(g, ops::matmul_tn(g, content, ops::matmul(g, g.parameter(model.affinity), comments)));
  const Var wp_p = ops::matmul(g, g.parameter(model.content_proj), content);    // k x M
  const Var wc_c = ops::matmul(g, g.parameter(model.comment_proj), comments);   // k x N
  // H_p = tanh(W_p P + (W_c C) F^T), H_c = tanh(W_c C + (W_p P) F)
  const Var h_p = ops::tanh(g, ops::add(g, wp_p, ops::matmul_nt(g, wc_c, affinity)));
  const Var h_c = ops::tanh(g, ops::add(g, wc_c, ops::matmul(g, wp_p, affinity)));
  const Var a_p = ops::masked_softmax(g, ops::matmul_tn(g, g.parameter(model.content_score), h_p), content_mask);
  const Var a_c = ops::masked_softmax(g, ops::matmul_tn(g, g.parameter(model.comment_score), h_c), comment_mask);
  return {a_p, a_c, ops::matmul_nt(g, content, a_p), ops::matmul_nt(g, comments, a_c)};
}

Var embed_emotion(Graph& g, Var emotion, TeacherModel& model) { return model.emotion_mlp.forward(g, emotion); }

Var aggregate(Graph& g, Var content_feature, Var comment_feature, Var emotion_feature, TeacherModel& model) {
  const Var w = ops::sigmoid(g, g.parameter(model.aggregator_raw));
  const Var terms[] = {content_feature, comment_feature, emotion_feature};
  Var f = ops::scale(g, terms[0], ops::element(g, w, 0));
  for (std::size_t i = 1; i < 3; ++i) f = ops::add(g, f, ops::scale(g, terms[i], ops::element(g, w, i)));
  return f;
}

TeacherNodes forward(Graph& g, TeacherModel& model, textenc::EncoderParams& encoder, const Example& ex) {
  const Var content = encoder.encode(g, ex.content_ids);
  const Var comments = encoder.encode(g, ex.comment_ids);
  TeacherNodes n;
  n.attention = co_attention(g, content, std::vector<bool>(ex.content_ids.size(), true), comments,
                             std::vector<bool>(ex.comment_ids.size(), true), model);
  n.emotion = embed_emotion(g, g.constant(ex.emotion), model);
  n.overall = aggregate(g, n.attention.content_feature, n.attention.comment_feature, n.emotion, model);
  n.prob = ops::sigmoid(g, model.classifier.forward(g, n.overall));
  return n;
}

Var loss(Graph& g, Var prob, int label) { return ops::binary_cross_entropy(g, prob, static_cast<double>(label)); }

double loss(double prob, int label) {
  const double p = std::clamp(prob, ops::kProbClamp, 1.0 - ops::kProbClamp);
  return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

TeacherTrace trace(TeacherModel& model, textenc::EncoderParams& encoder, const Example& ex, const ModelDims& dims) {
  Graph g(nn::GradMode::kDisabled);
  const TeacherNodes n = forward(g, model, encoder, ex);
  TeacherTrace t;
  t.content_tokens = ex.content_ids.size();
  t.comment_tokens = ex.comment_ids.size();
  t.content_weights = pad_to(g.value(n.attention.content_weights).data(), dims.max_content_len);
  t.comment_weights = pad_to(g.value(n.attention.comment_weights).data(), dims.max_comment_len);
  t.content_feature = g.value(n.attention.content_feature).to_vector();
  t.comment_feature = g.value(n.attention.comment_feature).to_vector();
  t.emotion = g.value(n.emotion).to_vector();
  t.overall = g.value(n.overall).to_vector();
  t.prob = g.value(n.prob)[0];
  return t;
}

TeacherTrace teacher_forward(const corpus::NewsRecord& record, const textenc::Vocabulary& vocab,
                             textenc::EncoderParams& encoder, const emolex::EmotionResources& resources,
                             TeacherModel& model, const ModelDims& dims) {
  return trace(model, encoder, prepare_example(record, vocab, resources, dims), dims);
}

}  // namespace cdistill::teacher
