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

#include <array>
#include <cstdint>
#include <vector>

#include "cdistill/model.hpp"
#include "cdistill/nn/graph.hpp"
#include "cdistill/nn/layers.hpp"

namespace cdistill::teacher {

// Comment-aware detector: co-attention between content and comment
// tokens, an emotion embedding of the comments, a weighted sum of the
// three features and a sigmoid classifier.
class TeacherModel {
 public:
  TeacherModel() = default;
  explicit TeacherModel(const ModelDims& dims, std::size_t emotion_dim = emolex::kEmotionDim);

  nn::ParamTensor affinity;       // W_l, d x d
  nn::ParamTensor content_proj;   // W_p, k x d
  nn::ParamTensor comment_proj;   // W_c, k x d
  nn::ParamTensor content_score;  // w_hp, k x 1
  nn::ParamTensor comment_score;  // w_hc, k x 1
  nn::Mlp emotion_mlp;            // d_emo -> d -> d
  nn::ParamTensor aggregator_raw; // 3 x 1, weights are sigmoid(raw)
  nn::Mlp classifier;             // d -> hidden -> 1

  nn::ParamList params();
  // Xavier weights, zero biases, raw aggregator weights 0 (w = 0.5).
  void init(std::uint64_t seed);
  // (w_p, w_c, w_e)
  std::array<double, 3> aggregator_weights() const;
};

struct CoAttention {
  nn::Var content_weights;   // a_p, 1 x M
  nn::Var comment_weights;   // a_c, 1 x N
  nn::Var content_feature;   // s_p, d x 1
  nn::Var comment_feature;   // s_c, d x 1
};

CoAttention co_attention(nn::Graph& g, nn::Var content, const std::vector<bool>& content_mask, nn::Var comments,
                         const std::vector<bool>& comment_mask, TeacherModel& model);

nn::Var embed_emotion(nn::Graph& g, nn::Var emotion, TeacherModel& model);

nn::Var aggregate(nn::Graph& g, nn::Var content_feature, nn::Var comment_feature, nn::Var emotion_feature,
                  TeacherModel& model);

struct TeacherNodes {
  CoAttention attention;
  nn::Var emotion;   // e^t
  nn::Var overall;   // f^t
  nn::Var prob;      // y_hat, 1 x 1
};

// Full forward pass with the encoder on the tape. Token matrices cover
// real tokens only.
TeacherNodes forward(nn::Graph& g, TeacherModel& model, textenc::EncoderParams& encoder, const Example& ex);

nn::Var loss(nn::Graph& g, nn::Var prob, int label);
double loss(double prob, int label);

// Per-record intermediate values. Attention vectors are padded to M / N.
struct TeacherTrace {
  std::vector<double> content_weights;
  std::vector<double> comment_weights;
  std::vector<double> content_feature;
  std::vector<double> comment_feature;
  std::vector<double> emotion;
  std::vector<double> overall;
  double prob = 0.5;
  std::size_t content_tokens = 0;
  std::size_t comment_tokens = 0;
};

TeacherTrace trace(TeacherModel& model, textenc::EncoderParams& encoder, const Example& ex, const ModelDims& dims);

TeacherTrace teacher_forward(const corpus::NewsRecord& record, const textenc::Vocabulary& vocab,
                             textenc::EncoderParams& encoder, const emolex::EmotionResources& resources,
                             TeacherModel& model, const ModelDims& dims);

}  // namespace cdistill::teacher
