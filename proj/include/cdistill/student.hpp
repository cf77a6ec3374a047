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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdistill/model.hpp"
#include "cdistill/nn/graph.hpp"
#include "cdistill/nn/layers.hpp"
#include "cdistill/teacher.hpp"

namespace cdistill::student {

// Knowledge types, in the order the preference scorer emits them.
enum class Knowledge { kOverall = 0, kSemantic = 1, kEmotional = 2 };

enum class Ablation { kNone, kWithoutSemantic, kWithoutEmotional, kWithoutOverall };

// kAdaptive: scorer-weighted semantic + emotional + overall losses.
// kFeature:  overall-feature alignment only.
// kResponse: squared difference of the predicted probabilities.
enum class DistillMode { kAdaptive, kFeature, kResponse };

std::string_view to_string(Ablation a);
std::string_view to_string(DistillMode m);
Ablation parse_ablation(std::string_view s);
DistillMode parse_distill_mode(std::string_view s);

struct StudentConfig {
  DistillMode mode = DistillMode::kAdaptive;
  Ablation ablation = Ablation::kNone;

  // Knowledge types kept by the ablation, in scorer order.
  std::vector<Knowledge> knowledge() const;
  bool operator==(const StudentConfig&) const = default;
};

class StudentModel {
 public:
  StudentModel() = default;
  StudentModel(const ModelDims& dims, const StudentConfig& config);

  nn::MaskAttentionLayer content_attention;     // produces a_p^s
  nn::MaskAttentionLayer emotion_attention;     // social emotion predictor
  nn::Mlp emotion_mlp;                          // d -> d -> d
  nn::MaskAttentionLayer preference_attention;  // knowledge preference scorer
  nn::Mlp preference_mlp;                       // d -> k -> |knowledge|
  nn::ParamTensor aggregator_raw;               // 2 x 1, weights are sigmoid(raw)
  nn::Mlp classifier;                           // d -> hidden -> 1
  StudentConfig config;

  nn::ParamList params();
  void init(std::uint64_t seed);
  std::array<double, 2> aggregator_weights() const;
};

struct StudentNodes {
  nn::Var content_weights;  // a_p^s, 1 x M
  nn::Var content_feature;  // s_p^s
  nn::Var emotion_pooled;   // e_hat^s
  nn::Var emotion;          // e^s
  nn::Var scores;           // scr, |knowledge| x 1
  nn::Var overall;          // f^s
  nn::Var prob;             // y_hat
};

// (a_p^s, s_p^s)
std::pair<nn::Var, nn::Var> content_attention(nn::Graph& g, nn::Var content, const std::vector<bool>& mask,
                                              StudentModel& model);
nn::Var predict_social_emotion(nn::Graph& g, nn::Var content, const std::vector<bool>& mask, StudentModel& model);
nn::Var knowledge_preference(nn::Graph& g, nn::Var content, const std::vector<bool>& mask, StudentModel& model);
nn::Var aggregate(nn::Graph& g, nn::Var content_feature, nn::Var emotion_feature, StudentModel& model);

StudentNodes forward(nn::Graph& g, StudentModel& model, nn::Var content, const std::vector<bool>& mask);

// Fixed teacher quantities for one record, restricted to real content
// tokens.
struct TeacherTargets {
  nn::Matrix content_weights;  // 1 x M_real
  nn::Matrix emotion;          // d x 1
  nn::Matrix overall;          // d x 1
  double prob = 0.5;
};

TeacherTargets targets_from(const teacher::TeacherTrace& trace);

// (1 / |mask|) * sum over mask-true positions of (a_t - a_s)^2. The two
// masks must be identical.
nn::Var semantic_kd_loss(nn::Graph& g, nn::Var teacher_weights, nn::Var student_weights,
                         const std::vector<bool>& teacher_mask, const std::vector<bool>& student_mask);
nn::Var emotional_kd_loss(nn::Graph& g, nn::Var teacher_emotion, nn::Var student_emotion);
nn::Var overall_kd_loss(nn::Graph& g, nn::Var teacher_overall, nn::Var student_overall);

struct LossTerms {
  nn::Var total;
  nn::Var classification;
  std::optional<nn::Var> semantic;
  std::optional<nn::Var> emotional;
  std::optional<nn::Var> overall;
  std::optional<nn::Var> response;
  std::optional<nn::Var> distill;
};

// L_cls + alpha * L_distill. With alpha == 0 the distillation terms
// are not built and `targets` may be null.
LossTerms total_loss(nn::Graph& g, const StudentNodes& nodes, const std::vector<bool>& mask,
                     const TeacherTargets* targets, int label, double alpha, const StudentConfig& config);

// Group-II style distillation terms: overall feature MSE (kFeature) or
// probability MSE (kResponse).
nn::Var baseline_kd_loss(nn::Graph& g, DistillMode mode, nn::Var teacher_overall, nn::Var student_overall,
                         nn::Var teacher_prob, nn::Var student_prob);

struct StudentTrace {
  std::vector<double> content_weights;  // padded to M
  std::vector<double> content_feature;
  std::vector<double> emotion;
  std::vector<double> overall;
  std::vector<double> scores;
  double prob = 0.5;
  std::size_t content_tokens = 0;
};

// `content` holds the encoded real content tokens (d x M_real).
StudentTrace trace(StudentModel& model, const nn::Matrix& content, const ModelDims& dims);

StudentModel ablation_variant(const ModelDims& dims, Ablation kind, DistillMode mode = DistillMode::kAdaptive);

}  // namespace cdistill::student
