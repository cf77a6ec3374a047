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

#include <cmath>
#include <numeric>

#include "../oracles.hpp"
#include "cdistill/diagnostics.hpp"
#include "cdistill/error.hpp"
#include "cdistill/rng.hpp"
#include "cdistill/student.hpp"
#include "doctest.h"

using namespace cdistill;
using namespace cdistill::student;
using nn::Graph;
using nn::GradMode;
using nn::Matrix;
using nn::Var;
namespace ops = cdistill::nn::ops;

namespace {

ModelDims dims4() { return ModelDims{.d = 4, .k = 3, .max_content_len = 6, .max_comment_len = 6, .classifier_hidden = 3}; }

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.uniform(-1.0, 1.0);
  return m;
}

oracle::Mat to_rows(const Matrix& m) {
  oracle::Mat out(m.rows(), oracle::Vec(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

oracle::Vec mlp_oracle(const nn::Mlp& mlp, oracle::Vec x) {
  const auto& layers = mlp.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    x = oracle::affine(to_rows(layers[i].weight.value), layers[i].bias.value.to_vector(), x);
    if (i + 1 < layers.size())
      for (auto& v : x) v = std::tanh(v);
  }
  return x;
}

// (weights, pooled feature) of a mask attention layer.
std::pair<oracle::Vec, oracle::Vec> attention_oracle(nn::MaskAttentionLayer& layer, const Matrix& tokens) {
  const auto rows = to_rows(tokens);
  oracle::Vec scores;
  for (std::size_t c = 0; c < tokens.cols(); ++c) {
    oracle::Vec col(tokens.rows());
    for (std::size_t r = 0; r < tokens.rows(); ++r) col[r] = tokens(r, c);
    scores.push_back(mlp_oracle(layer.scorer(), col)[0]);
  }
  const auto w = oracle::softmax(scores);
  return {w, oracle::weighted_columns(rows, w)};
}

Matrix first_columns(const Matrix& m, std::size_t n) {
  Matrix out(m.rows(), n);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = m(r, c);
  return out;
}

void zero_mlp(nn::Mlp& mlp) {
  for (auto& l : mlp.layers()) {
    l.weight.value.fill(0.0);
    l.bias.value.fill(0.0);
  }
}

double scalar(const Graph& g, Var v) { return g.value(v)[0]; }

}  // namespace

TEST_CASE("config names") {
  CHECK(to_string(Ablation::kWithoutOverall) == "wo_overall");
  CHECK(parse_ablation("wo_semantic") == Ablation::kWithoutSemantic);
  CHECK(parse_distill_mode("response") == DistillMode::kResponse);
  CHECK_THROWS_AS(parse_ablation("bogus"), UsageError);
  CHECK_THROWS_AS(parse_distill_mode(""), UsageError);
  CHECK(StudentConfig{}.knowledge() ==
        std::vector<Knowledge>{Knowledge::kOverall, Knowledge::kSemantic, Knowledge::kEmotional});
  CHECK(StudentConfig{DistillMode::kAdaptive, Ablation::kWithoutOverall}.knowledge() ==
        std::vector<Knowledge>{Knowledge::kSemantic, Knowledge::kEmotional});
}

TEST_CASE("student content attention") {
  Rng rng(3);
  StudentModel m(dims4(), {});
  m.init(6);
  Graph g(GradMode::kDisabled);

  const Matrix one = random_matrix(rng, 4, 1);
  const auto [w1, s1] = content_attention(g, g.constant(one), {true}, m);
  CHECK(g.value(w1)[0] == 1.0);
  for (int r = 0; r < 4; ++r) CHECK(g.value(s1)[r] == one[r]);

  const Matrix tokens = random_matrix(rng, 4, 5);
  const auto [w, s] = content_attention(g, g.constant(tokens), std::vector<bool>(5, true), m);
  const auto [rw, rs] = attention_oracle(m.content_attention, tokens);
  for (int i = 0; i < 5; ++i) CHECK(g.value(w)[i] == doctest::Approx(rw[i]).epsilon(1e-13));
  for (int i = 0; i < 4; ++i) CHECK(g.value(s)[i] == doctest::Approx(rs[i]).epsilon(1e-13));

  zero_mlp(m.content_attention.scorer());
  Graph g2(GradMode::kDisabled);
  const auto [wu, su] = content_attention(g2, g2.constant(tokens), std::vector<bool>(5, true), m);
  for (int i = 0; i < 5; ++i) CHECK(g2.value(wu)[i] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(content_attention(g, g.constant(tokens), std::vector<bool>(5, false), m), NumericError);
}

TEST_CASE("social emotion predictor") {
  Rng rng(4);
  StudentModel m(dims4(), {});
  m.init(7);
  Graph g(GradMode::kDisabled);
  const Matrix tokens = random_matrix(rng, 4, 3);
  const auto [w, pooled] = attention_oracle(m.emotion_attention, tokens);
  const auto ref = mlp_oracle(m.emotion_mlp, pooled);
  const auto e = g.value(predict_social_emotion(g, g.constant(tokens), std::vector<bool>(3, true), m));
  for (int i = 0; i < 4; ++i) CHECK(e[i] == doctest::Approx(ref[i]).epsilon(1e-13));

  // Zero hidden weights leave the bias path only.
  for (auto& l : m.emotion_mlp.layers()) l.weight.value.fill(0.0);
  const auto& l1 = m.emotion_mlp.layers()[1];
  Graph g2(GradMode::kDisabled);
  const auto bias_only = g2.value(predict_social_emotion(g2, g2.constant(tokens), std::vector<bool>(3, true), m));
  for (int i = 0; i < 4; ++i) CHECK(bias_only[i] == l1.bias.value[i]);

  const auto nodes = forward(g, m, g.constant(first_columns(tokens, 1)), {true});
  for (int r = 0; r < 4; ++r) CHECK(g.value(nodes.emotion_pooled)[r] == tokens(r, 0));
}

TEST_CASE("knowledge preference scores") {
  Rng rng(5);
  StudentModel m(dims4(), {});
  m.init(8);
  Graph g(GradMode::kDisabled);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix tokens = random_matrix(rng, 4, 1 + rng.below(5));
    const auto scr = g.value(knowledge_preference(g, g.constant(tokens), std::vector<bool>(tokens.cols(), true), m));
    REQUIRE(scr.size() == 3);
    double sum = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(scr[i] > 0.0);
      sum += scr[i];
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    const auto [w, pooled] = attention_oracle(m.preference_attention, tokens);
    const auto ref = oracle::softmax(mlp_oracle(m.preference_mlp, pooled));
    for (std::size_t i = 0; i < 3; ++i) CHECK(scr[i] == doctest::Approx(ref[i]).epsilon(1e-13));
  }
  zero_mlp(m.preference_mlp);
  Graph g2(GradMode::kDisabled);
  const auto uni = g2.value(knowledge_preference(g2, g2.constant(random_matrix(rng, 4, 2)), {true, true}, m));
  for (std::size_t i = 0; i < 3; ++i) CHECK(uni[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("student aggregation") {
  StudentModel m(dims4(), {});
  m.init(9);
  Graph g(GradMode::kDisabled);
  const Matrix s = Matrix::column(std::vector<double>{1, -2, 3, 0.5}), e = Matrix::column(std::vector<double>{0, 4, -1, 2});
  CHECK(m.aggregator_weights() == std::array<double, 2>{0.5, 0.5});
  const auto f = g.value(aggregate(g, g.constant(s), g.constant(e), m));
  for (int i = 0; i < 4; ++i) CHECK(f[i] == 0.5 * (s[i] + e[i]));
  m.aggregator_raw.value = Matrix::column(std::vector<double>{60.0, -60.0});
  Graph g2(GradMode::kDisabled);
  const auto sel = g2.value(aggregate(g2, g2.constant(s), g2.constant(e), m));
  for (int i = 0; i < 4; ++i) CHECK(sel[i] == doctest::Approx(s[i]).epsilon(1e-15));
  m.aggregator_raw.value = Matrix::column(std::vector<double>{0.3, -1.1});
  const double wp = oracle::sigmoid(0.3), we = oracle::sigmoid(-1.1);
  Graph g3(GradMode::kDisabled);
  const auto mix = g3.value(aggregate(g3, g3.constant(s), g3.constant(e), m));
  for (int i = 0; i < 4; ++i) CHECK(mix[i] == doctest::Approx(wp * s[i] + we * e[i]).epsilon(1e-15));
}

TEST_CASE("distillation loss closed forms") {
  Graph g(GradMode::kDisabled);
  const auto row = [&](std::vector<double> v) { return g.constant(Matrix::row(v)); };
  const auto col = [&](std::vector<double> v) { return g.constant(Matrix::column(v)); };
  CHECK(scalar(g, semantic_kd_loss(g, row({1, 0}), row({0.5, 0.5}), {true, true}, {true, true})) == 0.25);
  CHECK(scalar(g, semantic_kd_loss(g, row({0.2, 0.8}), row({0.2, 0.8}), {true, true}, {true, true})) == 0.0);
  CHECK_THROWS_AS(semantic_kd_loss(g, row({1, 0}), row({1, 0}), {true, true}, {true, false}), NumericError);
  CHECK(scalar(g, emotional_kd_loss(g, col({1, 0}), col({0, 0}))) == 0.5);
  CHECK(scalar(g, overall_kd_loss(g, col({1, 2, 3, 4}), col({1, 2, 2, 4}))) == 0.25);
  const Var pt = g.constant(Matrix(1, 1, 0.9)), ps = g.constant(Matrix(1, 1, 0.5));
  CHECK(scalar(g, baseline_kd_loss(g, DistillMode::kResponse, col({0}), col({0}), pt, ps)) ==
        doctest::Approx(0.16).epsilon(1e-15));
  CHECK(scalar(g, baseline_kd_loss(g, DistillMode::kResponse, col({0}), col({0}), pt, pt)) == 0.0);
  CHECK(scalar(g, baseline_kd_loss(g, DistillMode::kFeature, col({1, 2, 3, 4}), col({1, 2, 2, 4}), pt, ps)) ==
        scalar(g, overall_kd_loss(g, col({1, 2, 3, 4}), col({1, 2, 2, 4}))));

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(7);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    const std::vector<bool> mask(n, true);
    CHECK(scalar(g, semantic_kd_loss(g, row(a), row(b), mask, mask)) ==
          doctest::Approx(oracle::mean_sq_diff(a, b)).epsilon(1e-14));
    CHECK(scalar(g, emotional_kd_loss(g, col(a), col(b))) == doctest::Approx(oracle::mean_sq_diff(a, b)).epsilon(1e-14));
    CHECK(scalar(g, overall_kd_loss(g, col(a), col(b))) == doctest::Approx(oracle::mean_sq_diff(a, b)).epsilon(1e-14));
  }
}

TEST_CASE("total loss composition") {
  Rng rng(21);
  const ModelDims dims = dims4();
  StudentModel m(dims, {});
  m.init(10);
  const Matrix tokens = random_matrix(rng, 4, 3);
  const std::vector<bool> mask(3, true);
  Graph g(GradMode::kDisabled);
  const auto nodes = forward(g, m, g.constant(tokens), mask);

  TeacherTargets t;
  t.content_weights = Matrix::row(std::vector<double>{0.6, 0.3, 0.1});
  t.emotion = random_matrix(rng, 4, 1);
  t.overall = random_matrix(rng, 4, 1);
  t.prob = 0.8;

  const auto plain = total_loss(g, nodes, mask, nullptr, 1, 0.0, m.config);
  CHECK(scalar(g, plain.total) == scalar(g, plain.classification));
  CHECK_FALSE(plain.distill.has_value());
  CHECK(scalar(g, total_loss(g, nodes, mask, &t, 1, 0.0, m.config).total) == scalar(g, plain.total));
  CHECK_THROWS_AS(total_loss(g, nodes, mask, &t, 1, -0.1, m.config), UsageError);
  CHECK_THROWS_AS(total_loss(g, nodes, mask, nullptr, 1, 0.4, m.config), UsageError);

  const auto full = total_loss(g, nodes, mask, &t, 1, 0.4, m.config);
  const auto scr = g.value(nodes.scores).to_vector();
  const double l_o = oracle::mean_sq_diff(t.overall.to_vector(), g.value(nodes.overall).to_vector());
  const double l_s = oracle::mean_sq_diff(t.content_weights.to_vector(), g.value(nodes.content_weights).to_vector());
  const double l_e = oracle::mean_sq_diff(t.emotion.to_vector(), g.value(nodes.emotion).to_vector());
  const double bce = -std::log(g.value(nodes.prob)[0]);
  CHECK(scalar(g, *full.overall) == doctest::Approx(l_o).epsilon(1e-14));
  CHECK(scalar(g, *full.semantic) == doctest::Approx(l_s).epsilon(1e-14));
  CHECK(scalar(g, *full.emotional) == doctest::Approx(l_e).epsilon(1e-14));
  CHECK(scalar(g, full.classification) == doctest::Approx(bce).epsilon(1e-14));
  CHECK(scalar(g, full.total) ==
        doctest::Approx(bce + 0.4 * (scr[0] * l_o + scr[1] * l_s + scr[2] * l_e)).epsilon(1e-14));

  // Copying the student's own quantities gives zero distillation.
  TeacherTargets self;
  self.content_weights = g.value(nodes.content_weights);
  self.emotion = g.value(nodes.emotion);
  self.overall = g.value(nodes.overall);
  self.prob = g.value(nodes.prob)[0];
  CHECK(scalar(g, *total_loss(g, nodes, mask, &self, 0, 0.4, m.config).distill) == 0.0);
  for (auto mode : {DistillMode::kFeature, DistillMode::kResponse}) {
    const StudentConfig cfg{mode, Ablation::kNone};
    CHECK(scalar(g, *total_loss(g, nodes, mask, &self, 0, 0.4, cfg).distill) == 0.0);
  }

  const auto feature = total_loss(g, nodes, mask, &t, 1, 0.4, StudentConfig{DistillMode::kFeature, Ablation::kNone});
  CHECK(scalar(g, *feature.distill) == doctest::Approx(l_o).epsilon(1e-14));
  CHECK_FALSE(feature.semantic.has_value());
  const auto response = total_loss(g, nodes, mask, &t, 1, 0.4, StudentConfig{DistillMode::kResponse, Ablation::kNone});
  const double dp = 0.8 - g.value(nodes.prob)[0];
  CHECK(scalar(g, *response.distill) == doctest::Approx(dp * dp).epsilon(1e-14));

  const std::vector<bool> short_mask(2, true);
  const auto nodes2 = forward(g, m, g.constant(first_columns(tokens, 2)), short_mask);
  CHECK_THROWS_AS(total_loss(g, nodes2, short_mask, &t, 1, 0.4, m.config), NumericError);
}

TEST_CASE("ablation variants score two knowledge types") {
  Rng rng(31);
  const ModelDims dims = dims4();
  const Matrix tokens = random_matrix(rng, 4, 3);
  const std::vector<bool> mask(3, true);
  TeacherTargets t;
  t.content_weights = Matrix::row(std::vector<double>{0.2, 0.5, 0.3});
  t.emotion = random_matrix(rng, 4, 1);
  t.overall = random_matrix(rng, 4, 1);
  for (auto kind : {Ablation::kWithoutSemantic, Ablation::kWithoutEmotional, Ablation::kWithoutOverall}) {
    StudentModel m = ablation_variant(dims, kind);
    m.init(11);
    CHECK(m.preference_mlp.out_dim() == 2);
    Graph g(GradMode::kDisabled);
    const auto nodes = forward(g, m, g.constant(tokens), mask);
    const auto scr = g.value(nodes.scores).to_vector();
    REQUIRE(scr.size() == 2);
    CHECK(std::abs(scr[0] + scr[1] - 1.0) < 1e-12);
    const auto terms = total_loss(g, nodes, mask, &t, 0, 0.4, m.config);
    CHECK(terms.overall.has_value() == (kind != Ablation::kWithoutOverall));
    CHECK(terms.semantic.has_value() == (kind != Ablation::kWithoutSemantic));
    CHECK(terms.emotional.has_value() == (kind != Ablation::kWithoutEmotional));
    if (kind == Ablation::kWithoutOverall) {
      CHECK(scalar(g, *terms.distill) ==
            doctest::Approx(scr[0] * scalar(g, *terms.semantic) + scr[1] * scalar(g, *terms.emotional)).epsilon(1e-14));
    }
  }
}

TEST_CASE("student trace shapes") {
  Rng rng(41);
  const ModelDims dims = dims4();
  StudentModel m(dims, {});
  m.init(12);
  const auto tr = trace(m, random_matrix(rng, 4, 4), dims);
  CHECK(tr.content_weights.size() == dims.max_content_len);
  CHECK(tr.content_tokens == 4);
  CHECK(tr.content_weights[4] == 0.0);
  CHECK(tr.scores.size() == 3);
  CHECK(std::accumulate(tr.content_weights.begin(), tr.content_weights.end(), 0.0) == doctest::Approx(1.0));
  CHECK(tr.prob > 0.0);
  CHECK(tr.prob < 1.0);
}

TEST_CASE("student gradient check with a frozen teacher") {
  const auto records = corpus::generate_synthetic_corpus(corpus::SyntheticSpec{.num_records = 8}, 3);
  for (auto mode : {DistillMode::kAdaptive, DistillMode::kFeature, DistillMode::kResponse}) {
    diagnostics::GradCheckOptions opt;
    opt.student.mode = mode;
    const auto suite = diagnostics::run_grad_checks(records, opt);
    INFO(suite.student.to_string());
    CHECK(suite.student.passed);
  }
}
