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

#include "../oracles.hpp"
#include "cdistill/error.hpp"
#include "cdistill/metrics.hpp"
#include "cdistill/rng.hpp"
#include "doctest.h"
#include "nlohmann/json.hpp"

using namespace cdistill;
using namespace cdistill::metrics;

namespace {

struct ScoreSet {
  std::vector<double> scores;
  std::vector<int> labels;
};

ScoreSet random_set(Rng& rng, bool coarse) {
  ScoreSet s;
  const std::size_t n = 6 + rng.below(40);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = rng.bernoulli(0.5) ? 1 : 0;
    double v = rng.uniform() * 0.6 + 0.3 * y;
    if (coarse) v = std::round(v * 10.0) / 10.0;
    s.scores.push_back(v);
    s.labels.push_back(y);
  }
  s.labels[0] = 0;
  s.labels[1] = 1;
  return s;
}

}  // namespace

TEST_CASE("hand confusion fixture") {
  const std::vector<double> scores{0.9, 0.8, 0.6, 0.4, 0.3, 0.1};
  const std::vector<int> labels{1, 1, 0, 1, 0, 0};
  const auto c = confusion(scores, labels);
  CHECK(c == Confusion{2, 1, 1, 2});
  const auto r = evaluate(scores, labels);
  CHECK(r.f1_fake == 4.0 / 6.0);
  CHECK(r.f1_real == 4.0 / 6.0);
  CHECK(r.acc == 4.0 / 6.0);
  CHECK(r.macro_f1 == (4.0 / 6.0 + 4.0 / 6.0) / 2.0);
  CHECK(r.n == 6);
  // Fake scores rank above real ones in 8 of 9 pairs.
  CHECK(*r.auc == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("threshold counts ties as fake") {
  const std::vector<double> scores{0.5, 0.49999};
  const std::vector<int> labels{1, 0};
  CHECK(confusion(scores, labels) == Confusion{1, 0, 0, 1});
}

TEST_CASE("perfect and degenerate scores") {
  const std::vector<double> perfect{0.9, 0.9, 0.1, 0.1};
  const std::vector<int> labels{1, 1, 0, 0};
  const auto r = evaluate(perfect, labels);
  CHECK(r.macro_f1 == 1.0);
  CHECK(r.acc == 1.0);
  CHECK(*r.auc == 1.0);
  CHECK(*r.spauc == 1.0);

  const std::vector<double> flat(4, 0.7);
  CHECK(*auc(flat, labels) == 0.5);
  CHECK(*spauc(flat, labels) == doctest::Approx(0.5).epsilon(1e-12));

  const std::vector<int> one_class{1, 1, 1, 1};
  const auto single = evaluate(perfect, one_class);
  CHECK_FALSE(single.auc.has_value());
  CHECK_FALSE(single.spauc.has_value());
  CHECK(single.f1_real == 0.0);
  CHECK(single.acc == 0.5);
  const auto j = nlohmann::json::parse(single.to_json());
  CHECK(j["auc"].is_null());
  CHECK(j["macF1"].get<double>() == single.macro_f1);
  CHECK(j["confusion"]["tp"].get<int>() == 2);
}

TEST_CASE("evaluate input errors") {
  const std::vector<double> s{0.1, 0.2};
  CHECK_THROWS_AS(evaluate(s, std::vector<int>{1}), UsageError);
  CHECK_THROWS_AS(evaluate(std::vector<double>{}, std::vector<int>{}), DataError);
  CHECK_THROWS_AS(evaluate(s, std::vector<int>{0, 2}), DataError);
  CHECK_THROWS_AS(spauc(s, std::vector<int>{0, 1}, 0.0), UsageError);
  CHECK_THROWS_AS(spauc(s, std::vector<int>{0, 1}, 1.5), UsageError);
}

TEST_CASE("metrics agree with a brute-force confusion count") {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const auto set = random_set(rng, trial % 2 == 0);
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < set.scores.size(); ++i) {
      const bool pred = set.scores[i] >= 0.5;
      if (pred && set.labels[i] == 1) ++tp;
      if (pred && set.labels[i] == 0) ++fp;
      if (!pred && set.labels[i] == 1) ++fn;
      if (!pred && set.labels[i] == 0) ++tn;
    }
    const auto r = evaluate(set.scores, set.labels);
    const auto f1 = [](double a, double b, double c) { return a + b + c == 0 ? 0.0 : 2 * a / (2 * a + b + c); };
    CHECK(r.f1_fake == f1(tp, fp, fn));
    CHECK(r.f1_real == f1(tn, fn, fp));
    CHECK(r.acc == static_cast<double>(tp + tn) / set.scores.size());
    CHECK(r.macro_f1 == (f1(tp, fp, fn) + f1(tn, fn, fp)) / 2);
  }
}

TEST_CASE("AUC and SPAUC against the exhaustive ROC oracle") {
  Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const auto set = random_set(rng, trial % 2 == 1);
    CHECK(std::abs(*auc(set.scores, set.labels) - oracle::pairwise_auc(set.scores, set.labels)) < 1e-9);
    for (double f : {0.1, 0.25, 0.5, 1.0}) {
      CHECK(std::abs(*spauc(set.scores, set.labels, f) - oracle::brute_spauc(set.scores, set.labels, f)) < 1e-9);
    }
    CHECK(std::abs(*spauc(set.scores, set.labels, 1.0) - *auc(set.scores, set.labels)) < 1e-9);
  }
}

TEST_CASE("rank metrics are invariant to monotone transforms") {
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const auto set = random_set(rng, true);
    std::vector<double> t;
    for (double s : set.scores) t.push_back(std::exp(4.0 * s) - 7.0);
    CHECK(*auc(t, set.labels) == doctest::Approx(*auc(set.scores, set.labels)).epsilon(1e-12));
    CHECK(*spauc(t, set.labels) == doctest::Approx(*spauc(set.scores, set.labels)).epsilon(1e-12));
  }
}

TEST_CASE("chance-level diagonal ROC") {
  // Each score value holds one fake and one real record.
  std::vector<double> s;
  std::vector<int> y;
  for (int i = 0; i < 10; ++i) {
    s.insert(s.end(), {i / 10.0, i / 10.0});
    y.insert(y.end(), {0, 1});
  }
  CHECK(*auc(s, y) == 0.5);
  CHECK(*spauc(s, y) == doctest::Approx(0.5).epsilon(1e-12));
}
