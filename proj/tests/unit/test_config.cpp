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
#include "cdistill/error.hpp"
#include "cdistill/nn/checkpoint.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cdistill;

TEST_CASE("experiment config round-trip") {
  ExperimentConfig c;
  c.seed = 7;
  c.split_dir = "data/split";
  c.model.d = 12;
  c.teacher.lr = 3e-5;
  c.student.alpha = 0.6;
  c.student.model.mode = student::DistillMode::kResponse;
  c.student.model.ablation = student::Ablation::kWithoutEmotional;
  c.train_comment_proportion = 0.25;
  const auto parsed = ExperimentConfig::from_json(c.to_json());
  CHECK(parsed == c);
  CHECK(parsed.hash() == c.hash());
  CHECK(ExperimentConfig{}.hash() != c.hash());

  testutil::TempDir dir;
  c.save(dir / "c.json");
  CHECK(ExperimentConfig::load(dir / "c.json") == c);
}

TEST_CASE("partial configs keep defaults") {
  const auto c = ExperimentConfig::from_json(R"({"seed": 3, "student": {"alpha": 0.2}})");
  CHECK(c.seed == 3);
  CHECK(c.student.alpha == 0.2);
  CHECK(c.teacher == TrainOptions{});
  CHECK(c.model == ModelDims{});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"sede": 3})"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"student": {"mode": "magic"}})"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"student": {"alpha": -1}})"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"teacher": {"lr": 0}})"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::from_json("{oops"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.json"), Error);
}

TEST_CASE("synthetic spec json round-trip") {
  corpus::SyntheticSpec s;
  s.num_records = 77;
  s.p_echo = 0.9;
  s.comment_len = {2, 3};
  s.marker_leak = 0.0;
  const auto back = corpus::SyntheticSpec(synthetic_spec_from_json(synthetic_spec_to_json(s)));
  CHECK(synthetic_spec_to_json(back) == synthetic_spec_to_json(s));
  CHECK(back.num_records == 77);
  CHECK(back.comment_len.max == 3);
  CHECK_THROWS_AS(synthetic_spec_from_json(R"({"bogus": 1})"), UsageError);
}

TEST_CASE("checkpoint round-trip and corruption") {
  nn::ParamTensor a("a", 2, 3), b("b", 1, 1);
  for (std::size_t i = 0; i < a.value.size(); ++i) a.value[i] = 0.1 * i - 0.25;
  b.value[0] = 1e-300;
  nn::Checkpoint ck;
  ck.metadata["kind"] = "teacher";
  ck.metadata["note"] = "tab\there";
  ck.add_params({&a, &b});
  const std::string bytes = nn::encode_checkpoint(ck);
  const auto back = nn::decode_checkpoint(bytes);
  CHECK(nn::encode_checkpoint(back) == bytes);
  CHECK(back == ck);
  CHECK(back.meta("kind") == "teacher");
  CHECK_THROWS_AS(back.meta("absent"), DataError);

  nn::ParamTensor a2("a", 2, 3), b2("b", 1, 1);
  back.restore({&a2, &b2});
  CHECK(a2.value == a.value);
  CHECK(b2.value[0] == 1e-300);

  nn::ParamTensor wrong("a", 3, 2);
  CHECK_THROWS_AS(back.restore({&wrong}), DataError);
  nn::ParamTensor missing("zzz", 1, 1);
  CHECK_THROWS_AS(back.restore({&missing}), DataError);

  CHECK_THROWS_AS(nn::decode_checkpoint("NOTACKPT"), DataError);
  CHECK_THROWS_AS(nn::decode_checkpoint(bytes.substr(0, bytes.size() - 3)), DataError);
  std::string flipped = bytes;
  flipped[flipped.size() / 2] ^= 0x5a;
  CHECK_THROWS_AS(nn::decode_checkpoint(flipped), DataError);
}
