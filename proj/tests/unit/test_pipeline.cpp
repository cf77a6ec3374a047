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
#include <sstream>

#include "cdistill/error.hpp"
#include "cdistill/evalkit.hpp"
#include "cdistill/nn/checkpoint.hpp"
#include "cdistill/trainer.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cdistill;

namespace {

const corpus::CorpusSplit& small_split() {
  static const corpus::CorpusSplit split = [] {
    corpus::SyntheticSpec spec;
    spec.num_records = 120;
    spec.content_len = {6, 10};
    spec.num_comments = {0, 4};
    return corpus::chronological_split(corpus::generate_synthetic_corpus(spec, 5));
  }();
  return split;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.seed = 9;
  c.model = ModelDims{.d = 8, .k = 4, .max_content_len = 16, .max_comment_len = 32, .classifier_hidden = 4};
  c.teacher.max_epochs = 3;
  c.student.train.max_epochs = 3;
  return c;
}

std::vector<std::vector<double>> snapshot(const nn::ParamList& params) {
  std::vector<std::vector<double>> out;
  for (const auto* p : params) out.push_back(p->value.to_vector());
  return out;
}

std::string bytes_of(TeacherBundle& b) { return nn::encode_checkpoint(b.to_checkpoint()); }
std::string bytes_of(StudentBundle& b) { return nn::encode_checkpoint(b.to_checkpoint()); }

}  // namespace

TEST_CASE("teacher training is deterministic") {
  auto a = trainer::train_teacher(small_split(), small_config());
  auto b = trainer::train_teacher(small_split(), small_config());
  CHECK(a.history.to_csv() == b.history.to_csv());
  CHECK(a.history.step_losses == b.history.step_losses);
  CHECK(bytes_of(a.bundle) == bytes_of(b.bundle));
  CHECK(a.history.to_csv().rfind("epoch,train_loss,val_macF1,val_acc,val_auc\n", 0) == 0);

  auto other = small_config();
  other.seed = 10;
  CHECK(trainer::train_teacher(small_split(), other).history.step_losses != a.history.step_losses);
}

TEST_CASE("early stopping keeps the best validation epoch") {
  auto cfg = small_config();
  cfg.teacher.max_epochs = 6;
  cfg.teacher.patience = 2;
  std::vector<trainer::EpochStats> seen;
  const auto run = trainer::train_teacher(small_split(), cfg, [&](const trainer::EpochStats& s) { seen.push_back(s); });
  REQUIRE(!seen.empty());
  CHECK(seen.size() == run.history.epochs.size());
  for (const auto& e : run.history.epochs) CHECK(run.history.best_val_macro_f1 >= e.val_macro_f1);
  CHECK(run.history.epochs[run.history.best_epoch - 1].val_macro_f1 == run.history.best_val_macro_f1);
}

TEST_CASE("student training leaves the teacher untouched") {
  auto teacher = trainer::train_teacher(small_split(), small_config());
  const auto before = snapshot(teacher.bundle.params());
  const auto bytes = bytes_of(teacher.bundle);
  const auto hash = trainer::checkpoint_hash(teacher.bundle);
  auto run = trainer::train_student(small_split(), teacher.bundle, hash, small_config());
  CHECK(snapshot(teacher.bundle.params()) == before);
  CHECK(bytes_of(teacher.bundle) == bytes);
  CHECK(run.bundle.teacher_hash == hash);
  for (const auto* p : run.bundle.encoder.params()) CHECK_FALSE(p->trainable);
  // The frozen encoder is the teacher's.
  CHECK(run.bundle.encoder.embedding.value == teacher.bundle.encoder.embedding.value);
}

TEST_CASE("alpha 0 student ignores comments and the preference scorer") {
  auto teacher = trainer::train_teacher(small_split(), small_config());
  const auto hash = trainer::checkpoint_hash(teacher.bundle);
  auto cfg = small_config();
  cfg.student.alpha = 0.0;
  auto plain = trainer::train_student(small_split(), teacher.bundle, hash, cfg);

  corpus::CorpusSplit stripped = small_split();
  stripped.train = corpus::strip_comments(stripped.train);
  stripped.val = corpus::strip_comments(stripped.val);
  auto no_comments = trainer::train_student(stripped, teacher.bundle, hash, cfg);
  CHECK(no_comments.history.step_losses == plain.history.step_losses);
  CHECK(bytes_of(no_comments.bundle) == bytes_of(plain.bundle));

  for (auto kind : {student::Ablation::kWithoutSemantic, student::Ablation::kWithoutEmotional,
                    student::Ablation::kWithoutOverall}) {
    auto vcfg = cfg;
    vcfg.student.model.ablation = kind;
    const auto variant = trainer::train_student(small_split(), teacher.bundle, hash, vcfg);
    CHECK(variant.history.step_losses == plain.history.step_losses);
  }
}

TEST_CASE("bundles round-trip through files") {
  testutil::TempDir dir;
  auto teacher = trainer::train_teacher(small_split(), small_config());
  teacher.bundle.save(dir / "t.ckpt");
  auto loaded = TeacherBundle::load(dir / "t.ckpt");
  CHECK(loaded.predict(small_split().test) == teacher.bundle.predict(small_split().test));
  CHECK(nn::file_hash(dir / "t.ckpt") == trainer::checkpoint_hash(teacher.bundle));

  auto run = trainer::train_student(small_split(), dir / "t.ckpt", small_config());
  run.bundle.save(dir / "s.ckpt");
  auto student = StudentBundle::load(dir / "s.ckpt", dir / "t.ckpt");
  CHECK(student.predict(small_split().test) == run.bundle.predict(small_split().test));
  CHECK(student.alpha == 0.4);
  CHECK(checkpoint_kind(nn::load_checkpoint(dir / "s.ckpt")) == kKindStudent);

  // A different teacher file no longer matches the recorded hash.
  auto cfg = small_config();
  cfg.seed = 77;
  auto other = trainer::train_teacher(small_split(), cfg);
  other.bundle.save(dir / "other.ckpt");
  CHECK_THROWS_AS(StudentBundle::load(dir / "s.ckpt", dir / "other.ckpt"), DataError);
  CHECK_THROWS_AS(TeacherBundle::load(dir / "s.ckpt"), DataError);
  CHECK_THROWS_AS(StudentBundle::load(dir / "t.ckpt"), DataError);
}

TEST_CASE("comment budget applies to training records only") {
  const auto train = small_split().train;
  for (std::size_t i = 0; i < train.size(); ++i) {
    std::vector<corpus::Comment> prev;
    for (double p : evalkit::kDefaultProportions) {
      const auto kept = corpus::sample_comments(train[i], p).comments;
      CHECK(kept.size() >= prev.size());
      CHECK(std::equal(prev.begin(), prev.end(), kept.begin()));
      prev = kept;
    }
  }
  auto full = trainer::train_with_comment_budget(small_split(), 1.0, small_config());
  auto base = trainer::train_teacher(small_split(), small_config());
  CHECK(full.teacher.history.step_losses == base.history.step_losses);
  auto quarter = trainer::train_with_comment_budget(small_split(), 0.25, small_config());
  CHECK(quarter.proportion == 0.25);
  CHECK(quarter.teacher.history.step_losses != base.history.step_losses);
}

TEST_CASE("comment proportion sweep layout") {
  auto teacher = trainer::train_teacher(small_split(), small_config());
  auto student = trainer::train_student(small_split(), teacher.bundle, trainer::checkpoint_hash(teacher.bundle),
                                        small_config());
  const auto sweep = evalkit::comment_proportion_sweep(teacher.bundle, &student.bundle, small_split().test);
  const auto table = sweep.matrix();
  CHECK(table.columns == std::vector<std::string>{"model", "0%", "25%", "50%", "75%", "100%"});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0][0] == "student");
  CHECK(table.rows[1][0] == "teacher");
  CHECK_FALSE(table.rows[0][1].empty());
  for (std::size_t c = 2; c < 6; ++c) CHECK(table.rows[0][c].empty());
  CHECK(table.rows[1][1].empty());
  CHECK(sweep.find("teacher", 1.0)->macro_f1 == evalkit::evaluate(teacher.bundle, small_split().test).macro_f1);
  CHECK_FALSE(sweep.find("student", 0.5).has_value());
  CHECK(sweep.long_form().rows.size() == 5);
}

TEST_CASE("tables render") {
  evalkit::Table t{{"a", "bb"}, {{"1", "x,y"}, {"22", ""}}};
  CHECK(t.to_csv() == "a,bb\n1,\"x,y\"\n22,\n");
  std::istringstream text(t.to_text());
  std::string line;
  std::getline(text, line);
  CHECK(line.find("bb") != std::string::npos);
  CHECK(t.to_json().find("\"bb\": \"x,y\"") != std::string::npos);
  CHECK(evalkit::format_number(0.123456789) == "0.123457");
}
