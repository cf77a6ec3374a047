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

#include "cdistill/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cdistill/error.hpp"
#include "cdistill/metrics.hpp"
#include "cdistill/nn/ops.hpp"
#include "cdistill/nn/optim.hpp"
#include "cdistill/rng.hpp"

namespace cdistill::trainer {

namespace ops = nn::ops;
using nn::Graph;
using nn::Var;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double mean_bce(const std::vector<double>& probs, const std::vector<int>& labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) total += teacher::loss(probs[i], labels[i]);
  return total / static_cast<double>(probs.size());
}

using BatchLoss = std::function<Var(Graph&, std::span<const std::size_t>)>;
using Scorer = std::function<std::vector<double>()>;

History fit(const nn::ParamList& params, std::size_t n_train, const BatchLoss& batch_loss, const Scorer& val_scores,
            const std::vector<int>& val_labels, const TrainOptions& opt, std::uint64_t shuffle_seed,
            const std::string& tag, const EpochCallback& on_epoch) {
  if (n_train == 0) throw DataError(tag + ": empty training set");
  if (val_labels.empty()) throw DataError(tag + ": empty validation set");
  nn::ParamList trainable;
  for (auto* p : params) {
    if (p->trainable) trainable.push_back(p);
  }
  nn::Adam adam(trainable, nn::AdamConfig{opt.lr});
  Rng rng(shuffle_seed);
  History h;
  std::vector<nn::Matrix> best;
  int since_best = 0;
  double best_loss = 0.0;
  std::vector<std::size_t> order(n_train);
  for (int epoch = 1; epoch <= opt.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t start = 0; start < n_train; start += opt.batch_size) {
      const std::size_t end = std::min(n_train, start + opt.batch_size);
      adam.zero_grad();
      Graph g;
      const Var loss = batch_loss(g, std::span<const std::size_t>(order).subspan(start, end - start));
      const double value = g.value(loss)[0];
      if (!std::isfinite(value)) {
        throw NumericError(tag + ": non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(h.step_losses.size() + 1));
      }
      g.backward(loss);
      adam.step();
      h.step_losses.push_back(value);
      total += value * static_cast<double>(end - start);
    }
    EpochStats s;
    s.epoch = epoch;
    s.train_loss = total / static_cast<double>(n_train);
    const auto scores = val_scores();
    const auto report = metrics::evaluate(scores, val_labels);
    s.val_macro_f1 = report.macro_f1;
    s.val_acc = report.acc;
    s.val_auc = report.auc;
    s.val_loss = mean_bce(scores, val_labels);
    h.epochs.push_back(s);
    if (on_epoch) on_epoch(s);
    if (s.val_macro_f1 > h.best_val_macro_f1 ||
        (s.val_macro_f1 == h.best_val_macro_f1 && s.val_loss < best_loss)) {
      h.best_val_macro_f1 = s.val_macro_f1;
      best_loss = s.val_loss;
      h.best_epoch = epoch;
      best.clear();
      for (auto* p : params) best.push_back(p->value);
      since_best = 0;
    } else if (++since_best >= opt.patience) {
      break;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best[i];
  nn::zero_grads(params);
  return h;
}

Var mean(Graph& g, const std::vector<Var>& terms) {
  return ops::scale(g, ops::sum(g, terms), 1.0 / static_cast<double>(terms.size()));
}

}  // namespace

std::string History::to_csv() const {
  std::ostringstream out;
  out << "epoch,train_loss,val_macF1,val_acc,val_auc\n";
  for (const auto& e : epochs) {
    out << e.epoch << ',' << fmt(e.train_loss) << ',' << fmt(e.val_macro_f1) << ',' << fmt(e.val_acc) << ','
        << (e.val_auc ? fmt(*e.val_auc) : std::string("nan")) << '\n';
  }
  return out.str();
}

void History::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_csv();
}

TeacherRun train_teacher(const corpus::CorpusSplit& split, const ExperimentConfig& config,
                         const EpochCallback& on_epoch) {
  config.validate();
  const auto train = config.train_comment_proportion < 1.0
                         ? corpus::sample_comments(split.train, config.train_comment_proportion)
                         : split.train;
  if (train.empty()) throw DataError("train_teacher: empty training set");
  TeacherRun run{TeacherBundle(config.model, textenc::Vocabulary::build(train, config.vocab_min_count),
                               config.emotion_resources),
                 {}};
  TeacherBundle& b = run.bundle;
  b.config_hash = config.hash();
  nn::init_params(b.encoder.params(), derive_seed(config.seed, "teacher.init"));
  b.model.init(derive_seed(config.seed, "teacher.init"));

  const auto train_ex = prepare_examples(train, b.vocab, b.resources, b.dims);
  const auto val_ex = prepare_examples(split.val, b.vocab, b.resources, b.dims);

  const BatchLoss batch_loss = [&](Graph& g, std::span<const std::size_t> idx) {
    std::vector<Var> terms;
    for (std::size_t i : idx) {
      const auto n = teacher::forward(g, b.model, b.encoder, train_ex[i]);
      terms.push_back(teacher::loss(g, n.prob, train_ex[i].label));
    }
    return mean(g, terms);
  };
  const Scorer val_scores = [&] {
    std::vector<double> out;
    out.reserve(val_ex.size());
    for (const auto& ex : val_ex) out.push_back(teacher::trace(b.model, b.encoder, ex, b.dims).prob);
    return out;
  };
  run.history = fit(b.params(), train_ex.size(), batch_loss, val_scores, labels_of(split.val), config.teacher,
                    derive_seed(config.seed, "teacher.shuffle"), "train_teacher", on_epoch);
  b.extra_meta["seed"] = std::to_string(config.seed);
  b.extra_meta["best_epoch"] = std::to_string(run.history.best_epoch);
  b.extra_meta["train_comment_proportion"] = fmt(config.train_comment_proportion);
  return run;
}

std::uint64_t checkpoint_hash(TeacherBundle& bundle) {
  return fnv1a64(nn::encode_checkpoint(bundle.to_checkpoint()));
}

StudentRun train_student(const corpus::CorpusSplit& split, TeacherBundle& teacher, std::uint64_t teacher_hash,
                         const ExperimentConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  const double alpha = config.student.alpha;
  const student::StudentConfig scfg = config.student.model;
  StudentRun run{StudentBundle(teacher, scfg, alpha), {}};
  StudentBundle& b = run.bundle;
  b.teacher_hash = teacher_hash;
  b.config_hash = config.hash();
  b.model.init(derive_seed(config.seed, "student.init"));

  std::vector<nn::Matrix> train_content;
  train_content.reserve(split.train.size());
  for (const auto& r : split.train) train_content.push_back(b.encode_content(r));
  std::vector<nn::Matrix> val_content;
  val_content.reserve(split.val.size());
  for (const auto& r : split.val) val_content.push_back(b.encode_content(r));
  const auto train_labels = labels_of(split.train);

  // The teacher is frozen, so its per-record outputs are fixed for the
  // whole run and computed once.
  std::vector<student::TeacherTargets> targets;
  if (alpha > 0.0) {
    targets.reserve(split.train.size());
    for (const auto& t : teacher.traces(split.train)) targets.push_back(student::targets_from(t));
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i].content_weights.size() != train_content[i].cols()) {
        throw DataError("train_student: teacher and student content masks differ for record " + split.train[i].id);
      }
    }
  }

  const BatchLoss batch_loss = [&](Graph& g, std::span<const std::size_t> idx) {
    std::vector<Var> terms;
    for (std::size_t i : idx) {
      const std::vector<bool> mask(train_content[i].cols(), true);
      const auto n = student::forward(g, b.model, g.constant(train_content[i]), mask);
      const student::TeacherTargets* t = targets.empty() ? nullptr : &targets[i];
      terms.push_back(student::total_loss(g, n, mask, t, train_labels[i], alpha, scfg).total);
    }
    return mean(g, terms);
  };
  const Scorer val_scores = [&] {
    std::vector<double> out;
    out.reserve(val_content.size());
    for (const auto& m : val_content) out.push_back(student::trace(b.model, m, b.dims).prob);
    return out;
  };
  run.history = fit(b.params(), train_content.size(), batch_loss, val_scores, labels_of(split.val),
                    config.student.train, derive_seed(config.seed, "student.shuffle"), "train_student", on_epoch);
  b.extra_meta["seed"] = std::to_string(config.seed);
  b.extra_meta["best_epoch"] = std::to_string(run.history.best_epoch);
  return run;
}

StudentRun train_student(const corpus::CorpusSplit& split, const std::filesystem::path& teacher_checkpoint,
                         const ExperimentConfig& config, const EpochCallback& on_epoch) {
  const std::string bytes = nn::read_file_bytes(teacher_checkpoint);
  TeacherBundle teacher = TeacherBundle::from_checkpoint(nn::decode_checkpoint(bytes));
  return train_student(split, teacher, fnv1a64(bytes), config, on_epoch);
}

BudgetRun train_with_comment_budget(const corpus::CorpusSplit& split, double proportion,
                                    const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.train_comment_proportion = proportion;
  BudgetRun out{proportion, train_teacher(split, c), {}};
  const std::uint64_t h = checkpoint_hash(out.teacher.bundle);
  out.student = train_student(split, out.teacher.bundle, h, c);
  return out;
}

}  // namespace cdistill::trainer
