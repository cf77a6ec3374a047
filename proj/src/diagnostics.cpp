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

#include "cdistill/diagnostics.hpp"

#include "cdistill/bundle.hpp"
#include "cdistill/error.hpp"
#include "cdistill/nn/ops.hpp"
#include "cdistill/rng.hpp"

namespace cdistill::diagnostics {

namespace ops = nn::ops;
using nn::Graph;
using nn::Var;

GradCheckSuite run_grad_checks(const std::vector<corpus::NewsRecord>& all, const GradCheckOptions& o) {
  if (all.size() < o.batch || o.batch == 0) {
    throw DataError("grad check needs " + std::to_string(o.batch) + " records, got " + std::to_string(all.size()));
  }
  const std::vector<corpus::NewsRecord> records(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(o.batch));
  TeacherBundle tb(o.dims, textenc::Vocabulary::build(records, 1), "");
  nn::init_params(tb.encoder.params(), derive_seed(o.seed, "gradcheck.teacher"));
  tb.model.init(derive_seed(o.seed, "gradcheck.teacher"));
  // Move the aggregator off its symmetric start so its gradient is generic.
  for (std::size_t i = 0; i < tb.model.aggregator_raw.value.size(); ++i) {
    tb.model.aggregator_raw.value[i] = 0.3 * static_cast<double>(i) - 0.2;
  }
  const auto examples = prepare_examples(records, tb.vocab, tb.resources, tb.dims);

  GradCheckSuite suite;
  const nn::LossBuilder teacher_loss = [&](Graph& g) {
    std::vector<Var> terms;
    for (const auto& ex : examples) {
      terms.push_back(teacher::loss(g, teacher::forward(g, tb.model, tb.encoder, ex).prob, ex.label));
    }
    return ops::scale(g, ops::sum(g, terms), 1.0 / static_cast<double>(terms.size()));
  };
  suite.teacher = nn::grad_check(teacher_loss, tb.params(), o.h, o.tolerance);

  StudentBundle sb(tb, o.student, o.alpha);
  sb.model.init(derive_seed(o.seed, "gradcheck.student"));
  for (std::size_t i = 0; i < sb.model.aggregator_raw.value.size(); ++i) {
    sb.model.aggregator_raw.value[i] = 0.25 - 0.4 * static_cast<double>(i);
  }
  std::vector<nn::Matrix> content;
  std::vector<student::TeacherTargets> targets;
  for (const auto& r : records) content.push_back(sb.encode_content(r));
  for (const auto& t : tb.traces(records)) targets.push_back(student::targets_from(t));

  nn::ParamList teacher_params = tb.params();
  nn::set_trainable(teacher_params, false);
  const nn::LossBuilder student_loss = [&](Graph& g) {
    std::vector<Var> terms;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const std::vector<bool> mask(content[i].cols(), true);
      const auto n = student::forward(g, sb.model, g.constant(content[i]), mask);
      terms.push_back(
          student::total_loss(g, n, mask, &targets[i], records[i].label, o.alpha, sb.model.config).total);
    }
    return ops::scale(g, ops::sum(g, terms), 1.0 / static_cast<double>(terms.size()));
  };
  nn::ParamList probed = sb.params();
  probed.insert(probed.end(), teacher_params.begin(), teacher_params.end());
  suite.student = nn::grad_check(student_loss, probed, o.h, o.tolerance);
  nn::set_trainable(teacher_params, true);
  return suite;
}

}  // namespace cdistill::diagnostics
