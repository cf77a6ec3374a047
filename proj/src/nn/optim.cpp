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

#include "cdistill/nn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cdistill/error.hpp"

namespace cdistill::nn {

void adam_step(const ParamList& params, const AdamConfig& config, AdamState& state) {
  for (const auto* p : params) {
    if (p->trainable && !p->grad.all_finite()) throw NumericError("non-finite gradient in " + p->name);
  }
  if (state.m.size() != params.size()) {
    state.m.clear();
    state.v.clear();
    for (const auto* p : params) {
      state.m.emplace_back(p->value.rows(), p->value.cols());
      state.v.emplace_back(p->value.rows(), p->value.cols());
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(config.beta1, t);
  const double bc2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    ParamTensor& p = *params[i];
    if (!p.trainable) continue;
    Matrix& m = state.m[i];
    Matrix& v = state.v[i];
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double g = p.grad[j];
      m[j] = config.beta1 * m[j] + (1.0 - config.beta1) * g;
      v[j] = config.beta2 * v[j] + (1.0 - config.beta2) * g * g;
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      p.value[j] -= config.lr * mhat / (std::sqrt(vhat) + config.eps);
    }
    if (!p.value.all_finite()) throw NumericError("non-finite value after update in " + p.name);
  }
}

double GradCheckReport::max_rel_error() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_rel_error);
  return m;
}

std::string GradCheckReport::to_string() const {
  std::ostringstream os;
  os.precision(3);
  for (const auto& e : entries) {
    os << (e.trainable ? "  " : "* ") << e.name << " n=" << e.count << " max_rel_err=" << std::scientific
       << e.max_rel_error << " max|grad|=" << e.max_abs_grad << std::defaultfloat << '\n';
  }
  os << (passed ? "PASS" : "FAIL") << " (tol " << tolerance << ", max " << std::scientific << max_rel_error()
     << ")\n";
  return os.str();
}

GradCheckReport grad_check(const LossBuilder& build_loss, const ParamList& params, double h, double tol) {
  zero_grads(params);
  {
    Graph g;
    g.backward(build_loss(g));
  }
  const auto eval = [&] {
    Graph g(GradMode::kDisabled);
    return g.value(build_loss(g))[0];
  };

  GradCheckReport report;
  report.tolerance = tol;
  report.passed = true;
  for (auto* p : params) {
    GradCheckEntry e{p->name, p->value.size(), p->trainable, 0.0, 0.0};
    for (std::size_t j = 0; j < p->value.size(); ++j) {
      const double analytic = p->grad[j];
      e.max_abs_grad = std::max(e.max_abs_grad, std::abs(analytic));
      if (!p->trainable) continue;
      const double saved = p->value[j];
      p->value[j] = saved + h;
      const double up = eval();
      p->value[j] = saved - h;
      const double down = eval();
      p->value[j] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      e.max_rel_error = std::max(e.max_rel_error, std::abs(analytic - numeric) / denom);
    }
    if (!(e.max_rel_error <= tol) || (!p->trainable && e.max_abs_grad != 0.0)) report.passed = false;
    report.entries.push_back(std::move(e));
  }
  zero_grads(params);
  return report;
}

}  // namespace cdistill::nn
