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

#include "cdistill/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "cdistill/error.hpp"
#include "json.hpp"

namespace cdistill::metrics {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw UsageError("metrics: " + std::to_string(scores.size()) + " scores for " + std::to_string(labels.size()) +
                     " labels");
  }
  if (scores.empty()) throw DataError("metrics: no records to evaluate");
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("metrics: labels must be 0 or 1");
  }
}

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

struct RocPoint {
  double fpr;
  double tpr;
};

// Vertices of the ROC polyline, one per distinct score, from (0,0) to (1,1).
std::vector<RocPoint> roc(std::span<const double> scores, std::span<const int> labels, std::size_t pos,
                          std::size_t neg) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<RocPoint> pts{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    pts.push_back({static_cast<double>(fp) / static_cast<double>(neg), static_cast<double>(tp) / static_cast<double>(pos)});
  }
  return pts;
}

}  // namespace

Confusion confusion(std::span<const double> scores, std::span<const int> labels, double threshold) {
  check_inputs(scores, labels);
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred_fake = scores[i] >= threshold;
    if (labels[i] == 1) {
      (pred_fake ? c.tp : c.fn) += 1;
    } else {
      (pred_fake ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

double f1_fake(const Confusion& c) { return f1(c.tp, c.fp, c.fn); }
double f1_real(const Confusion& c) { return f1(c.tn, c.fn, c.fp); }

double accuracy(const Confusion& c) {
  return c.n() == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(c.n());
}

std::optional<double> auc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of average ranks of the positives.
  double rank_sum = 0.0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        rank_sum += avg_rank;
        ++pos;
      }
    }
    i = j;
  }
  const std::size_t neg = scores.size() - pos;
  if (pos == 0 || neg == 0) return std::nullopt;
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

std::optional<double> spauc(std::span<const double> scores, std::span<const int> labels, double fpr_max) {
  check_inputs(scores, labels);
  if (!(fpr_max > 0.0 && fpr_max <= 1.0)) throw UsageError("spauc: fpr_max must lie in (0, 1]");
  const std::size_t pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) return std::nullopt;
  const auto pts = roc(scores, labels, pos, neg);
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const RocPoint a = pts[i - 1];
    RocPoint b = pts[i];
    if (a.fpr >= fpr_max) break;
    if (b.fpr > fpr_max) {
      const double t = (fpr_max - a.fpr) / (b.fpr - a.fpr);
      b = {fpr_max, a.tpr + t * (b.tpr - a.tpr)};
    }
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  const double lo = fpr_max * fpr_max / 2.0;
  return 0.5 * (1.0 + (area - lo) / (fpr_max - lo));
}

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels, double threshold) {
  EvalReport r;
  r.counts = confusion(scores, labels, threshold);
  r.n = r.counts.n();
  r.acc = accuracy(r.counts);
  r.f1_fake = f1_fake(r.counts);
  r.f1_real = f1_real(r.counts);
  r.macro_f1 = (r.f1_fake + r.f1_real) / 2.0;
  r.auc = auc(scores, labels);
  r.spauc = spauc(scores, labels);
  return r;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["macF1"] = macro_f1;
  j["acc"] = acc;
  j["f1_real"] = f1_real;
  j["f1_fake"] = f1_fake;
  j["auc"] = auc ? nlohmann::ordered_json(*auc) : nlohmann::ordered_json(nullptr);
  j["spauc"] = spauc ? nlohmann::ordered_json(*spauc) : nlohmann::ordered_json(nullptr);
  j["confusion"] = {{"tp", counts.tp}, {"fp", counts.fp}, {"fn", counts.fn}, {"tn", counts.tn}};
  return j.dump(2);
}

}  // namespace cdistill::metrics
