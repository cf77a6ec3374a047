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

// Independent reference implementations used only by tests. They share no
// code with the library and favour obviousness over speed.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major, m[r][c]

inline Mat matmul(const Mat& a, const Mat& b) {
  Mat out(a.size(), Vec(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Mat transpose(const Mat& a) {
  Mat out(a[0].size(), Vec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
  return out;
}

inline Mat map_tanh(Mat a) {
  for (auto& r : a)
    for (auto& v : r) v = std::tanh(v);
  return a;
}

inline Mat add(Mat a, const Mat& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
  return a;
}

inline Vec softmax(const Vec& s, const std::vector<bool>& mask) {
  double mx = -INFINITY;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (mask[i]) mx = std::max(mx, s[i]);
  Vec e(s.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!mask[i]) continue;
    e[i] = std::exp(s[i] - mx);
    z += e[i];
  }
  for (auto& v : e) v /= z;
  return e;
}

inline Vec softmax(const Vec& s) { return softmax(s, std::vector<bool>(s.size(), true)); }

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// tokens: d x L (rows are feature dims); returns sum_i w_i * column_i.
inline Vec weighted_columns(const Mat& tokens, const Vec& w) {
  Vec out(tokens.size(), 0.0);
  for (std::size_t r = 0; r < tokens.size(); ++r)
    for (std::size_t c = 0; c < w.size(); ++c) out[r] += w[c] * tokens[r][c];
  return out;
}

// One dense layer y = W x + b.
inline Vec affine(const Mat& w, const Vec& b, const Vec& x) {
  Vec out(b);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) out[i] += w[i][j] * x[j];
  return out;
}

inline double mean_sq_diff(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

// Scalar Adam, written out from the update equations.
struct ScalarAdam {
  double lr, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double m = 0.0, v = 0.0;
  int t = 0;
  double step(double x, double g) {
    ++t;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t));
    const double vh = v / (1 - std::pow(b2, t));
    return x - lr * mh / (std::sqrt(vh) + eps);
  }
};

// ROC from every threshold in the sorted set of scores plus +inf; a
// record is predicted positive when score >= threshold.
struct RocPt {
  double fpr, tpr;
};

inline std::vector<RocPt> brute_roc(const Vec& s, const std::vector<int>& y) {
  Vec th(s);
  std::sort(th.begin(), th.end());
  th.erase(std::unique(th.begin(), th.end()), th.end());
  th.push_back(INFINITY);
  std::reverse(th.begin(), th.end());
  double P = 0, N = 0;
  for (int v : y) (v ? P : N) += 1;
  std::vector<RocPt> pts;
  for (double t : th) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] >= t) (y[i] ? tp : fp) += 1;
    pts.push_back({fp / N, tp / P});
  }
  return pts;
}

// Trapezoid area of the brute-force ROC over [0, fmax].
inline double brute_partial_area(const Vec& s, const std::vector<int>& y, double fmax) {
  const auto pts = brute_roc(s, y);
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double x0 = pts[i - 1].fpr, y0 = pts[i - 1].tpr, x1 = pts[i].fpr, y1 = pts[i].tpr;
    if (x0 >= fmax) break;
    if (x1 > fmax) {
      y1 = y0 + (y1 - y0) * (fmax - x0) / (x1 - x0);
      x1 = fmax;
    }
    area += (x1 - x0) * (y0 + y1) / 2;
  }
  return area;
}

// Probability that a random positive outranks a random negative, ties 1/2,
// by enumerating every pair.
inline double pairwise_auc(const Vec& s, const std::vector<int>& y) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!(y[i] == 1 && y[j] == 0)) continue;
      den += 1;
      num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  return num / den;
}

inline double brute_spauc(const Vec& s, const std::vector<int>& y, double f) {
  const double a = brute_partial_area(s, y, f);
  return 0.5 * (1 + (a - f * f / 2) / (f - f * f / 2));
}

}  // namespace oracle
