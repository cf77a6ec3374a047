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

#include "cdistill/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdistill/error.hpp"

namespace cdistill::nn::ops {
namespace {

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
  throw NumericError(std::string(op) + ": incompatible shapes " + shape_string(a) + " and " + shape_string(b));
}

// C += A * B
void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aip * b(p, j);
    }
  }
}

// C += A^T * B
void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t i = 0; i < m; ++i) {
      const double api = a(p, i);
      if (api == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += api * b(p, j);
    }
  }
}

// C += A * B^T
void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a(i, p) * b(j, p);
      c(i, j) += s;
    }
  }
}

bool any_grad(const Graph& g, Var a) { return g.requires_grad(a); }
bool any_grad(const Graph& g, Var a, Var b) { return g.requires_grad(a) || g.requires_grad(b); }

void require_same(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error(op, a, b);
}

void require_scalar(const char* op, const Matrix& s) {
  if (s.rows() != 1 || s.cols() != 1) throw NumericError(std::string(op) + ": expected 1x1, got " + shape_string(s));
}

}  // namespace

Var matmul(Graph& g, Var a, Var b) {
  const Matrix& A = g.value(a);
  const Matrix& B = g.value(b);
  if (A.cols() != B.rows()) shape_error("matmul", A, B);
  Matrix out(A.rows(), B.cols());
  gemm_nn(A, B, out);
  return g.record(std::move(out), any_grad(g, a, b), [a, b](Graph& gr, const Matrix& u) {
    if (gr.requires_grad(a)) gemm_nt(u, gr.value(b), gr.grad_of(a));
    if (gr.requires_grad(b)) gemm_tn(gr.value(a), u, gr.grad_of(b));
  });
}

Var matmul_tn(Graph& g, Var a, Var b) {
  const Matrix& A = g.value(a);
  const Matrix& B = g.value(b);
  if (A.rows() != B.rows()) shape_error("matmul_tn", A, B);
  Matrix out(A.cols(), B.cols());
  gemm_tn(A, B, out);
  return g.record(std::move(out), any_grad(g, a, b), [a, b](Graph& gr, const Matrix& u) {
    if (gr.requires_grad(a)) gemm_nt(gr.value(b), u, gr.grad_of(a));
    if (gr.requires_grad(b)) gemm_nn(gr.value(a), u, gr.grad_of(b));
  });
}

Var matmul_nt(Graph& g, Var a, Var b) {
  const Matrix& A = g.value(a);
  const Matrix& B = g.value(b);
  if (A.cols() != B.cols()) shape_error("matmul_nt", A, B);
  Matrix out(A.rows(), B.rows());
  gemm_nt(A, B, out);
  return g.record(std::move(out), any_grad(g, a, b), [a, b](Graph& gr, const Matrix& u) {
    if (gr.requires_grad(a)) gemm_nn(u, gr.value(b), gr.grad_of(a));
    if (gr.requires_grad(b)) gemm_tn(u, gr.value(a), gr.grad_of(b));
  });
}

Var add(Graph& g, Var a, Var b) {
  const Matrix& A = g.value(a);
  const Matrix& B = g.value(b);
  require_same("add", A, B);
  Matrix out = A;
  out += B;
  return g.record(std::move(out), any_grad(g, a, b), [a, b](Graph& gr, const Matrix& u) {
    if (gr.requires_grad(a)) gr.grad_of(a) += u;
    if (gr.requires_grad(b)) gr.grad_of(b) += u;
  });
}

Var sub(Graph& g, Var a, Var b) {
  const Matrix& A = g.value(a);
  const Matrix& B = g.value(b);
  require_same("sub", A, B);
  Matrix out = A;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= B[i];
  return g.record(std::move(out), any_grad(g, a, b), [a, b](Graph& gr, const Matrix& u) {
    if (gr.requires_grad(a)) gr.grad_of(a) += u;
    if (gr.requires_grad(b)) {
      Matrix& gb = gr.grad_of(b);
      for (std::size_t i = 0; i < u.size(); ++i) gb[i] -= u[i];
    }
  });
}

Var mul(Graph& g, Var a, Var b) {
  const Matrix& A = g.value(a);
  const Matrix& B = g.value(b);
  require_same("mul", A, B);
  Matrix out = A;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= B[i];
  return g.record(std::move(out), any_grad(g, a, b), [a, b](Graph& gr, const Matrix& u) {
    if (gr.requires_grad(a)) {
      Matrix& ga = gr.grad_of(a);
      const Matrix& B = gr.value(b);
      for (std::size_t i = 0; i < u.size(); ++i) ga[i] += u[i] * B[i];
    }
    if (gr.requires_grad(b)) {
      Matrix& gb = gr.grad_of(b);
      const Matrix& A = gr.value(a);
      for (std::size_t i = 0; i < u.size(); ++i) gb[i] += u[i] * A[i];
    }
  });
}

Var add_bias(Graph& g, Var x, Var bias) {
  const Matrix& X = g.value(x);
  const Matrix& B = g.value(bias);
  if (B.cols() != 1 || B.rows() != X.rows()) shape_error("add_bias", X, B);
  Matrix out = X;
  for (std::size_t r = 0; r < X.rows(); ++r) {
    for (std::size_t c = 0; c < X.cols(); ++c) out(r, c) += B[r];
  }
  return g.record(std::move(out), any_grad(g, x, bias), [x, bias](Graph& gr, const Matrix& u) {
    if (gr.requires_grad(x)) gr.grad_of(x) += u;
    if (gr.requires_grad(bias)) {
      Matrix& gb = gr.grad_of(bias);
      for (std::size_t r = 0; r < u.rows(); ++r) {
        for (std::size_t c = 0; c < u.cols(); ++c) gb[r] += u(r, c);
      }
    }
  });
}

Var scale(Graph& g, Var x, Var s) {
  const Matrix& X = g.value(x);
  require_scalar("scale", g.value(s));
  const double k = g.value(s)[0];
  Matrix out = X;
  for (double& v : out.data()) v *= k;
  return g.record(std::move(out), any_grad(g, x, s), [x, s](Graph& gr, const Matrix& u) {
    const double k = gr.value(s)[0];
    if (gr.requires_grad(x)) {
      Matrix& gx = gr.grad_of(x);
      for (std::size_t i = 0; i < u.size(); ++i) gx[i] += k * u[i];
    }
    if (gr.requires_grad(s)) {
      const Matrix& X = gr.value(x);
      double acc = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * X[i];
      gr.grad_of(s)[0] += acc;
    }
  });
}

Var scale(Graph& g, Var x, double k) {
  Matrix out = g.value(x);
  for (double& v : out.data()) v *= k;
  return g.record(std::move(out), any_grad(g, x), [x, k](Graph& gr, const Matrix& u) {
    Matrix& gx = gr.grad_of(x);
    for (std::size_t i = 0; i < u.size(); ++i) gx[i] += k * u[i];
  });
}

Var tanh(Graph& g, Var x) {
  Matrix out = g.value(x);
  for (double& v : out.data()) v = std::tanh(v);
  const Var y{static_cast<std::uint32_t>(g.size())};
  return g.record(std::move(out), any_grad(g, x), [x, y](Graph& gr, const Matrix& u) {
    Matrix& gx = gr.grad_of(x);
    const Matrix& Y = gr.value(y);
    for (std::size_t i = 0; i < u.size(); ++i) gx[i] += u[i] * (1.0 - Y[i] * Y[i]);
  });
}

Var sigmoid(Graph& g, Var x) {
  Matrix out = g.value(x);
  for (double& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
  const Var y{static_cast<std::uint32_t>(g.size())};
  return g.record(std::move(out), any_grad(g, x), [x, y](Graph& gr, const Matrix& u) {
    Matrix& gx = gr.grad_of(x);
    const Matrix& Y = gr.value(y);
    for (std::size_t i = 0; i < u.size(); ++i) gx[i] += u[i] * Y[i] * (1.0 - Y[i]);
  });
}

std::vector<double> masked_softmax_values(std::span<const double> scores, const std::vector<bool>& mask) {
  if (mask.size() != scores.size()) {
    throw NumericError("masked_softmax: mask length " + std::to_string(mask.size()) +
                       " does not match " + std::to_string(scores.size()) + " scores");
  }
  double mx = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!mask[i]) continue;
    any = true;
    mx = std::max(mx, scores[i]);
  }
  if (!any) throw NumericError("masked_softmax: mask has no true entries");
  std::vector<double> out(scores.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!mask[i]) continue;
    out[i] = std::exp(scores[i] - mx);
    z += out[i];
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask[i]) out[i] /= z;
  }
  return out;
}

Var masked_softmax(Graph& g, Var scores, const std::vector<bool>& mask) {
  const Matrix& S = g.value(scores);
  if (S.rows() != 1) throw NumericError("masked_softmax: expected a 1xL row, got " + shape_string(S));
  Matrix out = Matrix::row(masked_softmax_values(S.data(), mask));
  const Var y{static_cast<std::uint32_t>(g.size())};
  return g.record(std::move(out), any_grad(g, scores), [scores, y, mask](Graph& gr, const Matrix& u) {
    const Matrix& Y = gr.value(y);
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (mask[i]) dot += Y[i] * u[i];
    }
    Matrix& gs = gr.grad_of(scores);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (mask[i]) gs[i] += Y[i] * (u[i] - dot);
    }
  });
}

Var softmax(Graph& g, Var x) {
  const Matrix& X = g.value(x);
  const std::vector<bool> mask(X.size(), true);
  Matrix out(X.rows(), X.cols());
  const auto p = masked_softmax_values(X.data(), mask);
  std::copy(p.begin(), p.end(), out.data().begin());
  const Var y{static_cast<std::uint32_t>(g.size())};
  return g.record(std::move(out), any_grad(g, x), [x, y](Graph& gr, const Matrix& u) {
    const Matrix& Y = gr.value(y);
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += Y[i] * u[i];
    Matrix& gx = gr.grad_of(x);
    for (std::size_t i = 0; i < u.size(); ++i) gx[i] += Y[i] * (u[i] - dot);
  });
}

Var element(Graph& g, Var x, std::size_t index) {
  const Matrix& X = g.value(x);
  if (index >= X.size()) throw NumericError("element: index out of range for " + shape_string(X));
  Matrix out(1, 1, X[index]);
  return g.record(std::move(out), any_grad(g, x),
                  [x, index](Graph& gr, const Matrix& u) { gr.grad_of(x)[index] += u[0]; });
}

Var sum(Graph& g, std::span<const Var> scalars) {
  double total = 0.0;
  bool rg = false;
  for (const Var v : scalars) {
    require_scalar("sum", g.value(v));
    total += g.value(v)[0];
    rg = rg || g.requires_grad(v);
  }
  std::vector<Var> inputs(scalars.begin(), scalars.end());
  return g.record(Matrix(1, 1, total), rg, [inputs](Graph& gr, const Matrix& u) {
    for (const Var v : inputs) {
      if (gr.requires_grad(v)) gr.grad_of(v)[0] += u[0];
    }
  });
}

Var mse(Graph& g, Var a, Var b) {
  return masked_mse(g, a, b, std::vector<bool>(g.value(a).size(), true));
}

Var masked_mse(Graph& g, Var a, Var b, const std::vector<bool>& mask) {
  const Matrix& A = g.value(a);
  const Matrix& B = g.value(b);
  require_same("mse", A, B);
  if (mask.size() != A.size()) throw NumericError("masked_mse: mask length does not match inputs");
  const auto n = static_cast<double>(std::count(mask.begin(), mask.end(), true));
  if (n == 0) throw NumericError("masked_mse: mask has no true entries");
  double acc = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!mask[i]) continue;
    const double d = A[i] - B[i];
    acc += d * d;
  }
  return g.record(Matrix(1, 1, acc / n), any_grad(g, a, b), [a, b, mask, n](Graph& gr, const Matrix& u) {
    const Matrix& A = gr.value(a);
    const Matrix& B = gr.value(b);
    const double k = 2.0 * u[0] / n;
    if (gr.requires_grad(a)) {
      Matrix& ga = gr.grad_of(a);
      for (std::size_t i = 0; i < A.size(); ++i) {
        if (mask[i]) ga[i] += k * (A[i] - B[i]);
      }
    }
    if (gr.requires_grad(b)) {
      Matrix& gb = gr.grad_of(b);
      for (std::size_t i = 0; i < A.size(); ++i) {
        if (mask[i]) gb[i] -= k * (A[i] - B[i]);
      }
    }
  });
}

Var binary_cross_entropy(Graph& g, Var prob, double label) {
  const Matrix& P = g.value(prob);
  require_scalar("binary_cross_entropy", P);
  const double raw = P[0];
  const double p = std::clamp(raw, kProbClamp, 1.0 - kProbClamp);
  const double loss = -label * std::log(p) - (1.0 - label) * std::log(1.0 - p);
  return g.record(Matrix(1, 1, loss), any_grad(g, prob), [prob, label, raw, p](Graph& gr, const Matrix& u) {
    if (raw < kProbClamp || raw > 1.0 - kProbClamp) return;  // clamped: flat
    gr.grad_of(prob)[0] += u[0] * (-label / p + (1.0 - label) / (1.0 - p));
  });
}

Var gather_rows_as_columns(Graph& g, Var table, std::span<const std::size_t> ids) {
  const Matrix& T = g.value(table);
  const std::size_t d = T.cols();
  Matrix out(d, ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    if (ids[j] >= T.rows()) throw NumericError("gather: index " + std::to_string(ids[j]) + " out of range");
    for (std::size_t r = 0; r < d; ++r) out(r, j) = T(ids[j], r);
  }
  std::vector<std::size_t> idx(ids.begin(), ids.end());
  return g.record(std::move(out), any_grad(g, table), [table, idx = std::move(idx)](Graph& gr, const Matrix& u) {
    Matrix& gt = gr.grad_of(table);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      for (std::size_t r = 0; r < u.rows(); ++r) gt(idx[j], r) += u(r, j);
    }
  });
}

}  // namespace cdistill::nn::ops
