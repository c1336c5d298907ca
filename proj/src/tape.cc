// Copyright 2026 The docgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "docgraph/tape.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "docgraph/error.h"

namespace docgraph {

const Tensor& Var::value() const {
  if (tape_ == nullptr) throw Error("use of an unbound Var");
  return tape_->value(*this);
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

const Tape::Node& Tape::node(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) throw Error("Var does not belong to this tape");
  return nodes_[v.id_];
}

Var Tape::constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::variable(Tensor value) {
  Node n;
  n.op = "variable";
  n.value = std::move(value);
  n.needs_grad = true;
  return push(std::move(n));
}

Var Tape::parameter(const Parameter& param) {
  Node n;
  n.op = "parameter";
  n.external = &param.value;
  n.param = &param;
  n.needs_grad = true;
  return push(std::move(n));
}

Var Tape::record(std::string_view op, Tensor value, std::vector<Var> inputs,
                 BackwardFn backward) {
  if (!value.all_finite()) {
    throw NumericError("non-finite value produced by " + std::string(op));
  }
  Node n;
  n.op = std::string(op);
  n.value = std::move(value);
  n.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    const Node& src = node(in);
    n.inputs.push_back(in.id_);
    n.needs_grad = n.needs_grad || src.needs_grad;
  }
  if (n.needs_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

const Tensor& Tape::value(Var v) const {
  const Node& n = node(v);
  return n.external != nullptr ? *n.external : n.value;
}

bool Tape::has_grad(Var v) const { return node(v).has_grad; }

const Tensor& Tape::grad(Var v) const {
  const Node& n = node(v);
  if (!n.has_grad) throw Error("no gradient recorded for node " + std::to_string(v.id_));
  return n.grad;
}

void Tape::backward(Var loss) {
  const Node& root = node(loss);
  const Tensor& root_value = value(loss);
  if (root_value.rows() != 1 || root_value.cols() != 1) {
    throw ShapeError("backward() needs a scalar loss, got " + root_value.shape_string());
  }
  for (Node& n : nodes_) {
    n.has_grad = false;
    n.grad = Tensor();
  }
  if (!root.needs_grad) return;

  nodes_[loss.id_].grad = Tensor(1, 1, 1.0);
  nodes_[loss.id_].has_grad = true;

  std::vector<const Tensor*> in_values;
  std::vector<Tensor*> in_grads;
  for (std::size_t id = loss.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.has_grad) continue;
    if (n.param != nullptr) {
      auto [it, inserted] = param_grads_.try_emplace(n.param, n.grad);
      if (!inserted) it->second += n.grad;
    }
    if (!n.backward) continue;
    in_values.clear();
    in_grads.clear();
    for (std::size_t input : n.inputs) {
      Node& src = nodes_[input];
      in_values.push_back(src.external != nullptr ? src.external : &src.value);
      if (src.needs_grad) {
        if (!src.has_grad) {
          const Tensor& v = *in_values.back();
          src.grad = Tensor(v.rows(), v.cols());
          src.has_grad = true;
        }
        in_grads.push_back(&src.grad);
      } else {
        in_grads.push_back(nullptr);
      }
    }
    n.backward(BackwardArgs{n.value, n.grad, in_values, in_grads});
  }
}

const Tensor* Tape::parameter_grad(const Parameter& param) const {
  auto it = param_grads_.find(&param);
  return it == param_grads_.end() ? nullptr : &it->second;
}

void Tape::accumulate_into(ParameterStore& store) const {
  for (std::size_t i = 0; i < store.size(); ++i) {
    Parameter& p = store[i];
    if (const Tensor* g = parameter_grad(p)) p.grad += *g;
  }
}

Mask::Mask(std::size_t rows, std::size_t cols, bool fill)
    : rows_(rows), cols_(cols), bits_(rows * cols, fill ? 1 : 0) {}

Mask Mask::from_adjacency(const Tensor& adjacency) {
  Mask m(adjacency.rows(), adjacency.cols(), false);
  for (std::size_t i = 0; i < adjacency.rows(); ++i) {
    for (std::size_t j = 0; j < adjacency.cols(); ++j) m.set(i, j, adjacency(i, j) > 0.0);
  }
  return m;
}

namespace {

void require_same_tape(Var a, Var b, const char* op) {
  if (&a.tape() != &b.tape()) throw Error(std::string(op) + ": operands on different tapes");
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

// out = a * b^T, accumulated.
void add_matmul_bt(const Tensor& a, const Tensor& b, Tensor& out) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
      out(i, j) += acc;
    }
  }
}

// out = a^T * b, accumulated.
void add_matmul_at(const Tensor& a, const Tensor& b, Tensor& out) {
  for (std::size_t k = 0; k < a.rows(); ++k) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      double* out_row = &out(i, 0);
      const double* b_row = b.row_span(k).data();
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
    }
  }
}

template <typename Forward, typename Derivative>
Var unary(Var a, const char* op, Forward f, Derivative df) {
  const Tensor& x = a.value();
  Tensor out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return a.tape().record(op, std::move(out), {a}, [df](const BackwardArgs& args) {
    Tensor* gx = args.input_grads[0];
    if (gx == nullptr) return;
    const Tensor& x = *args.inputs[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
      (*gx)[i] += args.output_grad[i] * df(x[i], args.output[i]);
    }
  });
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Var softmax_rows_impl(Var x, const Mask* mask) {
  const Tensor& in = x.value();
  if (mask != nullptr && (mask->rows() != in.rows() || mask->cols() != in.cols())) {
    throw ShapeError("softmax_rows: mask shape does not match " + in.shape_string());
  }
  Tensor out(in.rows(), in.cols());
  for (std::size_t i = 0; i < in.rows(); ++i) {
    double peak = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t j = 0; j < in.cols(); ++j) {
      if (mask != nullptr && !(*mask)(i, j)) continue;
      peak = std::max(peak, in(i, j));
      any = true;
    }
    if (!any) throw NumericError("softmax_rows: row " + std::to_string(i) + " is fully masked");
    double total = 0.0;
    for (std::size_t j = 0; j < in.cols(); ++j) {
      if (mask != nullptr && !(*mask)(i, j)) continue;
      out(i, j) = std::exp(in(i, j) - peak);
      total += out(i, j);
    }
    for (std::size_t j = 0; j < in.cols(); ++j) out(i, j) /= total;
  }
  return x.tape().record("softmax_rows", std::move(out), {x}, [](const BackwardArgs& args) {
    Tensor* gx = args.input_grads[0];
    if (gx == nullptr) return;
    const Tensor& y = args.output;
    const Tensor& gy = args.output_grad;
    for (std::size_t i = 0; i < y.rows(); ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < y.cols(); ++j) dot += y(i, j) * gy(i, j);
      for (std::size_t j = 0; j < y.cols(); ++j) (*gx)(i, j) += y(i, j) * (gy(i, j) - dot);
    }
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape(a, b, "matmul");
  Tensor out = matmul(a.value(), b.value());
  return a.tape().record("matmul", std::move(out), {a, b}, [](const BackwardArgs& args) {
    const Tensor& g = args.output_grad;
    if (args.input_grads[0] != nullptr) add_matmul_bt(g, *args.inputs[1], *args.input_grads[0]);
    if (args.input_grads[1] != nullptr) add_matmul_at(*args.inputs[0], g, *args.input_grads[1]);
  });
}

namespace {

Var add_or_sub(Var a, Var b, double sign, const char* op) {
  require_same_tape(a, b, op);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  const bool broadcast = !x.same_shape(y) && y.rows() == 1 && y.cols() == x.cols();
  if (!broadcast) require_same_shape(x, y, op);
  Tensor out = x;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out(i, j) += sign * (broadcast ? y(0, j) : y(i, j));
    }
  }
  return a.tape().record(op, std::move(out), {a, b},
                         [sign, broadcast](const BackwardArgs& args) {
    const Tensor& g = args.output_grad;
    if (args.input_grads[0] != nullptr) *args.input_grads[0] += g;
    if (Tensor* gy = args.input_grads[1]) {
      for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
          (broadcast ? (*gy)(0, j) : (*gy)(i, j)) += sign * g(i, j);
        }
      }
    }
  });
}

}  // namespace

Var add(Var a, Var b) { return add_or_sub(a, b, 1.0, "add"); }

Var sub(Var a, Var b) { return add_or_sub(a, b, -1.0, "sub"); }

Var mul(Var a, Var b) {
  require_same_tape(a, b, "mul");
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  require_same_shape(x, y, "mul");
  Tensor out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return a.tape().record("mul", std::move(out), {a, b}, [](const BackwardArgs& args) {
    const Tensor& g = args.output_grad;
    const Tensor& x = *args.inputs[0];
    const Tensor& y = *args.inputs[1];
    if (Tensor* gx = args.input_grads[0]) {
      for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i] * y[i];
    }
    if (Tensor* gy = args.input_grads[1]) {
      for (std::size_t i = 0; i < g.size(); ++i) (*gy)[i] += g[i] * x[i];
    }
  });
}

Var scale(Var a, double factor) {
  return unary(
      a, "scale", [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Var sigmoid(Var a) {
  return unary(a, "sigmoid", stable_sigmoid, [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var a) {
  return unary(
      a, "tanh", [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var leaky_relu(Var a, double slope) {
  return unary(
      a, "leaky_relu", [slope](double x) { return x > 0.0 ? x : slope * x; },
      [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Var exp(Var a) {
  return unary(
      a, "exp", [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var log(Var a) {
  for (double v : a.value().values()) {
    if (!(v > 0.0)) throw NumericError("log of non-positive value " + std::to_string(v));
  }
  return unary(
      a, "log", [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var transpose(Var a) {
  return a.tape().record("transpose", a.value().transposed(), {a}, [](const BackwardArgs& args) {
    if (Tensor* gx = args.input_grads[0]) *gx += args.output_grad.transposed();
  });
}

Var sum(Var a) {
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  return a.tape().record("sum", Tensor(1, 1, total), {a}, [](const BackwardArgs& args) {
    Tensor* gx = args.input_grads[0];
    if (gx == nullptr) return;
    const double g = args.output_grad[0];
    for (double& v : gx->values()) v += g;
  });
}

Var softmax_rows(Var x) { return softmax_rows_impl(x, nullptr); }

Var softmax_rows(Var x, const Mask& mask) { return softmax_rows_impl(x, &mask); }

Var max_over_rows(Var x) {
  const Tensor& in = x.value();
  if (in.rows() == 0) throw ShapeError("max_over_rows: empty input");
  Tensor out(1, in.cols());
  std::vector<std::size_t> argmax(in.cols(), 0);
  for (std::size_t j = 0; j < in.cols(); ++j) {
    out(0, j) = in(0, j);
    for (std::size_t i = 1; i < in.rows(); ++i) {
      if (in(i, j) > out(0, j)) {
        out(0, j) = in(i, j);
        argmax[j] = i;
      }
    }
  }
  return x.tape().record("max_over_rows", std::move(out), {x},
                         [argmax = std::move(argmax)](const BackwardArgs& args) {
    Tensor* gx = args.input_grads[0];
    if (gx == nullptr) return;
    for (std::size_t j = 0; j < argmax.size(); ++j) (*gx)(argmax[j], j) += args.output_grad(0, j);
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no parts");
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const Var& p : parts) {
    require_same_tape(parts.front(), p, "concat_cols");
    if (p.rows() != rows) {
      throw ShapeError("concat_cols: row mismatch " + std::to_string(p.rows()) + " vs " +
                       std::to_string(rows));
    }
    cols += p.cols();
  }
  Tensor out(rows, cols);
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < v.cols(); ++j) out(i, offset + j) = v(i, j);
    }
    offset += v.cols();
  }
  return parts.front().tape().record(
      "concat_cols", std::move(out), std::vector<Var>(parts.begin(), parts.end()),
      [](const BackwardArgs& args) {
        std::size_t offset = 0;
        for (std::size_t k = 0; k < args.inputs.size(); ++k) {
          const std::size_t width = args.inputs[k]->cols();
          if (Tensor* gx = args.input_grads[k]) {
            for (std::size_t i = 0; i < gx->rows(); ++i) {
              for (std::size_t j = 0; j < width; ++j) (*gx)(i, j) += args.output_grad(i, offset + j);
            }
          }
          offset += width;
        }
      });
}

Var slice_cols(Var x, std::size_t begin, std::size_t count) {
  const Tensor& in = x.value();
  if (begin + count > in.cols()) {
    throw ShapeError("slice_cols: [" + std::to_string(begin) + ", +" + std::to_string(count) +
                     ") outside " + in.shape_string());
  }
  Tensor out(in.rows(), count);
  for (std::size_t i = 0; i < in.rows(); ++i) {
    for (std::size_t j = 0; j < count; ++j) out(i, j) = in(i, begin + j);
  }
  return x.tape().record("slice_cols", std::move(out), {x}, [begin](const BackwardArgs& args) {
    Tensor* gx = args.input_grads[0];
    if (gx == nullptr) return;
    const Tensor& g = args.output_grad;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) (*gx)(i, begin + j) += g(i, j);
    }
  });
}

Var stack_rows(std::span<const Var> rows) {
  if (rows.empty()) throw ShapeError("stack_rows: no rows");
  const std::size_t cols = rows.front().cols();
  Tensor out(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_same_tape(rows.front(), rows[i], "stack_rows");
    const Tensor& r = rows[i].value();
    if (r.rows() != 1 || r.cols() != cols) {
      throw ShapeError("stack_rows: expected 1x" + std::to_string(cols) + " row, got " +
                       r.shape_string());
    }
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = r(0, j);
  }
  return rows.front().tape().record(
      "stack_rows", std::move(out), std::vector<Var>(rows.begin(), rows.end()),
      [](const BackwardArgs& args) {
        for (std::size_t i = 0; i < args.inputs.size(); ++i) {
          Tensor* gx = args.input_grads[i];
          if (gx == nullptr) continue;
          for (std::size_t j = 0; j < gx->cols(); ++j) (*gx)(0, j) += args.output_grad(i, j);
        }
      });
}

Var take_row(Var x, std::size_t r) {
  const Tensor& in = x.value();
  if (r >= in.rows()) throw ShapeError("take_row: row " + std::to_string(r) + " of " + in.shape_string());
  std::vector<double> row(in.row_span(r).begin(), in.row_span(r).end());
  return x.tape().record("take_row", Tensor::row(std::move(row)), {x}, [r](const BackwardArgs& args) {
    Tensor* gx = args.input_grads[0];
    if (gx == nullptr) return;
    for (std::size_t j = 0; j < gx->cols(); ++j) (*gx)(r, j) += args.output_grad(0, j);
  });
}

Var gather_rows(Var table, std::span<const std::int32_t> ids) {
  const Tensor& t = table.value();
  Tensor out(ids.size(), t.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= t.rows()) {
      throw ShapeError("gather_rows: id " + std::to_string(ids[i]) + " out of range for " +
                       t.shape_string());
    }
    const auto src = t.row_span(static_cast<std::size_t>(ids[i]));
    std::copy(src.begin(), src.end(), &out(i, 0));
  }
  std::vector<std::int32_t> rows(ids.begin(), ids.end());
  return table.tape().record("gather_rows", std::move(out), {table},
                             [rows = std::move(rows)](const BackwardArgs& args) {
    Tensor* gt = args.input_grads[0];
    if (gt == nullptr) return;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto r = static_cast<std::size_t>(rows[i]);
      for (std::size_t j = 0; j < gt->cols(); ++j) (*gt)(r, j) += args.output_grad(i, j);
    }
  });
}

Var shift_rows(Var x, std::ptrdiff_t offset) {
  const Tensor& in = x.value();
  const auto n = static_cast<std::ptrdiff_t>(in.rows());
  Tensor out(in.rows(), in.cols());
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const std::ptrdiff_t src = t + offset;
    if (src < 0 || src >= n) continue;
    for (std::size_t j = 0; j < in.cols(); ++j) out(t, j) = in(src, j);
  }
  return x.tape().record("shift_rows", std::move(out), {x}, [offset](const BackwardArgs& args) {
    Tensor* gx = args.input_grads[0];
    if (gx == nullptr) return;
    const auto n = static_cast<std::ptrdiff_t>(gx->rows());
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      const std::ptrdiff_t src = t + offset;
      if (src < 0 || src >= n) continue;
      for (std::size_t j = 0; j < gx->cols(); ++j) (*gx)(src, j) += args.output_grad(t, j);
    }
  });
}

Var outer_sum(Var u, Var v) {
  require_same_tape(u, v, "outer_sum");
  const Tensor& a = u.value();
  const Tensor& b = v.value();
  if (a.cols() != 1 || b.cols() != 1) {
    throw ShapeError("outer_sum: expected column vectors, got " + a.shape_string() + " and " +
                     b.shape_string());
  }
  Tensor out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = a(i, 0) + b(j, 0);
  }
  return u.tape().record("outer_sum", std::move(out), {u, v}, [](const BackwardArgs& args) {
    const Tensor& g = args.output_grad;
    Tensor* gu = args.input_grads[0];
    Tensor* gv = args.input_grads[1];
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) {
        if (gu != nullptr) (*gu)(i, 0) += g(i, j);
        if (gv != nullptr) (*gv)(j, 0) += g(i, j);
      }
    }
  });
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

Var cross_entropy_logits(Var logits, std::size_t label) {
  const Tensor& z = logits.value();
  if (z.rows() != 1) throw ShapeError("cross_entropy_logits: expected 1xC logits, got " + z.shape_string());
  if (label >= z.cols()) {
    throw ConfigError("cross_entropy_logits: label " + std::to_string(label) + " outside [0, " +
                      std::to_string(z.cols()) + ")");
  }
  const double peak = *std::max_element(z.values().begin(), z.values().end());
  double total = 0.0;
  for (double v : z.values()) total += std::exp(v - peak);
  const double loss = std::log(total) + peak - z[label];
  return logits.tape().record("cross_entropy_logits", Tensor(1, 1, loss), {logits},
                              [label](const BackwardArgs& args) {
    Tensor* gz = args.input_grads[0];
    if (gz == nullptr) return;
    const std::vector<double> p = softmax(args.inputs[0]->values());
    const double g = args.output_grad[0];
    for (std::size_t c = 0; c < p.size(); ++c) {
      (*gz)[c] += g * (p[c] - (c == label ? 1.0 : 0.0));
    }
  });
}

}  // namespace docgraph
