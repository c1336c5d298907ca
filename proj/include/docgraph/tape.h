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

#ifndef DOCGRAPH_TAPE_H_
#define DOCGRAPH_TAPE_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "docgraph/tensor.h"

namespace docgraph {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape
// lives.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Arguments handed to a recorded op's backward rule. input_grads[k] is null
// when input k does not need a gradient. Rules must add into the buffers,
// never overwrite: the same input may appear twice.
struct BackwardArgs {
  const Tensor& output;
  const Tensor& output_grad;
  std::span<const Tensor* const> inputs;
  std::span<Tensor* const> input_grads;
};

using BackwardFn = std::function<void(const BackwardArgs&)>;

// Records executed ops in topological order and replays them in reverse to
// accumulate gradients. Single-owner: one forward/backward pass per tape.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf that never receives a gradient.
  Var constant(Tensor value);
  // Leaf whose gradient is readable through grad() after backward().
  Var variable(Tensor value);
  // Leaf referencing a parameter's storage without copying it. Its gradient
  // is collected per parameter; see accumulate_into().
  Var parameter(const Parameter& param);

  // Appends an op result. Throws NumericError when `value` holds NaN/Inf.
  Var record(std::string_view op, Tensor value, std::vector<Var> inputs,
             BackwardFn backward);

  const Tensor& value(Var v) const;
  // Gradient of the last backward() loss w.r.t. v. Throws when v received
  // none.
  const Tensor& grad(Var v) const;
  bool has_grad(Var v) const;

  // Reverse-mode accumulation from a 1x1 loss. Visits each reachable node
  // once, in reverse recording order.
  void backward(Var loss);

  // Gradient collected for `param`, or null when it was not reached.
  const Tensor* parameter_grad(const Parameter& param) const;
  // Adds every collected parameter gradient into the matching Parameter::grad
  // of `store`.
  void accumulate_into(ParameterStore& store) const;

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    std::string op;
    Tensor value;
    const Tensor* external = nullptr;
    const Parameter* param = nullptr;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool needs_grad = false;
    bool has_grad = false;
    Tensor grad;
  };

  Var push(Node node);
  const Node& node(Var v) const;

  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, Tensor> param_grads_;
};

// Boolean selector for softmax_rows; nonzero entries take part.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t rows, std::size_t cols, bool fill = true);
  // Entry (i, j) is set where adjacency(i, j) > 0.
  static Mask from_adjacency(const Tensor& adjacency);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool operator()(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool on) { bits_[r * cols_ + c] = on ? 1 : 0; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Differentiable ops. All inputs must live on the same tape.

Var matmul(Var a, Var b);
// Equal shapes, or b a 1 x n row added to every row of a.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
Var sigmoid(Var a);
Var tanh(Var a);
// Derivative at exactly 0 is `slope`.
Var leaky_relu(Var a, double slope);
Var exp(Var a);
// Throws NumericError on a non-positive entry.
Var log(Var a);
Var transpose(Var a);
// Sum of all entries, as 1 x 1.
Var sum(Var a);

// Row-wise softmax with max subtraction. Masked entries are exactly 0.
Var softmax_rows(Var x);
Var softmax_rows(Var x, const Mask& mask);

// Column-wise max, 1 x d. Gradient goes to the first argmax row.
Var max_over_rows(Var x);

Var concat_cols(std::span<const Var> parts);
Var slice_cols(Var x, std::size_t begin, std::size_t count);
// Stacks 1 x d rows into an n x d matrix.
Var stack_rows(std::span<const Var> rows);
Var take_row(Var x, std::size_t r);
// Row lookup: out[t] = table[ids[t]]. Repeated ids accumulate gradient.
Var gather_rows(Var table, std::span<const std::int32_t> ids);
// out[t] = x[t + offset], zero outside the valid range.
Var shift_rows(Var x, std::ptrdiff_t offset);
// out(i, j) = u[i] + v[j] for n x 1 columns u and v.
Var outer_sum(Var u, Var v);

// -log softmax(logits)[label] for 1 x C logits, as 1 x 1.
Var cross_entropy_logits(Var logits, std::size_t label);

// Non-differentiable softmax over a 1 x C row.
std::vector<double> softmax(std::span<const double> logits);

}  // namespace docgraph

#endif  // DOCGRAPH_TAPE_H_
