#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "chronograph/tensor.hpp"

namespace chronograph::num {

class Tape;

// Handle to a tape node. Cheap to copy; values live on the tape.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  bool defined() const { return tape != nullptr; }
  const Matrix& value() const;
  int rows() const;
  int cols() const;
};

// Collects normalization evidence during a forward pass: softmax row sums
// (pre-dropout) and gate ranges.
struct ForwardProbe {
  double max_softmax_row_err = 0.0;
  long n_softmax_rows = 0;
  double gate_min = 1.0;
  double gate_max = 0.0;
  long n_gate_entries = 0;

  void note_softmax_row(double row_sum);
  void note_gate(const Matrix& gate);
};

class Tape {
 public:
  using Backprop = std::function<void(Tape&, const Matrix& out_grad)>;

  Var input(Matrix value);
  Var emplace(Matrix value, std::vector<int> parents, Backprop backprop);
  // For adjoints that need the output node's own id (e.g. to reuse its value).
  void set_backprop(int id, Backprop backprop);

  // Reverse sweep from a 1x1 root; gradients accumulate on every reached node.
  void backward(Var root);

  const Matrix& value(int id) const { return nodes_[id].value; }
  // Gradient of the last backward() with respect to node v; zeros when the
  // node was not reached.
  Matrix grad(Var v) const;
  void accumulate(int id, const Matrix& delta);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool grad_live = false;
    Backprop backprop;
  };
  std::deque<Node> nodes_;
};

// Primitives. Each has a registered adjoint; grad_check exercises them all.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var scale(Var a, double s);
Var hadamard(Var a, Var b);
Var add_rowvec(Var a, Var row);  // broadcast a 1 x C row over all rows of a
Var sigmoid(Var a);
Var elu(Var a);
Var row_softmax(Var a);
Var transpose(Var a);
Var hconcat(const std::vector<Var>& xs);
Var vconcat(const std::vector<Var>& xs);
Var gather_rows(Var a, std::shared_ptr<const std::vector<int>> rows);
// Mean over row ranges [begin, end); one output row per span.
Var span_mean(Var a, std::shared_ptr<const std::vector<std::pair<int, int>>> spans);
Var sum_all(Var a);
Var mul_mask(Var a, std::shared_ptr<const Matrix> mask);  // elementwise by a constant
// Row i of the result comes from a when keep[i], else from b.
Var where_rows(std::shared_ptr<const std::vector<std::uint8_t>> keep, Var a, Var b);
// Mean (or sum) cross-entropy of row-wise logits against integer targets.
Var cross_entropy(Var logits, std::shared_ptr<const std::vector<int>> targets, bool mean);

// Fused multi-head scaled dot-product attention over already-projected
// inputs: per head, softmax(scale * Q K^T) V with an optional 0/1 mask
// (entry (i, j) keeps key j for query i; fully masked rows yield zero rows)
// and optional per-head dropout multipliers applied to the weights.
Var multihead_attention(Var q, Var k, Var v, int n_heads, double scale,
                        std::shared_ptr<const Matrix> mask,
                        std::shared_ptr<const std::vector<Matrix>> dropout,
                        ForwardProbe* probe);

}  // namespace chronograph::num
