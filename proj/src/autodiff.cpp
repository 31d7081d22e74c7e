#include "chronograph/autodiff.hpp"

#include <cmath>

#include "chronograph/errors.hpp"

namespace chronograph::num {

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string("non-finite values in ") + what);
}

const Matrix& Var::value() const { return tape->value(id); }
int Var::rows() const { return static_cast<int>(value().rows()); }
int Var::cols() const { return static_cast<int>(value().cols()); }

void ForwardProbe::note_softmax_row(double row_sum) {
  max_softmax_row_err = std::max(max_softmax_row_err, std::abs(row_sum - 1.0));
  ++n_softmax_rows;
}

void ForwardProbe::note_gate(const Matrix& gate) {
  if (gate.size() == 0) return;
  gate_min = std::min(gate_min, gate.minCoeff());
  gate_max = std::max(gate_max, gate.maxCoeff());
  n_gate_entries += gate.size();
}

Var Tape::input(Matrix value) {
  require_finite(value, "tape input");
  return emplace(std::move(value), {}, nullptr);
}

Var Tape::emplace(Matrix value, std::vector<int>, Backprop backprop) {
  Node node;
  node.value = std::move(value);
  node.backprop = std::move(backprop);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::set_backprop(int id, Backprop backprop) { nodes_[id].backprop = std::move(backprop); }

void Tape::accumulate(int id, const Matrix& delta) {
  Node& n = nodes_[id];
  if (!n.grad_live) {
    n.grad = delta;
    n.grad_live = true;
  } else {
    n.grad += delta;
  }
}

void Tape::backward(Var root) {
  if (root.tape != this) throw NumericalError("backward on foreign var");
  const Matrix& rv = nodes_[root.id].value;
  if (rv.rows() != 1 || rv.cols() != 1) throw NumericalError("backward root must be 1x1");
  accumulate(root.id, Matrix::Ones(1, 1));
  for (int id = root.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.grad_live || !n.backprop) continue;
    n.backprop(*this, n.grad);
  }
}

Matrix Tape::grad(Var v) const {
  const Node& n = nodes_[v.id];
  if (n.grad_live) return n.grad;
  return Matrix::Zero(n.value.rows(), n.value.cols());
}

namespace {

void check_same_tape(Var a, Var b) {
  if (a.tape != b.tape) throw NumericalError("vars from different tapes");
}

void check_same_shape(Var a, Var b, const char* op) {
  check_same_tape(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw NumericalError(std::string(op) + " shape mismatch");
}

}  // namespace

Var matmul(Var a, Var b) {
  check_same_tape(a, b);
  if (a.cols() != b.rows()) throw NumericalError("matmul shape mismatch");
  const int ai = a.id, bi = b.id;
  return a.tape->emplace(a.value() * b.value(), {ai, bi}, [ai, bi](Tape& t, const Matrix& g) {
    t.accumulate(ai, g * t.value(bi).transpose());
    t.accumulate(bi, t.value(ai).transpose() * g);
  });
}

Var add(Var a, Var b) {
  check_same_shape(a, b, "add");
  const int ai = a.id, bi = b.id;
  return a.tape->emplace(a.value() + b.value(), {ai, bi}, [ai, bi](Tape& t, const Matrix& g) {
    t.accumulate(ai, g);
    t.accumulate(bi, g);
  });
}

Var sub(Var a, Var b) {
  check_same_shape(a, b, "sub");
  const int ai = a.id, bi = b.id;
  return a.tape->emplace(a.value() - b.value(), {ai, bi}, [ai, bi](Tape& t, const Matrix& g) {
    t.accumulate(ai, g);
    t.accumulate(bi, Matrix(-g));
  });
}

Var scale(Var a, double s) {
  const int ai = a.id;
  return a.tape->emplace(a.value() * s, {ai}, [ai, s](Tape& t, const Matrix& g) {
    t.accumulate(ai, Matrix(g * s));
  });
}

Var hadamard(Var a, Var b) {
  check_same_shape(a, b, "hadamard");
  const int ai = a.id, bi = b.id;
  return a.tape->emplace(a.value().cwiseProduct(b.value()), {ai, bi},
                         [ai, bi](Tape& t, const Matrix& g) {
                           t.accumulate(ai, g.cwiseProduct(t.value(bi)));
                           t.accumulate(bi, g.cwiseProduct(t.value(ai)));
                         });
}

Var add_rowvec(Var a, Var row) {
  check_same_tape(a, row);
  if (row.rows() != 1 || row.cols() != a.cols())
    throw NumericalError("add_rowvec shape mismatch");
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  const int ai = a.id, ri = row.id;
  return a.tape->emplace(std::move(out), {ai, ri}, [ai, ri](Tape& t, const Matrix& g) {
    t.accumulate(ai, g);
    t.accumulate(ri, Matrix(g.colwise().sum()));
  });
}

Var sigmoid(Var a) {
  Matrix out = a.value().unaryExpr([](double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  });
  const int ai = a.id;
  Var r = a.tape->emplace(std::move(out), {ai}, nullptr);
  const int oi = r.id;
  r.tape->set_backprop(oi, [ai, oi](Tape& t, const Matrix& g) {
    const Matrix& s = t.value(oi);
    Matrix ds = s.array() * (1.0 - s.array());
    t.accumulate(ai, g.cwiseProduct(ds));
  });
  return r;
}

Var elu(Var a) {
  Matrix out = a.value().unaryExpr([](double x) { return x > 0 ? x : std::expm1(x); });
  const int ai = a.id;
  Var r = a.tape->emplace(std::move(out), {ai}, nullptr);
  const int oi = r.id;
  r.tape->set_backprop(oi, [ai, oi](Tape& t, const Matrix& g) {
    // d/dx elu(x) = 1 for x > 0, exp(x) = elu(x) + 1 otherwise.
    const Matrix& o = t.value(oi);
    Matrix d = o.unaryExpr([](double y) { return y > 0 ? 1.0 : y + 1.0; });
    t.accumulate(ai, g.cwiseProduct(d));
  });
  return r;
}

Var row_softmax(Var a) {
  Matrix out = a.value();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double mx = out.row(i).maxCoeff();
    out.row(i) = (out.row(i).array() - mx).exp();
    out.row(i) /= out.row(i).sum();
  }
  const int ai = a.id;
  Var r = a.tape->emplace(std::move(out), {ai}, nullptr);
  const int oi = r.id;
  r.tape->set_backprop(oi, [ai, oi](Tape& t, const Matrix& g) {
    const Matrix& s = t.value(oi);
    Matrix dot = (g.cwiseProduct(s)).rowwise().sum();  // n x 1
    Matrix dx = s.cwiseProduct(g - dot.replicate(1, g.cols()));
    t.accumulate(ai, dx);
  });
  return r;
}

Var transpose(Var a) {
  const int ai = a.id;
  return a.tape->emplace(a.value().transpose(), {ai}, [ai](Tape& t, const Matrix& g) {
    t.accumulate(ai, g.transpose());
  });
}

Var hconcat(const std::vector<Var>& xs) {
  if (xs.empty()) throw NumericalError("hconcat of nothing");
  Tape* tape = xs[0].tape;
  const int rows = xs[0].rows();
  int cols = 0;
  for (const Var& x : xs) {
    check_same_tape(xs[0], x);
    if (x.rows() != rows) throw NumericalError("hconcat row mismatch");
    cols += x.cols();
  }
  Matrix out(rows, cols);
  std::vector<int> ids;
  std::vector<int> offsets;
  int at = 0;
  for (const Var& x : xs) {
    out.middleCols(at, x.cols()) = x.value();
    ids.push_back(x.id);
    offsets.push_back(at);
    at += x.cols();
  }
  return tape->emplace(std::move(out), ids, [ids, offsets](Tape& t, const Matrix& g) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Eigen::Index w = t.value(ids[i]).cols();
      t.accumulate(ids[i], g.middleCols(offsets[i], w));
    }
  });
}

Var vconcat(const std::vector<Var>& xs) {
  if (xs.empty()) throw NumericalError("vconcat of nothing");
  Tape* tape = xs[0].tape;
  const int cols = xs[0].cols();
  int rows = 0;
  for (const Var& x : xs) {
    check_same_tape(xs[0], x);
    if (x.cols() != cols) throw NumericalError("vconcat column mismatch");
    rows += x.rows();
  }
  Matrix out(rows, cols);
  std::vector<int> ids;
  std::vector<int> offsets;
  int at = 0;
  for (const Var& x : xs) {
    out.middleRows(at, x.rows()) = x.value();
    ids.push_back(x.id);
    offsets.push_back(at);
    at += x.rows();
  }
  return tape->emplace(std::move(out), ids, [ids, offsets](Tape& t, const Matrix& g) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Eigen::Index h = t.value(ids[i]).rows();
      t.accumulate(ids[i], g.middleRows(offsets[i], h));
    }
  });
}

Var gather_rows(Var a, std::shared_ptr<const std::vector<int>> rows) {
  const Matrix& v = a.value();
  Matrix out(static_cast<Eigen::Index>(rows->size()), v.cols());
  for (std::size_t i = 0; i < rows->size(); ++i) {
    const int r = (*rows)[i];
    if (r < 0 || r >= v.rows()) throw NumericalError("gather_rows index out of range");
    out.row(static_cast<Eigen::Index>(i)) = v.row(r);
  }
  const int ai = a.id;
  return a.tape->emplace(std::move(out), {ai}, [ai, rows](Tape& t, const Matrix& g) {
    Matrix da = Matrix::Zero(t.value(ai).rows(), t.value(ai).cols());
    for (std::size_t i = 0; i < rows->size(); ++i)
      da.row((*rows)[i]) += g.row(static_cast<Eigen::Index>(i));
    t.accumulate(ai, da);
  });
}

Var span_mean(Var a, std::shared_ptr<const std::vector<std::pair<int, int>>> spans) {
  const Matrix& v = a.value();
  Matrix out(static_cast<Eigen::Index>(spans->size()), v.cols());
  for (std::size_t i = 0; i < spans->size(); ++i) {
    const auto [b, e] = (*spans)[i];
    if (b < 0 || e > v.rows() || b >= e) throw NumericalError("span_mean empty span");
    out.row(static_cast<Eigen::Index>(i)) = v.middleRows(b, e - b).colwise().mean();
  }
  const int ai = a.id;
  return a.tape->emplace(std::move(out), {ai}, [ai, spans](Tape& t, const Matrix& g) {
    Matrix da = Matrix::Zero(t.value(ai).rows(), t.value(ai).cols());
    for (std::size_t i = 0; i < spans->size(); ++i) {
      const auto [b, e] = (*spans)[i];
      da.middleRows(b, e - b).rowwise() += g.row(static_cast<Eigen::Index>(i)) / (e - b);
    }
    t.accumulate(ai, da);
  });
}

Var sum_all(Var a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  const int ai = a.id;
  return a.tape->emplace(std::move(out), {ai}, [ai](Tape& t, const Matrix& g) {
    t.accumulate(ai, Matrix::Constant(t.value(ai).rows(), t.value(ai).cols(), g(0, 0)));
  });
}

Var mul_mask(Var a, std::shared_ptr<const Matrix> mask) {
  if (mask->rows() != a.rows() || mask->cols() != a.cols())
    throw NumericalError("mul_mask shape mismatch");
  const int ai = a.id;
  return a.tape->emplace(a.value().cwiseProduct(*mask), {ai},
                         [ai, mask](Tape& t, const Matrix& g) {
                           t.accumulate(ai, g.cwiseProduct(*mask));
                         });
}

Var where_rows(std::shared_ptr<const std::vector<std::uint8_t>> keep, Var a, Var b) {
  check_same_shape(a, b, "where_rows");
  if (static_cast<int>(keep->size()) != a.rows())
    throw NumericalError("where_rows mask size mismatch");
  Matrix out = b.value();
  for (std::size_t i = 0; i < keep->size(); ++i)
    if ((*keep)[i]) out.row(static_cast<Eigen::Index>(i)) = a.value().row(i);
  const int ai = a.id, bi = b.id;
  return a.tape->emplace(std::move(out), {ai, bi}, [ai, bi, keep](Tape& t, const Matrix& g) {
    Matrix da = Matrix::Zero(g.rows(), g.cols());
    Matrix db = Matrix::Zero(g.rows(), g.cols());
    for (std::size_t i = 0; i < keep->size(); ++i) {
      if ((*keep)[i])
        da.row(static_cast<Eigen::Index>(i)) = g.row(static_cast<Eigen::Index>(i));
      else
        db.row(static_cast<Eigen::Index>(i)) = g.row(static_cast<Eigen::Index>(i));
    }
    t.accumulate(ai, da);
    t.accumulate(bi, db);
  });
}

Var cross_entropy(Var logits, std::shared_ptr<const std::vector<int>> targets, bool mean) {
  const Matrix& l = logits.value();
  if (static_cast<int>(targets->size()) != l.rows())
    throw NumericalError("cross_entropy target count mismatch");
  const Eigen::Index n = l.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int target = (*targets)[static_cast<std::size_t>(i)];
    if (target < 0 || target >= l.cols()) throw NumericalError("cross_entropy target out of range");
    const double mx = l.row(i).maxCoeff();
    const double lse = mx + std::log((l.row(i).array() - mx).exp().sum());
    total += lse - l(i, target);
  }
  Matrix out(1, 1);
  out(0, 0) = mean ? total / static_cast<double>(n) : total;
  const int li = logits.id;
  return logits.tape->emplace(std::move(out), {li},
                              [li, targets, mean](Tape& t, const Matrix& g) {
                                const Matrix& l = t.value(li);
                                const double w =
                                    g(0, 0) / (mean ? static_cast<double>(l.rows()) : 1.0);
                                Matrix dl(l.rows(), l.cols());
                                for (Eigen::Index i = 0; i < l.rows(); ++i) {
                                  const double mx = l.row(i).maxCoeff();
                                  Eigen::RowVectorXd p = (l.row(i).array() - mx).exp();
                                  p /= p.sum();
                                  dl.row(i) = p * w;
                                  dl(i, (*targets)[static_cast<std::size_t>(i)]) -= w;
                                }
                                t.accumulate(li, dl);
                              });
  }

Var multihead_attention(Var q, Var k, Var v, int n_heads, double scale,
                        std::shared_ptr<const Matrix> mask,
                        std::shared_ptr<const std::vector<Matrix>> dropout,
                        ForwardProbe* probe) {
  check_same_tape(q, k);
  check_same_tape(q, v);
  const Eigen::Index nq = q.rows(), nk = k.rows();
  if (q.cols() != k.cols()) throw NumericalError("attention query/key width mismatch");
  if (v.rows() != nk) throw NumericalError("attention key/value row mismatch");
  if (n_heads < 1 || q.cols() % n_heads != 0 || v.cols() % n_heads != 0)
    throw NumericalError("attention width not divisible by heads");
  if (mask && (mask->rows() != nq || mask->cols() != nk))
    throw NumericalError("attention mask shape mismatch");
  if (dropout && static_cast<int>(dropout->size()) != n_heads)
    throw NumericalError("attention dropout mask count mismatch");

  const Eigen::Index dk = q.cols() / n_heads;
  const Eigen::Index dv = v.cols() / n_heads;
  auto weights = std::make_shared<std::vector<Matrix>>();  // pre-dropout softmax
  weights->reserve(n_heads);
  Matrix out(nq, v.cols());
  for (int h = 0; h < n_heads; ++h) {
    Matrix s = scale * (q.value().middleCols(h * dk, dk) *
                        k.value().middleCols(h * dk, dk).transpose());
    Matrix a = Matrix::Zero(nq, nk);
    for (Eigen::Index i = 0; i < nq; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < nk; ++j)
        if (!mask || (*mask)(i, j) != 0.0) mx = std::max(mx, s(i, j));
      if (mx == -std::numeric_limits<double>::infinity()) continue;  // fully masked row
      double z = 0.0;
      for (Eigen::Index j = 0; j < nk; ++j) {
        if (mask && (*mask)(i, j) == 0.0) continue;
        const double e = std::exp(s(i, j) - mx);
        a(i, j) = e;
        z += e;
      }
      a.row(i) /= z;
      if (probe) probe->note_softmax_row(a.row(i).sum());
    }
    Matrix aw = dropout ? Matrix(a.cwiseProduct((*dropout)[h])) : a;
    out.middleCols(h * dv, dv) = aw * v.value().middleCols(h * dv, dv);
    weights->push_back(std::move(a));
  }

  const int qi = q.id, ki = k.id, vi = v.id;
  return q.tape->emplace(
      std::move(out), {qi, ki, vi},
      [qi, ki, vi, n_heads, scale, mask, dropout, weights, dk, dv](Tape& t, const Matrix& g) {
        const Matrix& qv = t.value(qi);
        const Matrix& kv = t.value(ki);
        const Matrix& vv = t.value(vi);
        Matrix dq = Matrix::Zero(qv.rows(), qv.cols());
        Matrix dkm = Matrix::Zero(kv.rows(), kv.cols());
        Matrix dvm = Matrix::Zero(vv.rows(), vv.cols());
        for (int h = 0; h < n_heads; ++h) {
          const Matrix& a = (*weights)[h];
          const auto gh = g.middleCols(h * dv, dv);
          Matrix aw = dropout ? Matrix(a.cwiseProduct((*dropout)[h])) : a;
          dvm.middleCols(h * dv, dv) += aw.transpose() * gh;
          Matrix daw = gh * vv.middleCols(h * dv, dv).transpose();
          Matrix da = dropout ? Matrix(daw.cwiseProduct((*dropout)[h])) : daw;
          // Softmax backward per row; masked entries have a == 0.
          Matrix dot = (da.cwiseProduct(a)).rowwise().sum();
          Matrix ds = a.cwiseProduct(da - dot.replicate(1, da.cols()));
          dq.middleCols(h * dk, dk) += scale * (ds * kv.middleCols(h * dk, dk));
          dkm.middleCols(h * dk, dk) += scale * (ds.transpose() * qv.middleCols(h * dk, dk));
        }
        t.accumulate(qi, dq);
        t.accumulate(ki, dkm);
        t.accumulate(vi, dvm);
      });
}

}  // namespace chronograph::num
