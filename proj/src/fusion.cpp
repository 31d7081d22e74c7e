#include "chronograph/fusion.hpp"

#include <cmath>

#include "chronograph/errors.hpp"

namespace chronograph::fusion {

using num::Var;

Var adaptive_fuse(Var a, Var b, num::BoundParams& params, const std::string& prefix,
                  num::ForwardProbe* probe) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw NumericalError("adaptive_fuse shape mismatch");
  Var logits = num::add(num::matmul(a, params[prefix + ".wa"]),
                        num::matmul(b, params[prefix + ".wb"]));
  Var gate = num::sigmoid(logits);
  if (probe) probe->note_gate(gate.value());
  // a + gate . (b - a) == (1 - gate) . a + gate . b
  return num::add(a, num::hadamard(gate, num::sub(b, a)));
}

Var mhca(Var queries, Var keys, Var values, num::BoundParams& params, const std::string& prefix,
         int n_heads, num::ForwardProbe* probe) {
  Var q = num::matmul(queries, params[prefix + ".wq"]);
  Var k = num::matmul(keys, params[prefix + ".wk"]);
  Var v = num::matmul(values, params[prefix + ".wv"]);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols() / n_heads));
  Var att = num::multihead_attention(q, k, v, n_heads, scale, nullptr, nullptr, probe);
  return num::matmul(att, params[prefix + ".wo"]);
}

Var question_guided_fuse(Var h_text, Var v_fuse, num::BoundParams& params, int n_heads,
                         num::ForwardProbe* probe) {
  if (h_text.cols() != v_fuse.cols()) throw NumericalError("question_guided_fuse width mismatch");
  Var query_bank = params["qg.query"];
  Var summary = mhca(query_bank, v_fuse, v_fuse, params, "qg.a1", n_heads, probe);
  Var enriched = mhca(h_text, summary, summary, params, "qg.a2", n_heads, probe);
  return adaptive_fuse(h_text, enriched, params, "qg.gate", probe);
}

void create_fuse_params(num::ParamStore& store, const std::string& prefix, int hidden) {
  store.create(prefix + ".wa", hidden, hidden);
  store.create(prefix + ".wb", hidden, hidden);
}

void create_mhca_params(num::ParamStore& store, const std::string& prefix, int hidden) {
  store.create(prefix + ".wq", hidden, hidden);
  store.create(prefix + ".wk", hidden, hidden);
  store.create(prefix + ".wv", hidden, hidden);
  store.create(prefix + ".wo", hidden, hidden);
}

void create_question_guided_params(num::ParamStore& store, int hidden, int n_query) {
  store.create("qg.query", n_query, hidden);
  create_mhca_params(store, "qg.a1", hidden);
  create_mhca_params(store, "qg.a2", hidden);
  create_fuse_params(store, "qg.gate", hidden);
}

}  // namespace chronograph::fusion
