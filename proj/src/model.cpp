#include "chronograph/model.hpp"

#include <algorithm>

#include "chronograph/errors.hpp"

namespace chronograph::model {

using num::Matrix;
using num::Var;

hgat::GnnConfig ModelConfig::gnn() const {
  hgat::GnnConfig g;
  g.n_layers = n_layers;
  g.n_heads = n_heads;
  g.hidden = hidden;
  g.dropout = dropout;
  if (!heterogeneous) g.relation_group.fill(0);
  g.validate();
  return g;
}

int derive_gold(const corpus::Document& doc, const std::vector<corpus::Chunk>& chunks,
                const std::vector<std::optional<timex::TimeInterval>>& fact_intervals) {
  const int n_facts = static_cast<int>(fact_intervals.size());
  const auto mentions = timex::extract_timex(doc.question);
  if (!mentions.empty()) {
    int count = 0, hit = -1;
    for (int i = 0; i < n_facts; ++i) {
      if (!fact_intervals[i].has_value()) continue;
      if (timex::satisfies(mentions[0].category, mentions[0].interval, *fact_intervals[i])) {
        ++count;
        hit = i;
      }
    }
    if (count == 1) return hit;
  }
  for (const auto& a : doc.answers)
    if (a == corpus::kUnanswerable) return n_facts;
  // Fall back to the first fact whose sentence mentions the answer.
  int fact = 0;
  for (const auto& chunk : chunks) {
    for (std::size_t si = 0; si < chunk.sentences.size(); ++si) {
      bool is_fact = false;
      for (const auto& m : timex::extract_timex(chunk.sentences[si].text)) {
        (void)m;
        is_fact = true;
        break;
      }
      if (!is_fact) continue;
      if (chunk.sentences[si].text.find(doc.answers[0]) != std::string::npos) return fact;
      ++fact;
    }
  }
  return n_facts;
}

DocArtifacts build_artifacts(const corpus::Document& doc, const ModelConfig& config) {
  DocArtifacts art;
  art.doc = doc;
  art.chunks = corpus::segment(doc);
  const auto mentions = tgraph::extract_mentions(art.chunks);
  art.graph = tgraph::build_multiview(art.chunks, mentions);
  const auto& graph = art.graph.time_focused;
  art.fact_ids = graph.fact_ids();
  art.fact_intervals = graph.fact_intervals();
  art.pairs = timex::label_pairs(art.fact_intervals);
  art.n_facts = static_cast<int>(art.fact_ids.size());
  art.layout = encoder::build_layout(doc, art.chunks);
  for (const auto& node : graph.nodes) art.node_kinds.push_back(node.kind);

  if (config.graph_enabled) {
    const auto gnn = config.gnn();
    art.adj_time = hgat::build_adjacency(art.graph.time_focused, gnn);
    if (config.multi_view) art.adj_fact = hgat::build_adjacency(art.graph.fact_focused, gnn);
  }

  for (const auto& node : graph.nodes) {
    DocArtifacts::PoolSpan span;
    if (node.kind == tgraph::NodeKind::Global) {
      span.paragraph = -1;
    } else if (node.kind == tgraph::NodeKind::Fact) {
      const auto rows = encoder::sentence_rows(art.layout, node.chunk, node.sentence);
      span = {node.chunk, rows.begin, rows.end};
    } else {
      const auto rows = encoder::mention_rows(art.layout, *node.mention);
      span = {node.chunk, rows.begin, rows.end};
    }
    art.pool_spans.push_back(span);
  }

  auto fact_spans = std::make_shared<std::vector<std::pair<int, int>>>();
  for (const auto& node : graph.nodes) {
    if (node.kind != tgraph::NodeKind::Fact) continue;
    const auto rows = encoder::sentence_rows(art.layout, node.chunk, node.sentence);
    const int off = art.layout.row_offset[node.chunk];
    fact_spans->push_back({off + rows.begin, off + rows.end});
  }
  art.fact_spans = std::move(fact_spans);

  auto qspan = std::make_shared<std::vector<std::pair<int, int>>>();
  if (art.layout.question_span.length() > 0)
    qspan->push_back({art.layout.question_span.begin, art.layout.question_span.end});
  else
    qspan->push_back({0, std::max(1, std::min(2, art.layout.total_rows))});
  art.question_span = std::move(qspan);

  art.gold = derive_gold(doc, art.chunks, art.fact_intervals);
  return art;
}

void init_params(num::ParamStore& store, const ModelConfig& config, std::uint64_t seed) {
  const int h = config.hidden;
  objectives::create_task_params(store, h);
  if (config.graph_enabled) {
    hgat::create_init_params(store, "init", h);
    const auto gnn = config.gnn();
    hgat::create_gnn_params(store, "gnn.time", gnn);
    if (config.multi_view) {
      hgat::create_gnn_params(store, "gnn.fact", gnn);
      fusion::create_fuse_params(store, "fuse", h);
    }
    if (config.text_graph_fusion) fusion::create_question_guided_params(store, h, config.n_query);
    objectives::create_tc_params(store, h);
  }

  for (auto& [name, value] : store.values()) {
    if (name.starts_with("tc.b")) continue;  // biases stay zero
    Rng rng(mix64(seed, fnv1a64(name)));
    const double bound =
        std::sqrt(6.0 / static_cast<double>(value.rows() + value.cols()));
    for (Eigen::Index i = 0; i < value.rows(); ++i)
      for (Eigen::Index j = 0; j < value.cols(); ++j) value(i, j) = rng.symmetric(bound);
  }
}

namespace {

Matrix stack_paragraphs(const encoder::TextRep& rep) {
  int rows = 0;
  for (const auto& p : rep.paragraphs) rows += static_cast<int>(p.rows());
  Matrix out(rows, rep.paragraphs.empty() ? 0 : rep.paragraphs[0].cols());
  int at = 0;
  for (const auto& p : rep.paragraphs) {
    out.middleRows(at, p.rows()) = p;
    at += static_cast<int>(p.rows());
  }
  return out;
}

Matrix pool_nodes(const encoder::TextRep& rep, const Matrix& stacked,
                  const std::vector<DocArtifacts::PoolSpan>& spans) {
  Matrix pooled(static_cast<Eigen::Index>(spans.size()), stacked.cols());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.paragraph < 0) {
      pooled.row(static_cast<Eigen::Index>(i)) = stacked.colwise().mean();
    } else {
      const auto& para = rep.paragraphs[s.paragraph];
      if (s.begin >= s.end) throw ValidationError("empty pooling span");
      pooled.row(static_cast<Eigen::Index>(i)) =
          para.middleRows(s.begin, s.end - s.begin).colwise().mean();
    }
  }
  return pooled;
}

}  // namespace

ForwardOutput model_forward(num::Tape& tape, num::BoundParams& params, const DocArtifacts& art,
                            const ModelConfig& config, double loss_lambda, Rng* dropout_rng,
                            num::ForwardProbe* probe) {
  const auto rep = encoder::encode(art.layout, config.hidden, config.encoder_seed);
  Var h_text = tape.input(stack_paragraphs(rep));

  Var h_fuse = h_text;
  Var v_fuse{};
  Var tc_states{};
  if (config.graph_enabled) {
    Var pooled = tape.input(pool_nodes(rep, h_text.value(), art.pool_spans));
    Var v0 = hgat::init_nodes(pooled, art.node_kinds, params, "init");
    const auto gnn = config.gnn();
    Var vt = hgat::run_gnn(v0, art.adj_time, params, "gnn.time", gnn, dropout_rng, probe);
    if (config.multi_view) {
      Var vf = hgat::run_gnn(v0, art.adj_fact, params, "gnn.fact", gnn, dropout_rng, probe);
      v_fuse = fusion::adaptive_fuse(vf, vt, params, "fuse", probe);
    } else {
      v_fuse = vt;
    }
    if (config.text_graph_fusion)
      h_fuse = fusion::question_guided_fuse(h_text, v_fuse, params, config.n_heads, probe);
    tc_states = config.tc_on_fused ? v_fuse : vt;
  }

  ForwardOutput out;
  Var q_feat = num::span_mean(h_fuse, art.question_span);
  Var fact_feats{};
  if (art.n_facts > 0) fact_feats = num::span_mean(h_fuse, art.fact_spans);
  out.task_logits = objectives::task_logits(q_feat, fact_feats, params);
  Var task = objectives::task_loss(out.task_logits, art.gold);

  Var tc{};
  if (config.graph_enabled && !art.pairs.empty()) {
    auto ids = std::make_shared<std::vector<int>>(art.fact_ids);
    Var fact_states = num::gather_rows(tc_states, ids);
    out.tc_logits = objectives::tc_logits(fact_states, art.pairs, params);
    auto targets = std::make_shared<std::vector<int>>();
    for (const auto& p : art.pairs) targets->push_back(objectives::tc_label_index(p.label));
    tc = num::cross_entropy(out.tc_logits, targets, config.tc_mean);
  } else {
    tc = tape.input(Matrix::Zero(1, 1));
  }

  out.loss = objectives::total_loss(task, tc, loss_lambda);
  out.task_loss_value = task.value()(0, 0);
  out.tc_loss_value = tc.value()(0, 0);
  const auto& logits = out.task_logits.value();
  Eigen::Index best = 0;
  logits.row(0).maxCoeff(&best);
  out.predicted = static_cast<int>(best);
  return out;
}

ForwardOutput run_inference(const DocArtifacts& art, num::ParamStore& store,
                            const ModelConfig& config, num::Tape& tape,
                            num::ForwardProbe* probe) {
  num::BoundParams params(tape, store);
  return model_forward(tape, params, art, config, 0.0, nullptr, probe);
}

}  // namespace chronograph::model
