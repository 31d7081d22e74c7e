#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "chronograph/encoder.hpp"
#include "chronograph/fusion.hpp"
#include "chronograph/hgat.hpp"
#include "chronograph/objectives.hpp"
#include "chronograph/tgraph.hpp"

namespace chronograph::model {

struct ModelConfig {
  int hidden = 32;
  int n_layers = 5;
  int n_heads = 4;
  int n_query = 8;
  double dropout = 0.5;
  std::uint64_t encoder_seed = 7;

  // Ablation switches.
  bool graph_enabled = true;       // off: text only, no fusion, no pair loss
  bool multi_view = true;          // off: time-focused view alone
  bool heterogeneous = true;       // off: all relations share one weight group
  bool text_graph_fusion = true;   // off: H_fuse := H_text
  bool tc_on_fused = true;         // off: pair loss reads the time-focused states
  bool tc_mean = true;             // mean (default) vs summed pair loss

  hgat::GnnConfig gnn() const;
};

// Everything derivable from one document that does not depend on parameters.
struct DocArtifacts {
  corpus::Document doc;
  std::vector<corpus::Chunk> chunks;
  tgraph::MultiViewGraph graph;
  std::vector<tgraph::NodeKind> node_kinds;
  std::vector<int> fact_ids;
  std::vector<std::optional<timex::TimeInterval>> fact_intervals;
  std::vector<timex::PairLabel> pairs;
  encoder::DocLayout layout;
  hgat::GraphAdjacency adj_time;
  hgat::GraphAdjacency adj_fact;
  // Per node: (paragraph, begin, end) token rows to pool; paragraph -1 pools
  // the whole document.
  struct PoolSpan {
    int paragraph = -1;
    int begin = 0;
    int end = 0;
  };
  std::vector<PoolSpan> pool_spans;
  std::shared_ptr<const std::vector<std::pair<int, int>>> fact_spans;    // stacked rows
  std::shared_ptr<const std::vector<std::pair<int, int>>> question_span;
  int n_facts = 0;
  int gold = 0;  // fact index, or n_facts for unanswerable
};

DocArtifacts build_artifacts(const corpus::Document& doc, const ModelConfig& config);

// Gold label derivation: the unique fact satisfying the question's time
// constraint; otherwise the unanswerable marker or an answer-substring match.
int derive_gold(const corpus::Document& doc, const std::vector<corpus::Chunk>& chunks,
                const std::vector<std::optional<timex::TimeInterval>>& fact_intervals);

void init_params(num::ParamStore& store, const ModelConfig& config, std::uint64_t seed);

struct ForwardOutput {
  num::Var loss;
  num::Var task_logits;                 // 1 x (n_facts + 1)
  num::Var tc_logits;                   // defined when pairs exist and graph on
  double task_loss_value = 0.0;
  double tc_loss_value = 0.0;
  int predicted = 0;                    // argmax of task logits
};

// Builds the full loss graph on the tape. Callers that need gradients run
// tape.backward(out.loss) and then params.accumulate().
ForwardOutput model_forward(num::Tape& tape, num::BoundParams& params, const DocArtifacts& art,
                            const ModelConfig& config, double loss_lambda, Rng* dropout_rng,
                            num::ForwardProbe* probe);

// Forward without gradient bookkeeping.
ForwardOutput run_inference(const DocArtifacts& art, num::ParamStore& store,
                            const ModelConfig& config, num::Tape& tape,
                            num::ForwardProbe* probe = nullptr);

}  // namespace chronograph::model
