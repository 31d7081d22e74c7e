#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "chronograph/autodiff.hpp"
#include "chronograph/params.hpp"
#include "chronograph/rng.hpp"
#include "chronograph/tgraph.hpp"

namespace chronograph::hgat {

struct GnnConfig {
  int n_layers = 5;
  int n_heads = 4;
  int hidden = 32;
  double dropout = 0.5;
  // Merge map from edge relation to weight group; -1 excludes a relation
  // (a graph containing it is then rejected). The identity map is the full
  // 7-relation taxonomy; an all-zero map is the homogeneous ablation.
  std::array<int, tgraph::kNumRelations> relation_group = {0, 1, 2, 3, 4, 5, 6};

  int n_groups() const;
  void validate() const;
};

GnnConfig homogeneous(GnnConfig config);

// Per-group in-adjacency masks: mask[g](i, j) == 1 iff edge j -> i carries a
// relation in group g. Messages flow along edge direction into row i.
struct GraphAdjacency {
  int n_nodes = 0;
  std::vector<int> groups_present;
  std::vector<std::shared_ptr<const num::Matrix>> group_mask;  // indexed by group
  std::shared_ptr<const std::vector<std::uint8_t>> has_in_edge;
};

GraphAdjacency build_adjacency(const tgraph::HeteroTemporalGraph& graph, const GnnConfig& config);

// Kind-typed linear projection of pooled node vectors: row i of pooled goes
// through the projection of node i's kind.
num::Var init_nodes(num::Var pooled, const std::vector<tgraph::NodeKind>& kinds,
                    num::BoundParams& params, const std::string& prefix);

// One relation-typed attention layer; nodes with no in-edges under any
// relation pass through unchanged.
num::Var hgat_layer(num::Var states, const GraphAdjacency& adj, num::BoundParams& params,
                    const std::string& prefix, const GnnConfig& config, Rng* dropout_rng,
                    num::ForwardProbe* probe);

num::Var run_gnn(num::Var states, const GraphAdjacency& adj, num::BoundParams& params,
                 const std::string& prefix, const GnnConfig& config, Rng* dropout_rng,
                 num::ForwardProbe* probe);

// Parameter registration for one GNN stack (all layers, all groups).
void create_gnn_params(num::ParamStore& store, const std::string& prefix, const GnnConfig& config);
void create_init_params(num::ParamStore& store, const std::string& prefix, int hidden);

std::string kind_param_name(const std::string& prefix, tgraph::NodeKind kind);

}  // namespace chronograph::hgat
