#include "chronograph/hgat.hpp"

#include <algorithm>
#include <set>

#include "chronograph/errors.hpp"

namespace chronograph::hgat {

using num::Matrix;
using num::Var;

int GnnConfig::n_groups() const {
  int mx = -1;
  for (int g : relation_group) mx = std::max(mx, g);
  return mx + 1;
}

void GnnConfig::validate() const {
  if (n_layers < 1) throw ValidationError("n_layers must be >= 1");
  if (hidden < 1 || n_heads < 1 || hidden % n_heads != 0)
    throw ValidationError("hidden must be divisible by n_heads");
  if (dropout < 0.0 || dropout >= 1.0) throw ValidationError("dropout must be in [0, 1)");
}

GnnConfig homogeneous(GnnConfig config) {
  config.relation_group.fill(0);
  return config;
}

GraphAdjacency build_adjacency(const tgraph::HeteroTemporalGraph& graph,
                               const GnnConfig& config) {
  GraphAdjacency adj;
  adj.n_nodes = static_cast<int>(graph.nodes.size());
  const int n_groups = config.n_groups();
  std::vector<Matrix> masks(n_groups, Matrix::Zero(adj.n_nodes, adj.n_nodes));
  auto has_in = std::make_shared<std::vector<std::uint8_t>>(adj.n_nodes, 0);
  std::set<int> present;
  for (const auto& e : graph.edges) {
    const int g = config.relation_group[static_cast<int>(e.rel)];
    if (g < 0)
      throw ValidationError(std::string("relation \"") + tgraph::to_string(e.rel) +
                            "\" not in the configured relation set");
    masks[g](e.dst, e.src) = 1.0;  // message src -> dst lands in row dst
    (*has_in)[e.dst] = 1;
    present.insert(g);
  }
  adj.group_mask.resize(n_groups);
  for (int g : present) {
    adj.group_mask[g] = std::make_shared<const Matrix>(std::move(masks[g]));
    adj.groups_present.push_back(g);
  }
  adj.has_in_edge = std::move(has_in);
  return adj;
}

std::string kind_param_name(const std::string& prefix, tgraph::NodeKind kind) {
  return prefix + ".w." + tgraph::to_string(kind);
}

void create_init_params(num::ParamStore& store, const std::string& prefix, int hidden) {
  for (tgraph::NodeKind kind :
       {tgraph::NodeKind::Global, tgraph::NodeKind::Fact, tgraph::NodeKind::TimeBefore,
        tgraph::NodeKind::TimeAfter, tgraph::NodeKind::TimeBetween, tgraph::NodeKind::TimeIn})
    store.create(kind_param_name(prefix, kind), hidden, hidden);
}

void create_gnn_params(num::ParamStore& store, const std::string& prefix,
                       const GnnConfig& config) {
  for (int layer = 0; layer < config.n_layers; ++layer) {
    for (int g = 0; g < config.n_groups(); ++g) {
      const std::string base =
          prefix + ".l" + std::to_string(layer) + ".r" + std::to_string(g);
      store.create(base + ".w", config.hidden, config.hidden);
      store.create(base + ".wq", config.hidden, config.hidden);
      store.create(base + ".wk", config.hidden, config.hidden);
    }
  }
}

Var init_nodes(Var pooled, const std::vector<tgraph::NodeKind>& kinds, num::BoundParams& params,
               const std::string& prefix) {
  const int n = pooled.rows();
  const int h = pooled.cols();
  if (static_cast<int>(kinds.size()) != n) throw ValidationError("kind list size mismatch");

  Var out{};
  for (tgraph::NodeKind kind :
       {tgraph::NodeKind::Global, tgraph::NodeKind::Fact, tgraph::NodeKind::TimeBefore,
        tgraph::NodeKind::TimeAfter, tgraph::NodeKind::TimeBetween, tgraph::NodeKind::TimeIn}) {
    auto mask = std::make_shared<Matrix>(Matrix::Zero(n, h));
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (kinds[i] == kind) {
        mask->row(i).setOnes();
        any = true;
      }
    }
    if (!any) continue;
    Var term = num::matmul(num::mul_mask(pooled, mask), params[kind_param_name(prefix, kind)]);
    out = out.defined() ? num::add(out, term) : term;
  }
  return out;
}

Var hgat_layer(Var states, const GraphAdjacency& adj, num::BoundParams& params,
               const std::string& prefix, const GnnConfig& config, Rng* dropout_rng,
               num::ForwardProbe* probe) {
  if (states.rows() != adj.n_nodes) throw ValidationError("state/graph size mismatch");

  Var agg{};
  for (int g : adj.groups_present) {
    const std::string base = prefix + ".r" + std::to_string(g);
    Var o = num::matmul(states, params[base + ".w"]);
    Var q = num::matmul(o, params[base + ".wq"]);
    Var k = num::matmul(o, params[base + ".wk"]);

    std::shared_ptr<const std::vector<Matrix>> dropout;
    if (dropout_rng && config.dropout > 0.0) {
      auto masks = std::make_shared<std::vector<Matrix>>();
      const double keep = 1.0 - config.dropout;
      for (int head = 0; head < config.n_heads; ++head) {
        Matrix d(adj.n_nodes, adj.n_nodes);
        for (Eigen::Index i = 0; i < d.rows(); ++i)
          for (Eigen::Index j = 0; j < d.cols(); ++j)
            d(i, j) = dropout_rng->chance(keep) ? 1.0 / keep : 0.0;
        masks->push_back(std::move(d));
      }
      dropout = std::move(masks);
    }
    // Raw scores are the plain dot products; no 1/sqrt(d) factor here.
    Var z = num::multihead_attention(q, k, o, config.n_heads, 1.0, adj.group_mask[g],
                                     dropout, probe);
    agg = agg.defined() ? num::add(agg, z) : z;
  }
  if (!agg.defined()) return states;  // no edges at all
  Var activated = num::elu(agg);
  return num::where_rows(adj.has_in_edge, activated, states);
}

Var run_gnn(Var states, const GraphAdjacency& adj, num::BoundParams& params,
            const std::string& prefix, const GnnConfig& config, Rng* dropout_rng,
            num::ForwardProbe* probe) {
  Var v = states;
  for (int layer = 0; layer < config.n_layers; ++layer)
    v = hgat_layer(v, adj, params, prefix + ".l" + std::to_string(layer), config, dropout_rng,
                   probe);
  return v;
}

}  // namespace chronograph::hgat
