#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chronograph/corpus.hpp"
#include "chronograph/timex.hpp"

namespace chronograph::tgraph {

enum class NodeKind { Global, Fact, TimeBefore, TimeAfter, TimeBetween, TimeIn };

enum class EdgeRelation {
  TempBefore,
  TempAfter,
  TempOverlap,
  IntraParaFact,
  InterParaFact,
  FactAggregation,
  TimeToFact,
};

inline constexpr int kNumRelations = 7;

const char* to_string(NodeKind k);
const char* to_string(EdgeRelation r);
NodeKind node_kind_from_string(const std::string& s);
EdgeRelation edge_relation_from_string(const std::string& s);
NodeKind time_kind(timex::TimeXCategory c);

struct GraphNode {
  int id = 0;
  NodeKind kind = NodeKind::Global;
  int chunk = -1;     // -1 for the global node
  int sentence = -1;  // -1 for the global node
  std::optional<timex::TimeXMention> mention;  // time nodes only

  bool is_time() const {
    return kind != NodeKind::Global && kind != NodeKind::Fact;
  }
};

struct Edge {
  int src = 0;
  int dst = 0;
  EdgeRelation rel = EdgeRelation::TimeToFact;
  auto operator<=>(const Edge&) const = default;
};

enum class ViewKind { TimeFocused, FactFocused };

const char* to_string(ViewKind v);

struct HeteroTemporalGraph {
  ViewKind view = ViewKind::TimeFocused;
  std::vector<GraphNode> nodes;
  std::vector<Edge> edges;  // kept sorted by (src, dst, rel)

  int n_facts() const;
  // Fact node ids in node order.
  std::vector<int> fact_ids() const;
  // Per fact (in fact order), the interval of its first time mention.
  std::vector<std::optional<timex::TimeInterval>> fact_intervals() const;
};

struct MultiViewGraph {
  HeteroTemporalGraph time_focused;
  HeteroTemporalGraph fact_focused;
};

// One global node (id 0), one fact node per sentence with >= 1 mention, one
// time node per mention; ids assigned in (chunk, sentence, mention) order.
std::vector<GraphNode> build_nodes(const std::vector<corpus::Chunk>& chunks,
                                   const std::vector<timex::TimeXMention>& mentions);

HeteroTemporalGraph build_time_focused(const std::vector<GraphNode>& nodes,
                                       const std::vector<corpus::Chunk>& chunks);

// Swaps the layers: fact pairs take the temporal relation of their paired
// intervals (keeping the discourse edge when an interval is missing), and
// time pairs take the discourse relation of their chunks.
HeteroTemporalGraph build_fact_focused(const HeteroTemporalGraph& time_focused);

MultiViewGraph build_multiview(const std::vector<corpus::Chunk>& chunks,
                               const std::vector<timex::TimeXMention>& mentions);

// Extracts all mentions from all sentences of all chunks, tagging each with
// its (chunk, sentence) reference.
std::vector<timex::TimeXMention> extract_mentions(const std::vector<corpus::Chunk>& chunks);

std::string to_json(const HeteroTemporalGraph& g);
HeteroTemporalGraph from_json(const std::string& text);

// Equality on the serialized schema (ids, kinds, refs, intervals, edges).
bool structurally_equal(const HeteroTemporalGraph& a, const HeteroTemporalGraph& b);

std::string to_dot(const MultiViewGraph& mv, ViewKind view);

}  // namespace chronograph::tgraph
