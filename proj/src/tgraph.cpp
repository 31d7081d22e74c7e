#include "chronograph/tgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "chronograph/errors.hpp"
#include "json.hpp"

namespace chronograph::tgraph {

namespace {

using json = nlohmann::ordered_json;
using timex::TemporalRelation;
using timex::TimeInterval;

void add_temporal_pair(std::vector<Edge>& edges, int u, const TimeInterval& iu, int v,
                       const TimeInterval& iv) {
  switch (timex::relation(iu, iv)) {
    case TemporalRelation::Before:
      edges.push_back({u, v, EdgeRelation::TempBefore});
      edges.push_back({v, u, EdgeRelation::TempAfter});
      break;
    case TemporalRelation::After:
      edges.push_back({u, v, EdgeRelation::TempAfter});
      edges.push_back({v, u, EdgeRelation::TempBefore});
      break;
    case TemporalRelation::Overlap:
      edges.push_back({u, v, EdgeRelation::TempOverlap});
      edges.push_back({v, u, EdgeRelation::TempOverlap});
      break;
  }
}

void add_both(std::vector<Edge>& edges, int u, int v, EdgeRelation rel) {
  edges.push_back({u, v, rel});
  edges.push_back({v, u, rel});
}

// First and last entry of an id list; one entry when the list has one element.
std::vector<int> boundary(const std::vector<int>& ids) {
  if (ids.empty()) return {};
  if (ids.size() == 1 || ids.front() == ids.back()) return {ids.front()};
  return {ids.front(), ids.back()};
}

void finalize(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Global: return "global";
    case NodeKind::Fact: return "fact";
    case NodeKind::TimeBefore: return "time-before";
    case NodeKind::TimeAfter: return "time-after";
    case NodeKind::TimeBetween: return "time-between";
    case NodeKind::TimeIn: return "time-in";
  }
  return "?";
}

const char* to_string(EdgeRelation r) {
  switch (r) {
    case EdgeRelation::TempBefore: return "temp-before";
    case EdgeRelation::TempAfter: return "temp-after";
    case EdgeRelation::TempOverlap: return "temp-overlap";
    case EdgeRelation::IntraParaFact: return "intra-para-fact";
    case EdgeRelation::InterParaFact: return "inter-para-fact";
    case EdgeRelation::FactAggregation: return "fact-aggregation";
    case EdgeRelation::TimeToFact: return "time-to-fact";
  }
  return "?";
}

const char* to_string(ViewKind v) {
  return v == ViewKind::TimeFocused ? "time-focused" : "fact-focused";
}

NodeKind node_kind_from_string(const std::string& s) {
  for (NodeKind k : {NodeKind::Global, NodeKind::Fact, NodeKind::TimeBefore,
                     NodeKind::TimeAfter, NodeKind::TimeBetween, NodeKind::TimeIn})
    if (s == to_string(k)) return k;
  throw ValidationError("unknown node kind \"" + s + "\"");
}

EdgeRelation edge_relation_from_string(const std::string& s) {
  for (EdgeRelation r :
       {EdgeRelation::TempBefore, EdgeRelation::TempAfter, EdgeRelation::TempOverlap,
        EdgeRelation::IntraParaFact, EdgeRelation::InterParaFact,
        EdgeRelation::FactAggregation, EdgeRelation::TimeToFact})
    if (s == to_string(r)) return r;
  throw ValidationError("unknown edge relation \"" + s + "\"");
}

NodeKind time_kind(timex::TimeXCategory c) {
  switch (c) {
    case timex::TimeXCategory::In: return NodeKind::TimeIn;
    case timex::TimeXCategory::Between: return NodeKind::TimeBetween;
    case timex::TimeXCategory::Before: return NodeKind::TimeBefore;
    case timex::TimeXCategory::After: return NodeKind::TimeAfter;
  }
  return NodeKind::TimeIn;
}

int HeteroTemporalGraph::n_facts() const {
  int n = 0;
  for (const auto& node : nodes) n += (node.kind == NodeKind::Fact);
  return n;
}

std::vector<int> HeteroTemporalGraph::fact_ids() const {
  std::vector<int> ids;
  for (const auto& node : nodes)
    if (node.kind == NodeKind::Fact) ids.push_back(node.id);
  return ids;
}

std::vector<std::optional<TimeInterval>> HeteroTemporalGraph::fact_intervals() const {
  std::vector<std::optional<TimeInterval>> out;
  for (const auto& node : nodes) {
    if (node.kind != NodeKind::Fact) continue;
    std::optional<TimeInterval> interval;
    for (const auto& t : nodes) {
      if (!t.is_time() || t.chunk != node.chunk || t.sentence != node.sentence) continue;
      if (t.mention.has_value()) {
        interval = t.mention->interval;
        break;  // nodes are in id order; the first paired mention wins
      }
    }
    out.push_back(interval);
  }
  return out;
}

std::vector<timex::TimeXMention> extract_mentions(const std::vector<corpus::Chunk>& chunks) {
  std::vector<timex::TimeXMention> mentions;
  for (const auto& chunk : chunks) {
    for (std::size_t si = 0; si < chunk.sentences.size(); ++si) {
      for (auto& m : timex::extract_timex(chunk.sentences[si].text)) {
        m.chunk = chunk.index;
        m.sentence = static_cast<int>(si);
        mentions.push_back(std::move(m));
      }
    }
  }
  return mentions;
}

std::vector<GraphNode> build_nodes(const std::vector<corpus::Chunk>& chunks,
                                   const std::vector<timex::TimeXMention>& mentions) {
  std::vector<GraphNode> nodes;
  nodes.push_back({0, NodeKind::Global, -1, -1, std::nullopt});
  int next = 1;
  for (const auto& chunk : chunks) {
    for (std::size_t si = 0; si < chunk.sentences.size(); ++si) {
      std::vector<const timex::TimeXMention*> here;
      for (const auto& m : mentions)
        if (m.chunk == chunk.index && m.sentence == static_cast<int>(si)) here.push_back(&m);
      if (here.empty()) continue;
      std::sort(here.begin(), here.end(),
                [](const auto* a, const auto* b) { return a->begin < b->begin; });
      nodes.push_back({next++, NodeKind::Fact, chunk.index, static_cast<int>(si), std::nullopt});
      for (const auto* m : here)
        nodes.push_back({next++, time_kind(m->category), chunk.index, static_cast<int>(si), *m});
    }
  }
  return nodes;
}

HeteroTemporalGraph build_time_focused(const std::vector<GraphNode>& nodes,
                                       const std::vector<corpus::Chunk>& chunks) {
  HeteroTemporalGraph g;
  g.view = ViewKind::TimeFocused;
  g.nodes = nodes;

  const int n_chunks = static_cast<int>(chunks.size());
  std::vector<std::vector<int>> time_in(n_chunks), fact_in(n_chunks);
  std::map<std::pair<int, int>, int> fact_of_sentence;
  for (const auto& node : nodes) {
    if (node.kind == NodeKind::Fact) {
      fact_in[node.chunk].push_back(node.id);
      fact_of_sentence[{node.chunk, node.sentence}] = node.id;
    } else if (node.is_time()) {
      time_in[node.chunk].push_back(node.id);
    }
  }
  auto interval_of = [&](int id) { return g.nodes[id].mention->interval; };

  std::vector<Edge>& edges = g.edges;
  // Temporal layer: dense within a chunk, first/last bridges across adjacent chunks.
  for (int c = 0; c < n_chunks; ++c) {
    const auto& ts = time_in[c];
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j)
        add_temporal_pair(edges, ts[i], interval_of(ts[i]), ts[j], interval_of(ts[j]));
    if (c + 1 < n_chunks)
      for (int u : boundary(time_in[c]))
        for (int v : boundary(time_in[c + 1]))
          add_temporal_pair(edges, u, interval_of(u), v, interval_of(v));
  }
  // Factual layer: same shape with discourse relations.
  for (int c = 0; c < n_chunks; ++c) {
    const auto& fs = fact_in[c];
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j)
        add_both(edges, fs[i], fs[j], EdgeRelation::IntraParaFact);
    if (c + 1 < n_chunks)
      for (int u : boundary(fact_in[c]))
        for (int v : boundary(fact_in[c + 1]))
          add_both(edges, u, v, EdgeRelation::InterParaFact);
  }
  // Cross-layer and aggregation edges.
  for (const auto& node : nodes) {
    if (node.is_time())
      edges.push_back({node.id, fact_of_sentence.at({node.chunk, node.sentence}),
                       EdgeRelation::TimeToFact});
    else if (node.kind == NodeKind::Fact)
      edges.push_back({node.id, 0, EdgeRelation::FactAggregation});
  }
  finalize(edges);
  return g;
}

HeteroTemporalGraph build_fact_focused(const HeteroTemporalGraph& time_focused) {
  HeteroTemporalGraph g;
  g.view = ViewKind::FactFocused;
  g.nodes = time_focused.nodes;

  // Interval of each fact node: its first paired time mention.
  std::map<int, std::optional<TimeInterval>> fact_interval;
  {
    const auto ids = time_focused.fact_ids();
    const auto intervals = time_focused.fact_intervals();
    for (std::size_t i = 0; i < ids.size(); ++i) fact_interval[ids[i]] = intervals[i];
  }

  std::map<std::pair<int, int>, EdgeRelation> fact_pairs;  // discourse-connected, u < v
  std::set<std::pair<int, int>> time_pairs;                // temporally connected, u < v
  std::vector<Edge> edges;
  for (const auto& e : time_focused.edges) {
    switch (e.rel) {
      case EdgeRelation::IntraParaFact:
      case EdgeRelation::InterParaFact:
        fact_pairs[{std::min(e.src, e.dst), std::max(e.src, e.dst)}] = e.rel;
        break;
      case EdgeRelation::TempBefore:
      case EdgeRelation::TempAfter:
      case EdgeRelation::TempOverlap:
        time_pairs.insert({std::min(e.src, e.dst), std::max(e.src, e.dst)});
        break;
      default:
        edges.push_back(e);
        break;
    }
  }

  for (const auto& [pair, rel] : fact_pairs) {
    const auto& iu = fact_interval[pair.first];
    const auto& iv = fact_interval[pair.second];
    if (iu.has_value() && iv.has_value())
      add_temporal_pair(edges, pair.first, *iu, pair.second, *iv);
    else
      add_both(edges, pair.first, pair.second, rel);
  }
  for (const auto& pair : time_pairs) {
    const bool same_chunk =
        g.nodes[pair.first].chunk == g.nodes[pair.second].chunk;
    add_both(edges, pair.first, pair.second,
             same_chunk ? EdgeRelation::IntraParaFact : EdgeRelation::InterParaFact);
  }
  g.edges = std::move(edges);
  finalize(g.edges);
  return g;
}

MultiViewGraph build_multiview(const std::vector<corpus::Chunk>& chunks,
                               const std::vector<timex::TimeXMention>& mentions) {
  MultiViewGraph mv;
  mv.time_focused = build_time_focused(build_nodes(chunks, mentions), chunks);
  mv.fact_focused = build_fact_focused(mv.time_focused);
  return mv;
}

namespace {

json interval_to_json(const TimeInterval& iv) {
  json out = json::array();
  if (iv.start == timex::neg_inf())
    out.push_back("-inf");
  else
    out.push_back(iv.start);
  if (iv.end == timex::pos_inf())
    out.push_back("+inf");
  else
    out.push_back(iv.end);
  return out;
}

double endpoint_from_json(const json& j, bool is_start) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "-inf" && is_start) return timex::neg_inf();
    if (s == "+inf" && !is_start) return timex::pos_inf();
    throw ValidationError("bad interval endpoint \"" + s + "\"");
  }
  if (!j.is_number()) throw ValidationError("bad field \"interval\"");
  return j.get<double>();
}

timex::TimeXCategory category_of_kind(NodeKind k) {
  switch (k) {
    case NodeKind::TimeBefore: return timex::TimeXCategory::Before;
    case NodeKind::TimeAfter: return timex::TimeXCategory::After;
    case NodeKind::TimeBetween: return timex::TimeXCategory::Between;
    default: return timex::TimeXCategory::In;
  }
}

}  // namespace

std::string to_json(const HeteroTemporalGraph& g) {
  json out;
  out["view"] = to_string(g.view);
  out["nodes"] = json::array();
  for (const auto& node : g.nodes) {
    json jn;
    jn["id"] = node.id;
    jn["kind"] = to_string(node.kind);
    jn["chunk"] = node.chunk >= 0 ? json(node.chunk) : json(nullptr);
    jn["sentence"] = node.sentence >= 0 ? json(node.sentence) : json(nullptr);
    jn["interval"] =
        node.mention.has_value() ? interval_to_json(node.mention->interval) : json(nullptr);
    out["nodes"].push_back(std::move(jn));
  }
  out["edges"] = json::array();
  for (const auto& e : g.edges)
    out["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"rel", to_string(e.rel)}});
  return out.dump();
}

HeteroTemporalGraph from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed graph JSON: ") + e.what());
  }
  auto need = [&](const json& obj, const char* field) -> const json& {
    auto it = obj.find(field);
    if (it == obj.end()) throw ValidationError("missing field \"" + std::string(field) + "\"");
    return *it;
  };

  HeteroTemporalGraph g;
  const std::string view = need(j, "view").get<std::string>();
  if (view == to_string(ViewKind::TimeFocused))
    g.view = ViewKind::TimeFocused;
  else if (view == to_string(ViewKind::FactFocused))
    g.view = ViewKind::FactFocused;
  else
    throw ValidationError("bad field \"view\": " + view);

  std::set<int> ids;
  for (const auto& jn : need(j, "nodes")) {
    GraphNode node;
    node.id = need(jn, "id").get<int>();
    node.kind = node_kind_from_string(need(jn, "kind").get<std::string>());
    const json& chunk = need(jn, "chunk");
    node.chunk = chunk.is_null() ? -1 : chunk.get<int>();
    const json& sentence = need(jn, "sentence");
    node.sentence = sentence.is_null() ? -1 : sentence.get<int>();
    const json& interval = need(jn, "interval");
    if (!interval.is_null()) {
      if (!interval.is_array() || interval.size() != 2)
        throw ValidationError("bad field \"interval\"");
      timex::TimeXMention m;
      m.interval = {endpoint_from_json(interval[0], true), endpoint_from_json(interval[1], false)};
      m.category = category_of_kind(node.kind);
      node.mention = std::move(m);
    }
    if (node.is_time() && !node.mention.has_value())
      throw ValidationError("time node " + std::to_string(node.id) + " missing \"interval\"");
    if (!ids.insert(node.id).second)
      throw ValidationError("duplicate node id " + std::to_string(node.id));
    g.nodes.push_back(std::move(node));
  }
  for (const auto& je : need(j, "edges")) {
    Edge e;
    e.src = need(je, "src").get<int>();
    e.dst = need(je, "dst").get<int>();
    e.rel = edge_relation_from_string(need(je, "rel").get<std::string>());
    if (!ids.count(e.src) || !ids.count(e.dst))
      throw ValidationError("edge references unknown node id " +
                            std::to_string(ids.count(e.src) ? e.dst : e.src));
    g.edges.push_back(e);
  }
  return g;
}

bool structurally_equal(const HeteroTemporalGraph& a, const HeteroTemporalGraph& b) {
  if (a.view != b.view || a.nodes.size() != b.nodes.size() || a.edges != b.edges) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const auto& x = a.nodes[i];
    const auto& y = b.nodes[i];
    if (x.id != y.id || x.kind != y.kind || x.chunk != y.chunk || x.sentence != y.sentence)
      return false;
    if (x.mention.has_value() != y.mention.has_value()) return false;
    if (x.mention.has_value() && !(x.mention->interval == y.mention->interval)) return false;
  }
  return true;
}

namespace {

std::string dot_interval(const TimeInterval& iv) {
  std::ostringstream os;
  os << "[";
  if (iv.start == timex::neg_inf())
    os << "-inf";
  else
    os << iv.start;
  os << ", ";
  if (iv.end == timex::pos_inf())
    os << "+inf";
  else
    os << iv.end;
  os << "]";
  return os.str();
}

const char* dot_edge_label(EdgeRelation r) {
  switch (r) {
    case EdgeRelation::TempBefore: return "before";
    case EdgeRelation::TempAfter: return "after";
    case EdgeRelation::TempOverlap: return "overlap";
    case EdgeRelation::IntraParaFact: return "intra";
    case EdgeRelation::InterParaFact: return "inter";
    case EdgeRelation::FactAggregation: return "aggr";
    case EdgeRelation::TimeToFact: return "time-fact";
  }
  return "?";
}

const char* dot_edge_style(EdgeRelation r) {
  switch (r) {
    case EdgeRelation::IntraParaFact:
    case EdgeRelation::InterParaFact: return "dashed";
    case EdgeRelation::FactAggregation: return "dotted";
    default: return "solid";
  }
}

}  // namespace

std::string to_dot(const MultiViewGraph& mv, ViewKind view) {
  const HeteroTemporalGraph& g =
      view == ViewKind::TimeFocused ? mv.time_focused : mv.fact_focused;
  std::ostringstream os;
  os << "digraph \"" << to_string(g.view) << "\" {\n";
  os << "  rankdir=LR;\n";
  for (const auto& node : g.nodes) {
    os << "  n" << node.id << " [label=\"";
    if (node.kind == NodeKind::Global) {
      os << "global\" shape=doublecircle";
    } else if (node.kind == NodeKind::Fact) {
      os << "fact c" << node.chunk << " s" << node.sentence << "\" shape=box";
    } else {
      os << to_string(node.kind) + 5 /* strip "time-" */ << " "
         << dot_interval(node.mention->interval) << "\" shape=ellipse";
    }
    os << "];\n";
  }
  for (const auto& e : g.edges)
    os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << dot_edge_label(e.rel)
       << "\" style=" << dot_edge_style(e.rel) << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace chronograph::tgraph
