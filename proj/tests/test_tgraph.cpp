#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "chronograph/corpus.hpp"
#include "chronograph/errors.hpp"
#include "chronograph/tgraph.hpp"

using namespace chronograph;
using tgraph::Edge;
using tgraph::EdgeRelation;
using tgraph::HeteroTemporalGraph;
using tgraph::NodeKind;

namespace {

corpus::Document two_fact_doc() {
  corpus::Document d;
  d.id = "fixture";
  d.title = "Fixture";
  d.paragraphs = {{"Career",
                   "She led the lab between 1923 and 1924. She taught between 1980 and March "
                   "1988."}};
  d.question = "Which lab did she lead in 1923?";
  d.answers = {"the lab"};
  return d;
}

struct Built {
  std::vector<corpus::Chunk> chunks;
  std::vector<timex::TimeXMention> mentions;
  tgraph::MultiViewGraph mv;
};

Built build(const corpus::Document& d) {
  Built b;
  b.chunks = corpus::segment(d);
  b.mentions = tgraph::extract_mentions(b.chunks);
  b.mv = tgraph::build_multiview(b.chunks, b.mentions);
  return b;
}

int count_edges(const HeteroTemporalGraph& g, EdgeRelation rel) {
  int n = 0;
  for (const auto& e : g.edges) n += (e.rel == rel);
  return n;
}

bool has_edge(const HeteroTemporalGraph& g, int src, int dst, EdgeRelation rel) {
  return std::find(g.edges.begin(), g.edges.end(), Edge{src, dst, rel}) != g.edges.end();
}

}  // namespace

TEST_CASE("build_nodes emits global, fact and time nodes in order") {
  const auto b = build(two_fact_doc());
  const auto nodes = tgraph::build_nodes(b.chunks, b.mentions);
  REQUIRE(nodes.size() == 5);  // 1 global + 2 facts + 2 times
  CHECK(nodes[0].kind == NodeKind::Global);
  CHECK(nodes[1].kind == NodeKind::Fact);
  CHECK(nodes[2].kind == NodeKind::TimeBetween);
  CHECK(nodes[3].kind == NodeKind::Fact);
  CHECK(nodes[4].kind == NodeKind::TimeBetween);
  for (int i = 0; i < 5; ++i) CHECK(nodes[i].id == i);
  CHECK(nodes[2].mention.has_value());
  CHECK(nodes[2].chunk == 0);
  CHECK(nodes[2].sentence == 0);
}

TEST_CASE("build_nodes degenerate inputs") {
  corpus::Document d = two_fact_doc();
  d.paragraphs = {{"H", "Nothing dated here. Still nothing."}};
  const auto b = build(d);
  const auto nodes = tgraph::build_nodes(b.chunks, b.mentions);
  REQUIRE(nodes.size() == 1);
  CHECK(nodes[0].kind == NodeKind::Global);

  // Two mentions in one sentence share a fact node.
  d.paragraphs = {{"H", "He served from 1950 to 1955 and again between 1960 and 1961."}};
  const auto b2 = build(d);
  const auto nodes2 = tgraph::build_nodes(b2.chunks, b2.mentions);
  REQUIRE(nodes2.size() == 4);  // global + 1 fact + 2 times
  CHECK(nodes2[1].kind == NodeKind::Fact);
  CHECK(nodes2[2].kind == NodeKind::TimeBetween);
  CHECK(nodes2[3].kind == NodeKind::TimeBetween);
}

TEST_CASE("time-focused edges: temporal pairs, discourse pairs, cross-layer") {
  const auto b = build(two_fact_doc());
  const auto& g = b.mv.time_focused;
  REQUIRE(g.nodes.size() == 5);
  // Intervals [1923, 1924] and [1980, 1988.25]: before/after pair on time nodes.
  CHECK(has_edge(g, 2, 4, EdgeRelation::TempBefore));
  CHECK(has_edge(g, 4, 2, EdgeRelation::TempAfter));
  // Dense intra-chunk fact edges, both directions.
  CHECK(has_edge(g, 1, 3, EdgeRelation::IntraParaFact));
  CHECK(has_edge(g, 3, 1, EdgeRelation::IntraParaFact));
  // Time-to-fact edges point time -> fact.
  CHECK(has_edge(g, 2, 1, EdgeRelation::TimeToFact));
  CHECK(has_edge(g, 4, 3, EdgeRelation::TimeToFact));
  CHECK(count_edges(g, EdgeRelation::TimeToFact) == 2);
  // Every fact aggregates into the global node.
  CHECK(has_edge(g, 1, 0, EdgeRelation::FactAggregation));
  CHECK(has_edge(g, 3, 0, EdgeRelation::FactAggregation));
  CHECK(count_edges(g, EdgeRelation::FactAggregation) == g.n_facts());
}

TEST_CASE("three facts in one chunk form six intra-para edges") {
  corpus::Document d = two_fact_doc();
  d.paragraphs = {{"H",
                   "A was x in 1950. B was y in 1960. C was z in 1970."}};
  const auto b = build(d);
  CHECK(count_edges(b.mv.time_focused, EdgeRelation::IntraParaFact) == 6);
}

TEST_CASE("single fact graphs have only cross-layer and aggregation edges") {
  corpus::Document d = two_fact_doc();
  d.paragraphs = {{"H", "A was x in 1950."}};
  const auto b = build(d);
  const auto& g = b.mv.time_focused;
  CHECK(g.edges.size() == 2);
  CHECK(count_edges(g, EdgeRelation::TimeToFact) == 1);
  CHECK(count_edges(g, EdgeRelation::FactAggregation) == 1);
}

TEST_CASE("fact-focused view swaps the layers") {
  const auto b = build(two_fact_doc());
  const auto& f = b.mv.fact_focused;
  // Fact pair with intervals [1923,1924] / [1980,1988.25] becomes before/after.
  CHECK(has_edge(f, 1, 3, EdgeRelation::TempBefore));
  CHECK(has_edge(f, 3, 1, EdgeRelation::TempAfter));
  CHECK_FALSE(has_edge(f, 1, 3, EdgeRelation::IntraParaFact));
  // Time pair in the same chunk becomes bidirectional discourse.
  CHECK(has_edge(f, 2, 4, EdgeRelation::IntraParaFact));
  CHECK(has_edge(f, 4, 2, EdgeRelation::IntraParaFact));
  CHECK_FALSE(has_edge(f, 2, 4, EdgeRelation::TempBefore));
  // Cross-layer edges unchanged.
  CHECK(has_edge(f, 2, 1, EdgeRelation::TimeToFact));
  CHECK(count_edges(f, EdgeRelation::FactAggregation) == 2);
  // Node lists identical across views.
  REQUIRE(b.mv.time_focused.nodes.size() == f.nodes.size());
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    CHECK(b.mv.time_focused.nodes[i].id == f.nodes[i].id);
    CHECK(b.mv.time_focused.nodes[i].kind == f.nodes[i].kind);
  }
}

TEST_CASE("fact-focused view keeps the graph unchanged when nothing can swap") {
  corpus::Document d = two_fact_doc();
  d.paragraphs = {{"H", "A was x in 1950."}};
  const auto b = build(d);
  CHECK(b.mv.time_focused.edges == b.mv.fact_focused.edges);
}

TEST_CASE("facts without intervals keep their discourse edges") {
  // Hand-built node set: two facts, only one carries a time mention.
  corpus::Document d = two_fact_doc();
  d.paragraphs = {{"H", "A was x in 1950. B kept working in 1960."}};
  auto b = build(d);
  // Remove the second sentence's mention to simulate a fact without TimeX.
  // (Build nodes manually: a fact node without a paired time node.)
  std::vector<tgraph::GraphNode> nodes = tgraph::build_nodes(b.chunks, b.mentions);
  REQUIRE(nodes.size() == 5);
  nodes.erase(nodes.begin() + 4);  // drop the second time node
  auto g = tgraph::build_time_focused(nodes, b.chunks);
  const auto f = tgraph::build_fact_focused(g);
  CHECK(has_edge(f, 1, 3, EdgeRelation::IntraParaFact));
  CHECK(has_edge(f, 3, 1, EdgeRelation::IntraParaFact));
}

TEST_CASE("cross-chunk edges connect boundary nodes of adjacent chunks") {
  corpus::Document d = two_fact_doc();
  d.paragraphs = {{"A", "P was a in 1950. Q was b in 1955. R was c in 1958."},
                  {"B", "S was d in 1960. T was e in 1965. U was f in 1970."},
                  {"C", "V was g in 1980."}};
  const auto b = build(d);
  const auto& g = b.mv.time_focused;
  // Chunk A facts: 1, 3, 5 (boundary 1 and 5); chunk B facts: 7, 9, 11; chunk C: 13.
  CHECK(has_edge(g, 1, 7, EdgeRelation::InterParaFact));
  CHECK(has_edge(g, 1, 11, EdgeRelation::InterParaFact));
  CHECK(has_edge(g, 5, 7, EdgeRelation::InterParaFact));
  CHECK(has_edge(g, 5, 11, EdgeRelation::InterParaFact));
  CHECK(has_edge(g, 7, 1, EdgeRelation::InterParaFact));
  // Non-adjacent chunks are not connected.
  CHECK_FALSE(has_edge(g, 1, 13, EdgeRelation::InterParaFact));
  // Middle fact of a 3-fact chunk is not a boundary node.
  CHECK_FALSE(has_edge(g, 3, 7, EdgeRelation::InterParaFact));
  // 2 boundary x 2 boundary for A-B, 2 x 1 for B-C, both directions.
  CHECK(count_edges(g, EdgeRelation::InterParaFact) == 2 * (4 + 2));
}

TEST_CASE("temporal edges appear in inverse pairs") {
  const auto docs = corpus::gen_synthetic(5, 12, corpus::SynthConfig{});
  for (const auto& doc : docs) {
    const auto b = build(doc);
    for (const auto& g : {b.mv.time_focused, b.mv.fact_focused}) {
      for (const auto& e : g.edges) {
        if (e.rel == EdgeRelation::TempBefore)
          CHECK(has_edge(g, e.dst, e.src, EdgeRelation::TempAfter));
        if (e.rel == EdgeRelation::TempAfter)
          CHECK(has_edge(g, e.dst, e.src, EdgeRelation::TempBefore));
        if (e.rel == EdgeRelation::TempOverlap)
          CHECK(has_edge(g, e.dst, e.src, EdgeRelation::TempOverlap));
        if (e.rel == EdgeRelation::IntraParaFact || e.rel == EdgeRelation::InterParaFact)
          CHECK(has_edge(g, e.dst, e.src, e.rel));
        if (e.rel == EdgeRelation::FactAggregation) CHECK(e.dst == 0);
        if (e.rel == EdgeRelation::TimeToFact) {
          CHECK(g.nodes[e.src].is_time());
          CHECK(g.nodes[e.dst].kind == NodeKind::Fact);
          CHECK(g.nodes[e.src].chunk == g.nodes[e.dst].chunk);
          CHECK(g.nodes[e.src].sentence == g.nodes[e.dst].sentence);
        }
      }
    }
  }
}

TEST_CASE("JSON round-trip is the identity and deterministic") {
  const auto b = build(two_fact_doc());
  const std::string text = tgraph::to_json(b.mv.time_focused);
  CHECK(text == tgraph::to_json(b.mv.time_focused));
  const auto back = tgraph::from_json(text);
  CHECK(tgraph::structurally_equal(b.mv.time_focused, back));
  CHECK(tgraph::to_json(back) == text);
}

TEST_CASE("from_json rejects schema violations") {
  CHECK_THROWS_AS(tgraph::from_json("{"), ValidationError);
  // Edge referencing an unknown node id.
  const std::string bad =
      R"({"view":"time-focused","nodes":[{"id":0,"kind":"global","chunk":null,)"
      R"("sentence":null,"interval":null}],"edges":[{"src":0,"dst":7,"rel":"time-to-fact"}]})";
  CHECK_THROWS_AS(tgraph::from_json(bad), ValidationError);
  try {
    tgraph::from_json(
        R"({"view":"time-focused","nodes":[{"id":0,"kind":"global","chunk":null,)"
        R"("sentence":null}],"edges":[]})");
    FAIL("expected error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("interval") != std::string::npos);
  }
}

TEST_CASE("DOT export has one statement per node and labelled edges") {
  const auto b = build(two_fact_doc());
  const std::string dot = tgraph::to_dot(b.mv, tgraph::ViewKind::TimeFocused);
  std::size_t node_statements = 0, at = 0;
  while ((at = dot.find("shape=", at)) != std::string::npos) {
    ++node_statements;
    ++at;
  }
  CHECK(node_statements == b.mv.time_focused.nodes.size());
  CHECK(dot.find("label=\"before\"") != std::string::npos);
  CHECK(dot == tgraph::to_dot(b.mv, tgraph::ViewKind::TimeFocused));
  CHECK(tgraph::to_dot(b.mv, tgraph::ViewKind::FactFocused).find("fact-focused") !=
        std::string::npos);
}
