#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

namespace lgtbids {
namespace {

Node node(const std::string& id, NodeKind k = NodeKind::CU, bool mobile = false) {
  return {id, k, 23.0, 1.0, mobile};
}
Node bs() { return {"BS", NodeKind::BS, 30.0, 20.0, false}; }
Edge edge(const std::string& s, const std::string& d, double m = 50.0) { return {s, d, m, {}}; }

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TEST(Topology, LayersFollowHopCount) {
  const auto t = build_topology({bs(), node("a"), node("b"), node("c")},
                                {edge("BS", "a"), edge("BS", "b"), edge("a", "c")});
  ASSERT_EQ(t.layer_count(), 3u);
  EXPECT_EQ(t.layers()[0], std::vector<NodeId>{"BS"});
  EXPECT_EQ(t.layers()[1], (std::vector<NodeId>{"a", "b"}));
  EXPECT_EQ(t.layers()[2], std::vector<NodeId>{"c"});
  EXPECT_EQ(t.layer_of("c"), 3u);
  EXPECT_EQ(t.base_station(), "BS");
  EXPECT_EQ(t.non_bs_nodes(), (std::vector<NodeId>{"a", "b", "c"}));
}

TEST(Topology, LayerMembersAreIdSortedRegardlessOfInputOrder) {
  const auto t = build_topology({node("z"), bs(), node("m"), node("a")},
                                {edge("BS", "z"), edge("BS", "a"), edge("BS", "m")});
  EXPECT_EQ(t.layers()[1], (std::vector<NodeId>{"a", "m", "z"}));
}

TEST(Topology, BaseStationCountIsChecked) {
  EXPECT_EQ(code_of([] { build_topology({node("a")}, {}); }), ErrorCode::NoBaseStation);
  EXPECT_EQ(code_of([] {
              build_topology({bs(), Node{"BS2", NodeKind::BS, 30, 1, false}}, {});
            }),
            ErrorCode::DuplicateBaseStation);
}

TEST(Topology, StructuralErrors) {
  EXPECT_EQ(code_of([] { build_topology({bs(), node("a"), node("a")}, {edge("BS", "a")}); }),
            ErrorCode::DuplicateNode);
  EXPECT_EQ(code_of([] { build_topology({bs(), node("a")}, {edge("BS", "a"), edge("BS", "a")}); }),
            ErrorCode::DuplicateEdge);
  EXPECT_EQ(code_of([] { build_topology({bs(), node("a")}, {edge("BS", "ghost")}); }),
            ErrorCode::DanglingEdge);
  EXPECT_EQ(code_of([] { build_topology({bs(), node("a")}, {edge("BS", "a", 0.0)}); }),
            ErrorCode::InvalidEdge);
  EXPECT_EQ(code_of([] { build_topology({bs(), node("a")}, {edge("BS", "a"), edge("a", "a")}); }),
            ErrorCode::InvalidEdge);
}

TEST(Topology, UnreachableNodesAreListed) {
  try {
    build_topology({bs(), node("a"), node("y"), node("x")}, {edge("BS", "a"), edge("y", "x")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnreachableNode);
    EXPECT_EQ(e.subjects(), (std::vector<std::string>{"x", "y"}));
  }
}

TEST(Topology, EdgesMustJoinConsecutiveLayers) {
  // a and b both sit in layer 2
  EXPECT_EQ(code_of([] {
              build_topology({bs(), node("a"), node("b")},
                             {edge("BS", "a"), edge("BS", "b"), edge("a", "b")});
            }),
            ErrorCode::IntraLayerEdge);
  // back edge from layer 3 to layer 2
  EXPECT_EQ(code_of([] {
              build_topology({bs(), node("a"), node("c")},
                             {edge("BS", "a"), edge("a", "c"), edge("c", "a")});
            }),
            ErrorCode::IntraLayerEdge);
}

TEST(Topology, MembershipUpdateRelayers) {
  const auto t = build_topology({bs(), node("a"), node("b"), node("c")},
                                {edge("BS", "a"), edge("a", "b"), edge("b", "c")});
  ASSERT_EQ(t.layer_of("c"), 4u);
  MembershipJoin j{{node("d")}, {edge("BS", "d"), edge("d", "c")}};
  const auto u = update_membership(t, j, {"b"});
  EXPECT_FALSE(u.contains("b"));
  EXPECT_EQ(u.layer_of("c"), 3u);
  EXPECT_EQ(t.layer_of("c"), 4u);  // original untouched
}

TEST(Topology, MembershipUpdateRejectsUnknownLeaves) {
  const auto t = build_topology({bs(), node("a")}, {edge("BS", "a")});
  EXPECT_EQ(code_of([&] { update_membership(t, {}, {"nope"}); }), ErrorCode::UnknownLeaveId);
}

TEST(Topology, LeavingNodeCanStrandOthers) {
  const auto t = build_topology({bs(), node("a"), node("b")}, {edge("BS", "a"), edge("a", "b")});
  EXPECT_EQ(code_of([&] { update_membership(t, {}, {"a"}); }), ErrorCode::UnreachableNode);
}

TEST(Topology, ParentEdgePicksMaxCapacityWithIdTieBreak) {
  const auto t = build_topology({bs(), node("p"), node("q"), node("r"), node("x")},
                                {edge("BS", "p"), edge("BS", "q"), edge("BS", "r"),
                                 edge("r", "x", 10), edge("q", "x", 20), edge("p", "x", 30)});
  const auto by_distance = parent_edge(t, "x", [](const Edge& e) { return e.distance_m; });
  EXPECT_EQ(by_distance.edge->src, "p");
  EXPECT_EQ(by_distance.candidates, 3u);
  const auto tie = parent_edge(t, "x", [](const Edge&) { return 1.0; });
  EXPECT_EQ(tie.edge->src, "p");
  const auto tie_qr = parent_edge(t, "x", [](const Edge& e) { return e.src == "p" ? 0.0 : 5.0; });
  EXPECT_EQ(tie_qr.edge->src, "q");
  EXPECT_EQ(code_of([&] { parent_edge(t, "BS", [](const Edge&) { return 0.0; }); }),
            ErrorCode::IsBaseStation);
}

TEST(Topology, EdgeListHasFixedHeader) {
  const auto t = build_topology({bs(), node("a")}, {edge("BS", "a", 12.5)});
  std::ostringstream os;
  write_edge_list(os, t);
  EXPECT_EQ(os.str(), "src,dst,src_layer,dst_layer,distance_m\nBS,a,1,2,12.5\n");
}

TEST(TopologyProperty, LayeringMatchesRelaxationOracle) {
  auto g = testing::make_gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto graph = testing::random_layered_graph(g);
    const auto t = build_topology(graph.nodes, graph.edges);
    const auto oracle = testing::relaxation_layers(graph.nodes, graph.edges);
    for (const Node& n : graph.nodes) {
      EXPECT_EQ(t.layer_of(n.id), oracle.at(n.id)) << n.id;
      EXPECT_EQ(t.layer_of(n.id), graph.intended_layer.at(n.id)) << n.id;
    }
    for (const Edge& e : t.edges()) EXPECT_EQ(t.layer_of(e.dst), t.layer_of(e.src) + 1);
    std::size_t members = 0;
    for (const auto& layer : t.layers()) {
      EXPECT_FALSE(layer.empty());
      EXPECT_TRUE(std::is_sorted(layer.begin(), layer.end()));
      members += layer.size();
    }
    EXPECT_EQ(members, graph.nodes.size());
  }
}

TEST(TopologyProperty, InputOrderDoesNotMatter) {
  auto g = testing::make_gen(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto graph = testing::random_layered_graph(g);
    const auto a = build_topology(graph.nodes, graph.edges);
    std::reverse(graph.nodes.begin(), graph.nodes.end());
    std::reverse(graph.edges.begin(), graph.edges.end());
    const auto b = build_topology(graph.nodes, graph.edges);
    EXPECT_EQ(a.layers(), b.layers());
    EXPECT_EQ(a.edges(), b.edges());
  }
}

}  // namespace
}  // namespace lgtbids
