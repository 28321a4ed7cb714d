#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "lgtbids/error.hpp"
#include "lgtbids/format.hpp"

namespace lgtbids {

enum class NodeKind {
  BS,
  SCA,
  Relay,
  CU,
  D2DDevice,
  Vehicle,
  Sensor,
  SpectrumTx,
  SpectrumRx,
};

constexpr std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::BS: return "BS";
    case NodeKind::SCA: return "SCA";
    case NodeKind::Relay: return "Relay";
    case NodeKind::CU: return "CU";
    case NodeKind::D2DDevice: return "D2DDevice";
    case NodeKind::Vehicle: return "Vehicle";
    case NodeKind::Sensor: return "Sensor";
    case NodeKind::SpectrumTx: return "SpectrumTx";
    case NodeKind::SpectrumRx: return "SpectrumRx";
  }
  return "?";
}

inline std::optional<NodeKind> parse_node_kind(std::string_view s) {
  for (NodeKind k : {NodeKind::BS, NodeKind::SCA, NodeKind::Relay, NodeKind::CU,
                     NodeKind::D2DDevice, NodeKind::Vehicle, NodeKind::Sensor,
                     NodeKind::SpectrumTx, NodeKind::SpectrumRx}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

using NodeId = std::string;

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::CU;
  double tx_power_dbm = 23.0;
  double power_consumption_w = 20.0;  // P_cc
  bool mobile = false;

  bool operator==(const Node&) const = default;
};

/// Directed link from a node in layer m to a node in layer m + 1.
struct Edge {
  NodeId src;
  NodeId dst;
  double distance_m = 1.0;
  std::vector<double> entity_depths_m;  // obstruction depths; may be empty

  bool operator==(const Edge&) const = default;
};

/// Layered view of the cell. Immutable once built; change membership with
/// update_membership(), which returns a new value.
class LayeredTopology {
 public:
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// layers()[0] is L(1) = {BS}; ids inside a layer are sorted.
  const std::vector<std::vector<NodeId>>& layers() const noexcept { return layers_; }
  std::size_t layer_count() const noexcept { return layers_.size(); }

  const NodeId& base_station() const noexcept { return layers_.front().front(); }

  bool contains(const NodeId& id) const { return node_index_.count(id) != 0; }

  const Node& node(const NodeId& id) const { return nodes_[index_of(id)]; }

  /// 1-based layer index; the BS is in layer 1.
  std::size_t layer_of(const NodeId& id) const { return layer_index_[index_of(id)]; }

  /// Inbound edges of `id`, ordered by source id.
  std::vector<const Edge*> inbound_edges(const NodeId& id) const {
    std::vector<const Edge*> out;
    for (std::size_t e : inbound_[index_of(id)]) out.push_back(&edges_[e]);
    return out;
  }

  /// All ids except the BS, in layer order then id order.
  std::vector<NodeId> non_bs_nodes() const {
    std::vector<NodeId> out;
    for (std::size_t l = 1; l < layers_.size(); ++l)
      out.insert(out.end(), layers_[l].begin(), layers_[l].end());
    return out;
  }

  friend LayeredTopology build_topology(std::vector<Node> nodes, std::vector<Edge> edges);

 private:
  std::size_t index_of(const NodeId& id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) throw Error(ErrorCode::UnknownNode, "no node '" + id + "'", {id});
    return it->second;
  }

  std::vector<Node> nodes_;  // sorted by id
  std::vector<Edge> edges_;  // sorted by (src, dst)
  std::map<NodeId, std::size_t> node_index_;
  std::vector<std::size_t> layer_index_;            // per node, 1-based
  std::vector<std::vector<std::size_t>> inbound_;   // per node, edge indices
  std::vector<std::vector<NodeId>> layers_;
};

/// Builds the layered graph: layer of a node = 1 + BFS hop count from the BS
/// along directed edges. Input order does not matter.
inline LayeredTopology build_topology(std::vector<Node> nodes, std::vector<Edge> edges) {
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });

  std::vector<NodeId> bs;
  for (const Node& n : nodes)
    if (n.kind == NodeKind::BS) bs.push_back(n.id);
  if (bs.empty()) throw Error(ErrorCode::NoBaseStation, "topology has no BS node");
  if (bs.size() > 1)
    throw Error(ErrorCode::DuplicateBaseStation, "multiple BS nodes: " + detail::join(bs), bs);

  LayeredTopology t;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.id.empty()) throw Error(ErrorCode::InvalidNode, "node id must not be empty");
    if (!(n.power_consumption_w > 0.0) || !std::isfinite(n.power_consumption_w))
      throw Error(ErrorCode::InvalidNode,
                  "node '" + n.id + "': power_consumption_w must be > 0", {n.id});
    if (!std::isfinite(n.tx_power_dbm))
      throw Error(ErrorCode::InvalidNode, "node '" + n.id + "': tx_power_dbm must be finite",
                  {n.id});
    if (!t.node_index_.emplace(n.id, i).second)
      throw Error(ErrorCode::DuplicateNode, "duplicate node id '" + n.id + "'", {n.id});
  }

  std::vector<std::string> dangling;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    for (const NodeId* end : {&ed.src, &ed.dst})
      if (!t.node_index_.count(*end)) dangling.push_back(*end);
  }
  if (!dangling.empty()) {
    std::sort(dangling.begin(), dangling.end());
    dangling.erase(std::unique(dangling.begin(), dangling.end()), dangling.end());
    throw Error(ErrorCode::DanglingEdge, "edge endpoint(s) not declared: " + detail::join(dangling),
                dangling);
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    const std::string label = ed.src + "->" + ed.dst;
    if (ed.src == ed.dst) throw Error(ErrorCode::InvalidEdge, "self loop " + label, {ed.src});
    if (!(ed.distance_m > 0.0) || !std::isfinite(ed.distance_m))
      throw Error(ErrorCode::InvalidEdge, label + ": distance_m must be > 0", {ed.src, ed.dst});
    for (double w : ed.entity_depths_m)
      if (!(w >= 0.0) || !std::isfinite(w))
        throw Error(ErrorCode::InvalidEdge, label + ": entity depths must be >= 0",
                    {ed.src, ed.dst});
    if (e > 0 && edges[e - 1].src == ed.src && edges[e - 1].dst == ed.dst)
      throw Error(ErrorCode::DuplicateEdge, "duplicate edge " + label, {ed.src, ed.dst});
  }

  const std::size_t n = nodes.size();
  std::vector<std::vector<std::size_t>> out_adj(n);
  t.inbound_.assign(n, {});
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t s = t.node_index_.at(edges[e].src);
    const std::size_t d = t.node_index_.at(edges[e].dst);
    out_adj[s].push_back(d);
    t.inbound_[d].push_back(e);
  }

  constexpr std::size_t unreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> hops(n, unreached);
  const std::size_t root = t.node_index_.at(bs.front());
  hops[root] = 0;
  std::queue<std::size_t> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : out_adj[u]) {
      if (hops[v] == unreached) {
        hops[v] = hops[u] + 1;
        frontier.push(v);
      }
    }
  }

  std::vector<std::string> unreachable;
  for (std::size_t i = 0; i < n; ++i)
    if (hops[i] == unreached) unreachable.push_back(nodes[i].id);
  if (!unreachable.empty())
    throw Error(ErrorCode::UnreachableNode,
                "not reachable from the BS: " + detail::join(unreachable), unreachable);

  std::vector<std::string> bad_edges;
  for (const Edge& ed : edges) {
    const std::size_t hs = hops[t.node_index_.at(ed.src)];
    const std::size_t hd = hops[t.node_index_.at(ed.dst)];
    if (hd != hs + 1)
      bad_edges.push_back(ed.src + "->" + ed.dst + " (layers " + std::to_string(hs + 1) + "->" +
                          std::to_string(hd + 1) + ")");
  }
  if (!bad_edges.empty())
    throw Error(ErrorCode::IntraLayerEdge,
                "edges must join consecutive layers: " + detail::join(bad_edges), bad_edges);

  std::size_t depth = 0;
  for (std::size_t h : hops) depth = std::max(depth, h);
  t.layers_.assign(depth + 1, {});
  t.layer_index_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.layer_index_[i] = hops[i] + 1;
    t.layers_[hops[i]].push_back(nodes[i].id);  // nodes are id-sorted already
  }
  t.nodes_ = std::move(nodes);
  t.edges_ = std::move(edges);
  return t;
}

struct MembershipJoin {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

/// Removes `leaves` (with every incident edge), adds `joins`, and recomputes
/// the layering from scratch. `topo` is left untouched.
inline LayeredTopology update_membership(const LayeredTopology& topo, const MembershipJoin& joins,
                                         const std::vector<NodeId>& leaves) {
  std::set<NodeId> leaving;
  std::vector<std::string> unknown;
  for (const NodeId& id : leaves) {
    if (!topo.contains(id)) unknown.push_back(id);
    leaving.insert(id);
  }
  if (!unknown.empty())
    throw Error(ErrorCode::UnknownLeaveId, "cannot remove unknown node(s): " + detail::join(unknown),
                unknown);

  std::vector<Node> nodes;
  for (const Node& n : topo.nodes())
    if (!leaving.count(n.id)) nodes.push_back(n);
  nodes.insert(nodes.end(), joins.nodes.begin(), joins.nodes.end());

  std::vector<Edge> edges;
  for (const Edge& e : topo.edges())
    if (!leaving.count(e.src) && !leaving.count(e.dst)) edges.push_back(e);
  edges.insert(edges.end(), joins.edges.begin(), joins.edges.end());

  return build_topology(std::move(nodes), std::move(edges));
}

/// The inbound edge a node's link budget is computed on.
struct ParentChoice {
  const Edge* edge = nullptr;
  double capacity_bps = 0.0;
  std::size_t candidates = 0;  // number of inbound edges considered
};

/// Resolves the detection-relevant inbound edge of `id`: the one with the
/// largest capacity as reported by `capacity_of(const Edge&)`. Ties go to the
/// lexicographically smallest source id.
template <typename CapacityFn>
ParentChoice parent_edge(const LayeredTopology& topo, const NodeId& id, CapacityFn&& capacity_of) {
  if (topo.node(id).kind == NodeKind::BS)
    throw Error(ErrorCode::IsBaseStation, "the BS has no parent edge", {id});
  const auto inbound = topo.inbound_edges(id);
  if (inbound.empty())
    throw Error(ErrorCode::NoInboundEdge, "node '" + id + "' has no inbound edge", {id});
  ParentChoice best;
  best.candidates = inbound.size();
  for (const Edge* e : inbound) {  // already ordered by src
    const double c = capacity_of(*e);
    if (best.edge == nullptr || c > best.capacity_bps) {
      best.edge = e;
      best.capacity_bps = c;
    }
  }
  return best;
}

/// One row of the flat edge list used for external plotting.
struct EdgeListRow {
  NodeId src;
  NodeId dst;
  std::size_t src_layer = 0;
  std::size_t dst_layer = 0;
  double distance_m = 0.0;

  bool operator==(const EdgeListRow&) const = default;
};

inline std::vector<EdgeListRow> edge_list_rows(const LayeredTopology& topo) {
  std::vector<EdgeListRow> rows;
  rows.reserve(topo.edges().size());
  for (const Edge& e : topo.edges())
    rows.push_back({e.src, e.dst, topo.layer_of(e.src), topo.layer_of(e.dst), e.distance_m});
  return rows;
}

/// `src,dst,src_layer,dst_layer,distance_m`, rows in (src, dst) order.
inline void write_edge_list(std::ostream& os, const std::vector<EdgeListRow>& rows) {
  os << "src,dst,src_layer,dst_layer,distance_m\n";
  for (const EdgeListRow& r : rows)
    os << r.src << ',' << r.dst << ',' << r.src_layer << ',' << r.dst_layer << ','
       << format_double(r.distance_m) << '\n';
}

inline void write_edge_list(std::ostream& os, const LayeredTopology& topo) {
  write_edge_list(os, edge_list_rows(topo));
}

}  // namespace lgtbids
