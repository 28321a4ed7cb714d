#pragma once

// Hand-rolled generators and brute-force oracles shared by the unit and
// acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lgtbids/lgtbids.hpp"

namespace lgtbids::testing {

inline std::mt19937_64 make_gen(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::size_t pick(std::mt19937_64& g, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(g);
}

/// Topology plus the layer assignment it was generated from.
struct GeneratedGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::map<NodeId, std::size_t> intended_layer;  // 1-based
};

/// Random layered digraph with `max_nodes` vertices at most. Every node in
/// layer k >= 2 gets one inbound edge from layer k-1 plus random extras, so
/// the intended layering is the hop layering. Ids are shuffled relative to
/// layers so id order says nothing about structure.
inline GeneratedGraph random_layered_graph(std::mt19937_64& g, std::size_t max_nodes = 30) {
  GeneratedGraph out;
  const std::size_t n = 2 + pick(g, max_nodes - 1);  // 2..max_nodes
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i;
  std::shuffle(labels.begin(), labels.end(), g);

  const std::size_t layers = 2 + pick(g, std::min<std::size_t>(n - 1, 6));
  std::vector<std::vector<NodeId>> by_layer(layers);
  by_layer[0].push_back("BS");
  out.intended_layer["BS"] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    // the first layers-1 nodes seed every layer so none is empty
    const std::size_t layer = i < layers ? i : 1 + pick(g, layers - 1);
    const NodeId id = "n" + std::to_string(labels[i]);
    by_layer[layer].push_back(id);
    out.intended_layer[id] = layer + 1;
  }
  static const NodeKind kinds[] = {NodeKind::CU, NodeKind::SCA, NodeKind::Relay,
                                   NodeKind::D2DDevice, NodeKind::Vehicle, NodeKind::Sensor};
  out.nodes.push_back({"BS", NodeKind::BS, 30.0, 20.0, false});
  for (std::size_t l = 1; l < layers; ++l) {
    for (const NodeId& id : by_layer[l]) {
      out.nodes.push_back({id, kinds[pick(g, std::size(kinds))], uniform(g, 13.0, 30.0),
                           uniform(g, 0.1, 20.0), pick(g, 2) == 0});
      const auto& prev = by_layer[l - 1];
      std::set<NodeId> srcs{prev[pick(g, prev.size())]};
      for (const NodeId& p : prev)
        if (pick(g, 4) == 0) srcs.insert(p);
      for (const NodeId& s : srcs) {
        std::vector<double> depths;
        for (std::size_t k = pick(g, 3); k > 0; --k) depths.push_back(uniform(g, 0.0, 10.0));
        out.edges.push_back({s, id, uniform(g, 10.0, 250.0), depths});
      }
    }
  }
  std::shuffle(out.nodes.begin(), out.nodes.end(), g);
  std::shuffle(out.edges.begin(), out.edges.end(), g);
  return out;
}

/// Hop layering by repeated relaxation, without a queue: layer(BS) = 1 and
/// layer(v) = 1 + min over inbound u of layer(u). Unreachable nodes map to 0.
inline std::map<NodeId, std::size_t> relaxation_layers(const std::vector<Node>& nodes,
                                                       const std::vector<Edge>& edges) {
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::map<NodeId, std::size_t> d;
  for (const Node& n : nodes) d[n.id] = n.kind == NodeKind::BS ? 1 : inf;
  for (std::size_t round = 0; round < nodes.size(); ++round)
    for (const Edge& e : edges)
      if (d[e.src] != inf) d[e.dst] = std::min(d[e.dst], d[e.src] + 1);
  for (auto& [id, v] : d)
    if (v == inf) v = 0;
  return d;
}

/// Per-layer argmin by full enumeration, ties to the smallest id.
inline std::vector<VulnerableEntry> brute_force_screening(const std::vector<Node>& nodes,
                                                          const std::map<NodeId, std::size_t>& layer,
                                                          const CapacityMap& capacity) {
  std::map<std::size_t, VulnerableEntry> best;
  for (const Node& n : nodes) {
    const std::size_t l = layer.at(n.id);
    if (l < 2) continue;
    const double c = capacity.at(n.id);
    auto it = best.find(l);
    if (it == best.end() || c < it->second.capacity_bps ||
        (c == it->second.capacity_bps && n.id < it->second.node))
      best[l] = {l, n.id, c};
  }
  std::vector<VulnerableEntry> out;
  for (auto& [l, e] : best) out.push_back(e);
  return out;
}

/// Channel parameters drawn from the ranges used across the test suite:
/// mmWave frequencies, 100 MHz..1 GHz bandwidth, exponent 2..4.
inline ChannelParams random_channel(std::mt19937_64& g) {
  ChannelParams p;
  p.frequency_hz = uniform(g, 6e9, 60e9);
  p.bandwidth_hz = uniform(g, 100e6, 1e9);
  p.noise_dbm = uniform(g, -120.0, -90.0);
  p.pathloss_exponent = uniform(g, 2.0, 4.0);
  p.gamma_per_m = uniform(g, 0.0, 0.5);
  return p;
}

inline ConfusionCounts random_counts(std::mt19937_64& g, std::uint64_t max = 1000) {
  std::uniform_int_distribution<std::uint64_t> d(0, max);
  ConfusionCounts c{d(g), d(g), d(g), d(g)};
  if (c.total() == 0) c.tn = 1;
  return c;
}

struct FixtureRow {
  std::string layer;
  std::string node;
  std::string power;
  BoundsEnvelope envelope;  // rates kept in the fixture's units (Gbps, Gbps/W)
  std::string status;
};

/// Reads the envelope fixture. Columns: layer, node, power, SR lower, SR
/// upper, EE lower, EE upper, EE achieved, SR achieved, status. Lines
/// starting with '#' and the header row are skipped.
inline std::vector<FixtureRow> read_envelope_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'", {path});
  std::vector<FixtureRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cols = detail::split_char(line, ',');
    if (cols.size() != 10) throw Error(ErrorCode::SyntaxError, "bad fixture row: " + line);
    auto num = [&](std::size_t i) {
      auto v = parse_double(cols[i]);
      if (!v) throw Error(ErrorCode::SyntaxError, "bad number in fixture row: " + line);
      return *v;
    };
    FixtureRow r;
    r.layer = std::string(cols[0]);
    r.node = std::string(cols[1]);
    r.power = std::string(cols[2]);
    r.envelope.node = r.node;
    r.envelope.secrecy_lower_bps = num(3);
    r.envelope.secrecy_upper_bps = num(4);
    r.envelope.ee_lower = num(5);
    r.envelope.ee_upper = num(6);
    r.envelope.ee_achieved = num(7);
    r.envelope.secrecy_achieved_bps = num(8);
    r.status = std::string(detail::trim(cols[9]));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace lgtbids::testing
