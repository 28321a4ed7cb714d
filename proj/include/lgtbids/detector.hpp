#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lgtbids/attack.hpp"
#include "lgtbids/channel.hpp"
#include "lgtbids/error.hpp"
#include "lgtbids/rng.hpp"
#include "lgtbids/topology.hpp"

namespace lgtbids {

// ---------------------------------------------------------------------------
// Preliminary screening
// ---------------------------------------------------------------------------

struct VulnerableEntry {
  std::size_t layer = 0;  // >= 2
  NodeId node;
  double capacity_bps = 0.0;

  bool operator==(const VulnerableEntry&) const = default;
};

/// One minimum-capacity node per populated layer k >= 2, in layer order.
struct ScreeningResult {
  std::vector<VulnerableEntry> per_layer_vulnerable;

  bool operator==(const ScreeningResult&) const = default;
};

using CapacityMap = std::map<NodeId, double>;

inline CapacityMap achieved_capacities(const EnvelopeMap& envelopes) {
  CapacityMap out;
  for (const auto& [id, env] : envelopes) out.emplace_hint(out.end(), id, env.capacity_achieved_bps);
  return out;
}

inline CapacityMap achieved_capacities(const std::map<NodeId, LinkBudget>& budgets) {
  CapacityMap out;
  for (const auto& [id, b] : budgets) out.emplace_hint(out.end(), id, b.capacity_bps);
  return out;
}

/// Runs `fn(layer_index)` for layers 2..l, on up to `threads` workers, and
/// returns results in layer order.
template <typename Fn>
auto for_each_layer(std::size_t layer_count, unsigned threads, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> results;
  if (layer_count < 2) return results;
  const std::size_t jobs = layer_count - 1;
  results.resize(jobs);
  if (threads <= 1 || jobs == 1) {
    for (std::size_t j = 0; j < jobs; ++j) results[j] = fn(j + 2);
    return results;
  }
  const std::size_t workers = std::min<std::size_t>(threads, jobs);
  std::vector<std::future<void>> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t j = w; j < jobs; j += workers) results[j] = fn(j + 2);
    }));
  }
  for (auto& f : pool) f.get();  // rethrows the first worker failure
  return results;
}

inline VulnerableEntry screen_layer(const LayeredTopology& topo, const CapacityMap& capacity,
                                    std::size_t layer) {
  VulnerableEntry best;
  best.layer = layer;
  bool have = false;
  for (const NodeId& id : topo.layers()[layer - 1]) {  // id-sorted: first minimum wins ties
    auto it = capacity.find(id);
    if (it == capacity.end())
      throw Error(ErrorCode::MissingBudget, "no link budget for node '" + id + "'", {id});
    if (!have || it->second < best.capacity_bps) {
      best.node = id;
      best.capacity_bps = it->second;
      have = true;
    }
  }
  return best;
}

/// Selects the minimum-capacity node of every layer >= 2. Ties go to the
/// lexicographically smallest id.
inline ScreeningResult screen_layers(const LayeredTopology& topo, const CapacityMap& capacity,
                                     unsigned threads = 1) {
  ScreeningResult r;
  r.per_layer_vulnerable = for_each_layer(
      topo.layer_count(), threads,
      [&](std::size_t layer) { return screen_layer(topo, capacity, layer); });
  return r;
}

inline ScreeningResult screen_layers(const LayeredTopology& topo,
                                     const std::map<NodeId, LinkBudget>& budgets,
                                     unsigned threads = 1) {
  return screen_layers(topo, achieved_capacities(budgets), threads);
}

// ---------------------------------------------------------------------------
// Range-cross detection
// ---------------------------------------------------------------------------

enum class Breach { None, SecrecyLow, SecrecyHigh, EELow, EEHigh, Multiple };

constexpr std::string_view to_string(Breach b) {
  switch (b) {
    case Breach::None: return "None";
    case Breach::SecrecyLow: return "SecrecyLow";
    case Breach::SecrecyHigh: return "SecrecyHigh";
    case Breach::EELow: return "EELow";
    case Breach::EEHigh: return "EEHigh";
    case Breach::Multiple: return "Multiple";
  }
  return "?";
}

/// Bits of DetectionFlag::breach_mask.
enum BreachBit : unsigned {
  kSecrecyLowBit = 1u << 0,
  kSecrecyHighBit = 1u << 1,
  kEELowBit = 1u << 2,
  kEEHighBit = 1u << 3,
};

struct DetectionFlag {
  NodeId node;
  int flag = 0;
  Breach breached = Breach::None;  // first breached dimension
  unsigned breach_mask = 0;        // every breached dimension

  bool operator==(const DetectionFlag&) const = default;
};

/// Closed-interval test of the achieved secrecy rate and EE against their
/// envelopes. Dimensions are checked in the order SR low, SR high, EE low,
/// EE high; the first breach is reported in `breached`.
inline DetectionFlag range_cross(const BoundsEnvelope& e) {
  const bool finite = std::isfinite(e.secrecy_lower_bps) && std::isfinite(e.secrecy_upper_bps) &&
                      std::isfinite(e.ee_lower) && std::isfinite(e.ee_upper) &&
                      !std::isnan(e.secrecy_achieved_bps) && !std::isnan(e.ee_achieved);
  if (!finite || e.secrecy_lower_bps > e.secrecy_upper_bps || e.ee_lower > e.ee_upper)
    throw Error(ErrorCode::InvalidEnvelope, "envelope of '" + e.node + "' has lower > upper",
                {e.node});
  DetectionFlag f;
  f.node = e.node;
  if (e.secrecy_achieved_bps < e.secrecy_lower_bps) f.breach_mask |= kSecrecyLowBit;
  if (e.secrecy_achieved_bps > e.secrecy_upper_bps) f.breach_mask |= kSecrecyHighBit;
  if (e.ee_achieved < e.ee_lower) f.breach_mask |= kEELowBit;
  if (e.ee_achieved > e.ee_upper) f.breach_mask |= kEEHighBit;
  if (f.breach_mask & kSecrecyLowBit) f.breached = Breach::SecrecyLow;
  else if (f.breach_mask & kSecrecyHighBit) f.breached = Breach::SecrecyHigh;
  else if (f.breach_mask & kEELowBit) f.breached = Breach::EELow;
  else if (f.breach_mask & kEEHighBit) f.breached = Breach::EEHigh;
  f.flag = f.breach_mask ? 1 : 0;
  return f;
}

// ---------------------------------------------------------------------------
// Disconnection and re-authentication
// ---------------------------------------------------------------------------

enum class RemediationPhase { SilentRandomBits, ReAuthPending, ReAuthFailed, Reallocated };

constexpr std::string_view to_string(RemediationPhase p) {
  switch (p) {
    case RemediationPhase::SilentRandomBits: return "SilentRandomBits";
    case RemediationPhase::ReAuthPending: return "ReAuthPending";
    case RemediationPhase::ReAuthFailed: return "ReAuthFailed";
    case RemediationPhase::Reallocated: return "Reallocated";
  }
  return "?";
}

struct RemediationState {
  NodeId node;
  RemediationPhase phase = RemediationPhase::SilentRandomBits;
  std::uint64_t random_bits_sent = 0;
  std::optional<Edge> new_edge;
  std::optional<BoundsEnvelope> new_envelope;
  std::vector<RemediationPhase> history;  // every phase entered, in order

  bool operator==(const RemediationState&) const = default;
};

enum class ScoringMode { Screened, FullScan };

struct DetectionReport {
  ScreeningResult screening;
  std::vector<DetectionFlag> flags;  // one per screening entry
  std::vector<DetectionFlag> oracle_flags;  // full_scan output, when requested
  std::vector<RemediationState> remediation;
  double elapsed_detection_seconds = 0.0;
  std::map<std::size_t, std::uint64_t> per_layer_ops;
  std::map<std::size_t, double> per_layer_mean_ee;  // mean achieved EE over the layer

  /// Everything except the wall-clock field.
  bool same_outcome(const DetectionReport& o) const {
    return screening == o.screening && flags == o.flags && oracle_flags == o.oracle_flags &&
           remediation == o.remediation &&
           per_layer_ops == o.per_layer_ops && per_layer_mean_ee == o.per_layer_mean_ee;
  }
};

/// Envelope of a candidate replacement edge for a flagged node.
using AlternativeLinkFn = std::function<BoundsEnvelope(const Edge&)>;

struct DetectorOptions {
  double reauth_success_prob = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t silence_ticks = 1;
  unsigned threads = 1;
  std::uint64_t min_block_bits = 512;   // random bits per silent tick, drawn
  std::uint64_t max_block_bits = 2048;  // uniformly from [min, max]
  /// When empty, alternatives are evaluated at their worst honest loss with
  /// the flagged link's eavesdropper capacity.
  AlternativeLinkFn alternative;
};

namespace detail {

inline std::uint64_t silence(Rng& rng, const DetectorOptions& o) {
  std::uint64_t bits = 0;
  const std::uint64_t span = o.max_block_bits - o.min_block_bits + 1;
  for (std::uint64_t t = 0; t < std::max<std::uint64_t>(o.silence_ticks, 1); ++t)
    bits += o.min_block_bits + rng.below(span);
  return bits;
}

inline std::uint64_t ops_for_layer(const LayeredTopology& topo, std::size_t layer) {
  // capacity evaluations for every member + four bound comparisons
  return topo.layers()[layer - 1].size() + 4;
}

inline void check_covered(const LayeredTopology& topo, const EnvelopeMap& envelopes) {
  for (const NodeId& id : topo.non_bs_nodes())
    if (!envelopes.count(id))
      throw Error(ErrorCode::MissingBudget, "no envelope for node '" + id + "'", {id});
}

}  // namespace detail

/// Silences a flagged node, draws the re-authentication outcome and, on
/// success, looks for an alternative inbound edge whose achieved secrecy
/// rate is inside its own envelope and above the flagged link's.
inline RemediationState remediate(const LayeredTopology& topo, const ChannelParams& params,
                                  const BoundsEnvelope& flagged, const DetectorOptions& opt,
                                  Rng& rng) {
  RemediationState st;
  st.node = flagged.node;
  st.history.push_back(RemediationPhase::SilentRandomBits);
  st.random_bits_sent = detail::silence(rng, opt);
  st.history.push_back(RemediationPhase::ReAuthPending);

  if (!rng.bernoulli(opt.reauth_success_prob)) {
    // failure is terminal for the trial: the link stays silent
    st.phase = RemediationPhase::ReAuthFailed;
    st.history.push_back(RemediationPhase::ReAuthFailed);
    st.random_bits_sent += detail::silence(rng, opt);
    return st;
  }

  std::optional<BoundsEnvelope> best;
  std::optional<Edge> best_edge;
  for (const Edge* e : topo.inbound_edges(flagged.node)) {
    if (e->src == flagged.link_src) continue;
    BoundsEnvelope cand;
    if (opt.alternative) {
      cand = opt.alternative(*e);
    } else {
      const Node& src = topo.node(e->src);
      const Node& dst = topo.node(e->dst);
      cand = link_bounds(params, *e, src.tx_power_dbm, dst.power_consumption_w,
                         flagged.eavesdropper_bps, extra_loss_db(params, e->entity_depths_m));
    }
    if (range_cross(cand).flag != 0) continue;
    if (!(cand.secrecy_achieved_bps > flagged.secrecy_achieved_bps)) continue;
    if (!best || cand.secrecy_achieved_bps > best->secrecy_achieved_bps) {
      best = cand;
      best_edge = *e;
    }
  }
  if (best) {
    st.phase = RemediationPhase::Reallocated;
    st.history.push_back(RemediationPhase::Reallocated);
    st.new_edge = std::move(best_edge);
    st.new_envelope = std::move(best);
  } else {
    // authenticated, but no better edge yet: keep the link silent
    st.phase = RemediationPhase::SilentRandomBits;
    st.history.push_back(RemediationPhase::SilentRandomBits);
    st.random_bits_sent += detail::silence(rng, opt);
  }
  return st;
}

/// Layer-wise detection: screen every layer for its minimum-capacity node,
/// test only that node against its envelope, then remediate flagged nodes
/// sequentially in layer order.
inline DetectionReport run_lgtbids(const LayeredTopology& topo, const ChannelParams& params,
                                   const EnvelopeMap& envelopes, const DetectorOptions& opt = {}) {
  if (!(opt.reauth_success_prob >= 0.0 && opt.reauth_success_prob <= 1.0))
    throw Error(ErrorCode::InvalidProbability, "reauth_success_prob must lie in [0, 1]");
  if (opt.min_block_bits > opt.max_block_bits)
    throw Error(ErrorCode::InvalidProbability, "min_block_bits > max_block_bits");
  detail::check_covered(topo, envelopes);

  struct LayerResult {
    VulnerableEntry entry;
    DetectionFlag flag;
  };

  DetectionReport report;
  const auto t0 = std::chrono::steady_clock::now();
  const CapacityMap capacity = achieved_capacities(envelopes);
  auto layer_results = for_each_layer(topo.layer_count(), opt.threads, [&](std::size_t layer) {
    LayerResult r;
    r.entry = screen_layer(topo, capacity, layer);
    r.flag = range_cross(envelopes.at(r.entry.node));
    return r;
  });
  const auto t1 = std::chrono::steady_clock::now();
  report.elapsed_detection_seconds = std::chrono::duration<double>(t1 - t0).count();

  for (auto& r : layer_results) {
    report.screening.per_layer_vulnerable.push_back(r.entry);
    report.flags.push_back(r.flag);
    report.per_layer_ops[r.entry.layer] = detail::ops_for_layer(topo, r.entry.layer);
  }
  for (std::size_t layer = 2; layer <= topo.layer_count(); ++layer) {
    const auto& members = topo.layers()[layer - 1];
    double sum = 0.0;
    for (const NodeId& id : members) sum += envelopes.at(id).ee_achieved;
    report.per_layer_mean_ee[layer] = sum / static_cast<double>(members.size());
  }

  Rng rng(opt.seed);
  for (const DetectionFlag& f : report.flags)
    if (f.flag) report.remediation.push_back(remediate(topo, params, envelopes.at(f.node), opt, rng));
  return report;
}

/// Oracle mode: range-cross on every non-BS node, no screening. Flags are in
/// layer order then id order.
inline std::vector<DetectionFlag> full_scan(const LayeredTopology& topo, const ChannelParams&,
                                            const EnvelopeMap& envelopes) {
  detail::check_covered(topo, envelopes);
  std::vector<DetectionFlag> flags;
  for (const NodeId& id : topo.non_bs_nodes()) flags.push_back(range_cross(envelopes.at(id)));
  return flags;
}

}  // namespace lgtbids
