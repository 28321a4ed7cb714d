#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lgtbids/channel.hpp"
#include "lgtbids/error.hpp"
#include "lgtbids/topology.hpp"

namespace lgtbids {

enum class AttackKind { HalfDuplex, BandwidthSpoofing, Handover, DoS, UAV };

inline constexpr AttackKind kAllAttackKinds[] = {AttackKind::HalfDuplex,
                                                 AttackKind::Handover,
                                                 AttackKind::BandwidthSpoofing, AttackKind::DoS,
                                                 AttackKind::UAV};

constexpr std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::HalfDuplex: return "HalfDuplex";
    case AttackKind::BandwidthSpoofing: return "BandwidthSpoofing";
    case AttackKind::Handover: return "Handover";
    case AttackKind::DoS: return "DoS";
    case AttackKind::UAV: return "UAV";
  }
  return "?";
}

inline std::optional<AttackKind> parse_attack_kind(std::string_view s) {
  for (AttackKind k : kAllAttackKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// Tunable constants of the perturbation models.
struct AttackConstants {
  double half_duplex_factor = 0.5;   // achieved SR/EE *= 1 - f * intensity
  double spoof_knee_m = 170.0;       // BW spoofing reaches full strength at this distance
  double handover_penalty_db = 3.0;  // extra achieved loss per unit intensity
  double dos_factor = 0.9;           // achieved capacity *= 1 - f * intensity
  double uav_factor = 0.5;           // achieved capacity *= 1 + f * intensity

  bool operator==(const AttackConstants&) const = default;
};

struct AttackSpec {
  AttackKind kind = AttackKind::HalfDuplex;
  NodeId target;
  double intensity = 0.0;  // [0, 1]
  std::uint64_t seed = 0;
  AttackConstants constants;

  bool operator==(const AttackSpec&) const = default;
};

struct GroundTruth {
  std::set<NodeId> attacked;

  bool operator==(const GroundTruth&) const = default;
};

using EnvelopeMap = std::map<NodeId, BoundsEnvelope>;

struct AttackOutcome {
  EnvelopeMap budgets;
  GroundTruth truth;
};

/// Handover needs a mobile target in one of the two outermost layers.
inline bool handover_applicable(const LayeredTopology& topo, const NodeId& target) {
  if (!topo.contains(target)) return false;
  const Node& n = topo.node(target);
  return n.mobile && n.kind != NodeKind::BS && topo.layer_of(target) + 1 >= topo.layer_count();
}

namespace detail {

inline void scale_capacity(BoundsEnvelope& env, double factor) {
  env.capacity_achieved_bps *= factor;
  refresh_achieved(env);
}

inline void perturb(const AttackSpec& spec, BoundsEnvelope& env) {
  const AttackConstants& c = spec.constants;
  const double i = spec.intensity;
  switch (spec.kind) {
    case AttackKind::HalfDuplex: {
      // Resource spoofing on the downlink: the victim keeps only part of its
      // rate. Secrecy and EE are scaled directly, capacity follows EE.
      const double f = 1.0 - c.half_duplex_factor * i;
      env.secrecy_achieved_bps *= f;
      env.ee_achieved *= f;
      env.capacity_achieved_bps *= f;
      break;
    }
    case AttackKind::BandwidthSpoofing: {
      const double g = std::min(1.0, env.distance_m / c.spoof_knee_m);
      scale_capacity(env, 1.0 - i * g);  // capacity is linear in bandwidth
      break;
    }
    case AttackKind::Handover: {
      const double snr = std::exp2(env.capacity_achieved_bps / env.bandwidth_hz) - 1.0;
      const double faded = snr * std::pow(10.0, -c.handover_penalty_db * i / 10.0);
      env.capacity_achieved_bps = env.bandwidth_hz * std::log2(1.0 + faded);
      env.achieved_extra_loss_db += c.handover_penalty_db * i;
      refresh_achieved(env);
      break;
    }
    case AttackKind::DoS:
      scale_capacity(env, 1.0 - c.dos_factor * i);
      break;
    case AttackKind::UAV:
      scale_capacity(env, 1.0 + c.uav_factor * i);
      break;
  }
}

}  // namespace detail

inline void validate(const AttackSpec& spec, const LayeredTopology& topo) {
  if (!(spec.intensity >= 0.0 && spec.intensity <= 1.0))
    throw Error(ErrorCode::InvalidAttack, "intensity must lie in [0, 1]", {spec.target});
  const AttackConstants& c = spec.constants;
  if (!(c.half_duplex_factor >= 0.0 && c.half_duplex_factor <= 1.0) ||
      !(c.dos_factor >= 0.0 && c.dos_factor <= 1.0) || !(c.uav_factor >= 0.0) ||
      !(c.spoof_knee_m > 0.0) || !(c.handover_penalty_db >= 0.0))
    throw Error(ErrorCode::InvalidAttack, "attack constants out of range", {spec.target});
  if (!topo.contains(spec.target))
    throw Error(ErrorCode::UnknownTarget, "attack target '" + spec.target + "' is not declared",
                {spec.target});
  if (topo.node(spec.target).kind == NodeKind::BS)
    throw Error(ErrorCode::InvalidAttack, "target is not the BS", {spec.target});
  if (spec.kind == AttackKind::Handover && !handover_applicable(topo, spec.target))
    throw Error(ErrorCode::InapplicableAttack,
                "handover needs a mobile target in the two outermost layers: '" + spec.target + "'",
                {spec.target});
}

/// Perturbs the achieved fields of the target's envelope. Bounds are left as
/// they are; every other node passes through untouched.
inline AttackOutcome apply_attack(const AttackSpec& spec, const LayeredTopology& topo,
                                  EnvelopeMap budgets) {
  validate(spec, topo);
  auto it = budgets.find(spec.target);
  if (it == budgets.end())
    throw Error(ErrorCode::UnknownTarget, "no envelope for attack target '" + spec.target + "'",
                {spec.target});
  if (spec.intensity > 0.0) detail::perturb(spec, it->second);
  AttackOutcome out{std::move(budgets), {}};
  out.truth.attacked.insert(spec.target);
  return out;
}

/// Applies several attacks in order; overlapping targets compose.
inline AttackOutcome apply_attacks(std::span<const AttackSpec> specs, const LayeredTopology& topo,
                                   EnvelopeMap budgets) {
  AttackOutcome out{std::move(budgets), {}};
  for (const AttackSpec& s : specs) {
    AttackOutcome step = apply_attack(s, topo, std::move(out.budgets));
    out.budgets = std::move(step.budgets);
    out.truth.attacked.insert(step.truth.attacked.begin(), step.truth.attacked.end());
  }
  return out;
}

/// Distance by which the achieved values sit outside the envelope, relative
/// to the envelope width scale; <= 0 means inside. Used by tests and reports.
inline double out_of_band_margin(const BoundsEnvelope& e) {
  auto rel = [](double lo, double hi, double v) {
    const double scale = std::max({std::abs(hi), std::abs(lo), 1.0});
    return std::max(lo - v, v - hi) / scale;
  };
  return std::max(rel(e.secrecy_lower_bps, e.secrecy_upper_bps, e.secrecy_achieved_bps),
                  rel(e.ee_lower, e.ee_upper, e.ee_achieved));
}

}  // namespace lgtbids
