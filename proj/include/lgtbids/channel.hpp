#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <string>

#include "lgtbids/error.hpp"
#include "lgtbids/topology.hpp"

namespace lgtbids {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct ChannelParams {
  double frequency_hz = 28e9;
  double bandwidth_hz = 800e6;   // beta
  double noise_dbm = -106.0;     // sigma_p^2
  double pathloss_exponent = 2;  // alpha
  double gamma_per_m = 0.0;      // attenuation constant of obstructing entities

  bool operator==(const ChannelParams&) const = default;
};

inline void validate(const ChannelParams& p) {
  auto bad = [](const char* what) { throw Error(ErrorCode::InvalidChannelParams, what); };
  if (!(p.frequency_hz > 0.0) || !std::isfinite(p.frequency_hz)) bad("frequency_hz must be > 0");
  if (!(p.bandwidth_hz > 0.0) || !std::isfinite(p.bandwidth_hz)) bad("bandwidth_hz must be > 0");
  if (!std::isfinite(p.noise_dbm)) bad("noise_dbm must be finite");
  if (!(p.pathloss_exponent >= 1.0) || !std::isfinite(p.pathloss_exponent))
    bad("pathloss_exponent must be >= 1");
  if (!(p.gamma_per_m >= 0.0) || !std::isfinite(p.gamma_per_m)) bad("gamma_per_m must be >= 0");
}

/// Per-link quantities for one loss assumption.
struct LinkBudget {
  double pathloss_db = 0.0;
  double extra_loss_db = 0.0;
  double snr_linear = 0.0;
  double capacity_bps = 0.0;
  double eavesdropper_capacity_bps = 0.0;
  double secrecy_rate_bps = 0.0;
  double energy_efficiency_bps_per_w = 0.0;

  bool operator==(const LinkBudget&) const = default;
};

/// Analytic [lower, upper] envelope for one node's link plus the achieved
/// values tested against it. The capacity and context fields let attack
/// models re-derive achieved metrics without the topology.
struct BoundsEnvelope {
  NodeId node;      // destination
  NodeId link_src;  // source of the edge the envelope was computed on

  double secrecy_lower_bps = 0.0;
  double secrecy_upper_bps = 0.0;
  double ee_lower = 0.0;  // bps/W
  double ee_upper = 0.0;
  double secrecy_achieved_bps = 0.0;
  double ee_achieved = 0.0;

  double capacity_lower_bps = 0.0;
  double capacity_upper_bps = 0.0;
  double capacity_achieved_bps = 0.0;
  double eavesdropper_bps = 0.0;
  double p_cc_w = 1.0;
  double bandwidth_hz = 0.0;
  double distance_m = 0.0;
  double max_extra_loss_db = 0.0;       // P_e of the link
  double achieved_extra_loss_db = 0.0;

  bool operator==(const BoundsEnvelope&) const = default;
};

/// Log-distance free-space loss: 20 log10(4 pi f / c) + 10 alpha log10(d).
inline double free_space_pathloss_db(const ChannelParams& p, double distance_m) {
  if (!(distance_m > 0.0))
    throw Error(ErrorCode::NonPositiveDistance, "distance must be > 0 m");
  return 20.0 * std::log10(4.0 * std::numbers::pi * p.frequency_hz / kSpeedOfLight) +
         10.0 * p.pathloss_exponent * std::log10(distance_m);
}

/// Attenuation e^{-gamma * sum(w)} through obstructing entities, in dB.
inline double extra_loss_db(const ChannelParams& p, std::span<const double> entity_depths_m) {
  double total = 0.0;
  for (double w : entity_depths_m) {
    if (!(w >= 0.0)) throw Error(ErrorCode::NegativeDepth, "entity depth must be >= 0");
    total += w;
  }
  return 10.0 * p.gamma_per_m * total * std::numbers::log10e;
}

inline double snr_linear(const ChannelParams& p, double tx_power_dbm, double total_loss_db) {
  return std::pow(10.0, (tx_power_dbm - total_loss_db - p.noise_dbm) / 10.0);
}

/// Shannon capacity beta * log2(1 + snr).
inline double capacity_bps(const ChannelParams& p, double snr) {
  if (!(snr >= 0.0)) throw Error(ErrorCode::NegativeSnr, "snr must be >= 0");
  return p.bandwidth_hz * std::log2(1.0 + snr);
}

/// Legitimate minus eavesdropper capacity, zero when the eavesdropper is at
/// least as strong.
inline double secrecy_rate_bps(double capacity, double eavesdropper_capacity) {
  return capacity >= eavesdropper_capacity ? capacity - eavesdropper_capacity : 0.0;
}

inline double energy_efficiency(double capacity, double power_consumption_w) {
  if (!(power_consumption_w > 0.0))
    throw Error(ErrorCode::NonPositivePower, "power consumption must be > 0 W");
  return capacity / power_consumption_w;
}

/// Capacity an eavesdropper at `distance_m` from a transmitter of
/// `tx_power_dbm` obtains over an unobstructed path.
inline double eavesdropper_capacity_at(const ChannelParams& p, double tx_power_dbm,
                                       double distance_m) {
  return capacity_bps(p, snr_linear(p, tx_power_dbm, free_space_pathloss_db(p, distance_m)));
}

/// Full budget for one loss assumption. `snr_gain` is a linear multiplier
/// on the SNR (small-scale fading); 1 disables it.
inline LinkBudget link_budget(const ChannelParams& p, const Edge& edge, double tx_power_dbm,
                              double p_cc_w, double eavesdropper_capacity, double extra_db,
                              double snr_gain = 1.0) {
  LinkBudget b;
  b.pathloss_db = free_space_pathloss_db(p, edge.distance_m);
  b.extra_loss_db = extra_db;
  b.snr_linear = snr_linear(p, tx_power_dbm, b.pathloss_db + extra_db) * snr_gain;
  b.capacity_bps = capacity_bps(p, b.snr_linear);
  b.eavesdropper_capacity_bps = eavesdropper_capacity;
  b.secrecy_rate_bps = secrecy_rate_bps(b.capacity_bps, eavesdropper_capacity);
  b.energy_efficiency_bps_per_w = energy_efficiency(b.capacity_bps, p_cc_w);
  return b;
}

/// Upper bound: path loss only. Lower bound: path loss plus the link's full
/// obstruction loss. Achieved: path loss plus `achieved_extra_loss_db`, which
/// must lie in [0, P_e]. With unit `snr_gain` the achieved values sit inside
/// the envelope by construction.
inline BoundsEnvelope link_bounds(const ChannelParams& p, const Edge& edge, double tx_power_dbm,
                                  double p_cc_w, double eavesdropper_capacity,
                                  double achieved_extra_loss_db, double snr_gain = 1.0) {
  const double max_extra = extra_loss_db(p, edge.entity_depths_m);
  if (!(achieved_extra_loss_db >= 0.0 && achieved_extra_loss_db <= max_extra))
    throw Error(ErrorCode::AchievedLossOutOfRange,
                edge.src + "->" + edge.dst + ": achieved extra loss " +
                    std::to_string(achieved_extra_loss_db) + " dB outside [0, " +
                    std::to_string(max_extra) + "]",
                {edge.dst});
  if (!(eavesdropper_capacity >= 0.0))
    throw Error(ErrorCode::InvalidEnvelope, "eavesdropper capacity must be >= 0", {edge.dst});

  const LinkBudget upper = link_budget(p, edge, tx_power_dbm, p_cc_w, eavesdropper_capacity, 0.0);
  const LinkBudget lower =
      link_budget(p, edge, tx_power_dbm, p_cc_w, eavesdropper_capacity, max_extra);
  const LinkBudget achieved = link_budget(p, edge, tx_power_dbm, p_cc_w, eavesdropper_capacity,
                                          achieved_extra_loss_db, snr_gain);

  BoundsEnvelope env;
  env.node = edge.dst;
  env.link_src = edge.src;
  env.secrecy_lower_bps = lower.secrecy_rate_bps;
  env.secrecy_upper_bps = upper.secrecy_rate_bps;
  env.ee_lower = lower.energy_efficiency_bps_per_w;
  env.ee_upper = upper.energy_efficiency_bps_per_w;
  env.secrecy_achieved_bps = achieved.secrecy_rate_bps;
  env.ee_achieved = achieved.energy_efficiency_bps_per_w;
  env.capacity_lower_bps = lower.capacity_bps;
  env.capacity_upper_bps = upper.capacity_bps;
  env.capacity_achieved_bps = achieved.capacity_bps;
  env.eavesdropper_bps = eavesdropper_capacity;
  env.p_cc_w = p_cc_w;
  env.bandwidth_hz = p.bandwidth_hz;
  env.distance_m = edge.distance_m;
  env.max_extra_loss_db = max_extra;
  env.achieved_extra_loss_db = achieved_extra_loss_db;
  return env;
}

/// Recomputes the achieved secrecy rate and EE after capacity_achieved_bps
/// has been changed.
inline void refresh_achieved(BoundsEnvelope& env) {
  env.secrecy_achieved_bps = secrecy_rate_bps(env.capacity_achieved_bps, env.eavesdropper_bps);
  env.ee_achieved = energy_efficiency(env.capacity_achieved_bps, env.p_cc_w);
}

}  // namespace lgtbids
