#include <gtest/gtest.h>

#include "support.hpp"

namespace lgtbids {
namespace {

// Reference values computed independently (Python, double precision) from
// the closed-form expressions with c = 299792458 m/s.
constexpr double kPl28GHz1m = 61.39094384872776;
constexpr double kPl28GHz100m = 101.39094384872776;
constexpr double kExtraGamma01W10 = 4.342944819032518;
constexpr double kSnr30dBm = 2897.343587701327;  // tx 30 dBm, loss 101.38 dB, noise -106 dBm
constexpr double kCap2897 = 9200673503.645544;   // 800 MHz, snr 2897

ChannelParams reference() {
  ChannelParams p;
  p.gamma_per_m = 0.1;
  return p;
}

TEST(Channel, FreeSpacePathLoss) {
  const ChannelParams p;
  EXPECT_NEAR(free_space_pathloss_db(p, 1.0), kPl28GHz1m, 1e-9);
  EXPECT_NEAR(free_space_pathloss_db(p, 100.0), kPl28GHz100m, 1e-9);
  // rounded reference quoted for 28 GHz at 1 m
  EXPECT_NEAR(free_space_pathloss_db(p, 1.0), 61.38, 0.02);
  EXPECT_THROW(free_space_pathloss_db(p, 0.0), Error);
  EXPECT_THROW(free_space_pathloss_db(p, -3.0), Error);
}

TEST(Channel, ExtraLossFromObstructions) {
  const ChannelParams p = reference();
  const double depths[] = {10.0};
  EXPECT_NEAR(extra_loss_db(p, depths), kExtraGamma01W10, 1e-12);
  // the loss is 10*log10 of the attenuation factor e^{-gamma * w}
  EXPECT_NEAR(std::pow(10.0, -extra_loss_db(p, depths) / 10.0), 0.36787944117144233, 1e-15);
  const double split[] = {4.0, 6.0};
  EXPECT_NEAR(extra_loss_db(p, split), kExtraGamma01W10, 1e-12);
  EXPECT_EQ(extra_loss_db(p, {}), 0.0);
  const double bad[] = {1.0, -0.5};
  try {
    extra_loss_db(p, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeDepth);
  }
}

TEST(Channel, SnrAndCapacity) {
  const ChannelParams p;
  EXPECT_NEAR(snr_linear(p, 30.0, 101.38), kSnr30dBm, 1e-9);
  EXPECT_NEAR(capacity_bps(p, 2897.0), kCap2897, 1e-3);
  EXPECT_NEAR(capacity_bps(p, 2897.0) / 1e9, 9.205, 0.01);
  EXPECT_EQ(capacity_bps(p, 0.0), 0.0);
  try {
    capacity_bps(p, -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeSnr);
  }
}

TEST(Channel, SecrecyRateIsFlooredAtZero) {
  EXPECT_EQ(secrecy_rate_bps(5e9, 2e9), 3e9);
  EXPECT_EQ(secrecy_rate_bps(2e9, 2e9), 0.0);
  EXPECT_EQ(secrecy_rate_bps(1e9, 2e9), 0.0);
}

TEST(Channel, EnergyEfficiency) {
  EXPECT_EQ(energy_efficiency(9e9, 20.0), 4.5e8);
  EXPECT_THROW(energy_efficiency(9e9, 0.0), Error);
}

TEST(Channel, EndToEndEnvelopeMatchesReference) {
  const ChannelParams p = reference();
  const Edge e{"BS", "u", 100.0, {10.0}};
  const BoundsEnvelope env = link_bounds(p, e, 30.0, 20.0, 2e9, 0.0);
  EXPECT_NEAR(env.capacity_upper_bps, 9197902963.042189, 1e-3);
  EXPECT_NEAR(env.capacity_lower_bps, 8044432693.30606, 1e-3);
  EXPECT_NEAR(env.secrecy_upper_bps, 7197902963.042189, 1e-3);
  EXPECT_NEAR(env.secrecy_lower_bps, 6044432693.30606, 1e-3);
  EXPECT_NEAR(env.ee_upper, 459895148.15210944, 1e-4);
  EXPECT_NEAR(env.ee_lower, 402221634.665303, 1e-4);
  EXPECT_NEAR(env.max_extra_loss_db, kExtraGamma01W10, 1e-12);
  // zero achieved loss sits exactly on the upper bound
  EXPECT_EQ(env.secrecy_achieved_bps, env.secrecy_upper_bps);
  EXPECT_EQ(env.ee_achieved, env.ee_upper);
}

TEST(Channel, ZeroGammaCollapsesTheEnvelope) {
  ChannelParams p;
  p.gamma_per_m = 0.0;
  const Edge e{"BS", "u", 80.0, {5.0, 5.0}};
  const BoundsEnvelope env = link_bounds(p, e, 24.0, 1.0, 1e9, 0.0);
  EXPECT_EQ(env.secrecy_lower_bps, env.secrecy_upper_bps);
  EXPECT_EQ(env.ee_lower, env.ee_upper);
}

TEST(Channel, AchievedLossMustLieInRange) {
  const ChannelParams p = reference();
  const Edge e{"BS", "u", 100.0, {10.0}};
  try {
    link_bounds(p, e, 30.0, 20.0, 2e9, kExtraGamma01W10 + 0.1);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::AchievedLossOutOfRange);
  }
  EXPECT_THROW(link_bounds(p, e, 30.0, 20.0, 2e9, -0.01), Error);
  EXPECT_NO_THROW(link_bounds(p, e, 30.0, 20.0, 2e9, kExtraGamma01W10));
}

TEST(Channel, RefreshAchievedRecomputesFromCapacity) {
  const ChannelParams p = reference();
  BoundsEnvelope env = link_bounds(p, {"BS", "u", 100.0, {10.0}}, 30.0, 20.0, 2e9, 1.0);
  env.capacity_achieved_bps = 5e9;
  refresh_achieved(env);
  EXPECT_EQ(env.secrecy_achieved_bps, 3e9);
  EXPECT_EQ(env.ee_achieved, 2.5e8);
}

TEST(Channel, ParamValidation) {
  ChannelParams p;
  EXPECT_NO_THROW(validate(p));
  p.bandwidth_hz = 0;
  EXPECT_THROW(validate(p), Error);
  p = {};
  p.gamma_per_m = -1;
  EXPECT_THROW(validate(p), Error);
}

TEST(ChannelProperty, PathLossIsMonotoneInDistance) {
  auto g = testing::make_gen(21);
  for (int i = 0; i < 2000; ++i) {
    const ChannelParams p = testing::random_channel(g);
    const double d1 = testing::uniform(g, 1.0, 250.0);
    const double d2 = d1 + testing::uniform(g, 0.001, 100.0);
    EXPECT_LT(free_space_pathloss_db(p, d1), free_space_pathloss_db(p, d2));
  }
}

TEST(ChannelProperty, EnvelopeOrderingAndEavesdropperShift) {
  auto g = testing::make_gen(22);
  for (int i = 0; i < 2000; ++i) {
    const ChannelParams p = testing::random_channel(g);
    const Edge e{"s", "d", testing::uniform(g, 10.0, 250.0), {testing::uniform(g, 0.0, 10.0)}};
    const double eve = testing::uniform(g, 0.0, 3e9);
    const double pcc = testing::uniform(g, 0.1, 20.0);
    const double tx = testing::uniform(g, 13.0, 30.0);
    const BoundsEnvelope env = link_bounds(p, e, tx, pcc, eve, 0.0);
    EXPECT_LE(env.capacity_lower_bps, env.capacity_upper_bps);
    EXPECT_LE(env.secrecy_lower_bps, env.secrecy_upper_bps);
    EXPECT_LE(env.ee_lower, env.ee_upper);
    // a stronger eavesdropper never raises the secrecy bounds
    const BoundsEnvelope stronger = link_bounds(p, e, tx, pcc, eve + 1e8, 0.0);
    EXPECT_LE(stronger.secrecy_upper_bps, env.secrecy_upper_bps);
    EXPECT_LE(stronger.secrecy_lower_bps, env.secrecy_lower_bps);
  }
}

}  // namespace
}  // namespace lgtbids
