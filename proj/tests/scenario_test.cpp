#include <gtest/gtest.h>

#include "support.hpp"

namespace lgtbids {
namespace {

const std::string kTable3 = std::string(LGTBIDS_SOURCE_DIR) + "/scenarios/table3.scenario";

const char* kMinimal = R"(version = 1
[channel]
frequency_hz = 28e9
bandwidth_hz = 800e6
noise_dbm = -106
pathloss_exponent = 2
gamma_per_m = 0.05
cell_radius_m = 250
[run]
trials = 3
seed = 1
[nodes]
BS BS 30 20 no
a  CU 23 1  no   # trailing comment
b  Vehicle 13 0.5 yes
[edges]
BS a 50 - -
a  b 40 1.5,2 d=30
)";

std::vector<Diagnostic> diagnostics_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.diagnostics();
  }
  ADD_FAILURE() << "scenario parsed without errors";
  return {};
}

TEST(Scenario, ParsesMinimalDocument) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.trials, 3u);
  EXPECT_EQ(s.nodes.size(), 3u);
  EXPECT_TRUE(s.nodes[2].mobile);
  ASSERT_EQ(s.edges.size(), 2u);
  EXPECT_EQ(s.edges[1].edge.entity_depths_m, (std::vector<double>{1.5, 2.0}));
  EXPECT_EQ(s.edges[1].eavesdropper.mode, EavesdropperSpec::Mode::Distance);
  EXPECT_EQ(s.edges[1].eavesdropper.value, 30.0);
  EXPECT_EQ(s.edges[0].eavesdropper.mode, EavesdropperSpec::Mode::Global);
  // defaults
  EXPECT_EQ(s.reauth_success_prob, 1.0);
  EXPECT_EQ(s.silence_ticks, 1u);
  EXPECT_EQ(s.schedule, AttackSchedule::All);
  EXPECT_EQ(s.fading, FadingModel::Off);
}

TEST(Scenario, ShippedReferenceScenario) {
  const Scenario s = load_scenario(kTable3);
  EXPECT_EQ(s.channel.bandwidth_hz, 800e6);
  EXPECT_EQ(s.channel.noise_dbm, -106.0);
  EXPECT_EQ(s.channel.frequency_hz, 28e9);
  EXPECT_EQ(s.cell_radius_m, 250.0);
  EXPECT_EQ(s.nodes.size(), 24u);
  EXPECT_EQ(s.edges.size(), 24u);
  const auto t = build_topology(s.nodes, s.plain_edges());
  ASSERT_EQ(t.layer_count(), 5u);
  const std::size_t sizes[] = {1, 5, 12, 4, 2};
  for (std::size_t l = 0; l < 5; ++l) EXPECT_EQ(t.layers()[l].size(), sizes[l]) << "layer " << l + 1;
}

TEST(Scenario, EmptyDocumentListsEveryMissingSection) {
  const auto d = diagnostics_of("");
  std::set<std::string> fields;
  for (const Diagnostic& x : d) {
    EXPECT_EQ(x.code, ErrorCode::ValidationError);
    fields.insert(x.field);
  }
  EXPECT_EQ(fields, (std::set<std::string>{"channel", "run", "nodes", "edges"}));
}

TEST(Scenario, AttackOnBaseStationIsRejected) {
  const auto d = diagnostics_of(std::string(kMinimal) +
                                "[attack]\nkind = DoS\ntarget = BS\nintensity = 0.5\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, ErrorCode::ValidationError);
  EXPECT_EQ(d[0].message, "target is not the BS");
  EXPECT_EQ(d[0].line, 19u);
}

TEST(Scenario, SyntaxErrorsCarryLineNumbers) {
  std::string text = kMinimal;
  text.replace(text.find("trials = 3"), 10, "trials = three");
  const auto d = diagnostics_of(text);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, ErrorCode::SyntaxError);
  EXPECT_EQ(d[0].line, 10u);
  EXPECT_EQ(d[0].field, "run.trials");
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
  }
}

TEST(Scenario, UnknownKeysAndSectionsAreErrors) {
  const auto d = diagnostics_of(std::string(kMinimal) + "[extras]\nfoo = 1\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, ErrorCode::UnknownKey);
  std::string text = kMinimal;
  text.insert(text.find("seed = 1"), "colour = blue\n");
  const auto k = diagnostics_of(text);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0].code, ErrorCode::UnknownKey);
  EXPECT_EQ(k[0].field, "run.colour");
}

TEST(Scenario, FieldValidation) {
  std::string text = kMinimal;
  text.replace(text.find("a  CU 23"), 8, "a  CU 35");
  text.replace(text.find("a  b 40"), 7, "a  b 400");
  text.replace(text.find("trials = 3"), 10, "trials = 0");
  const auto d = diagnostics_of(text);
  std::set<std::string> fields;
  for (const Diagnostic& x : d) fields.insert(x.field);
  EXPECT_TRUE(fields.count("nodes.a.tx_power_dbm"));
  EXPECT_TRUE(fields.count("edges.a->b.distance_m"));
  EXPECT_TRUE(fields.count("run.trials"));
}

TEST(Scenario, AttackBlocks) {
  const Scenario s = parse_scenario(std::string(kMinimal) +
                                    "[attack]\nkind = Handover\ntarget = random\n"
                                    "intensity = 0.2..0.7\nseed = 5\ndos_factor = 0.5\n"
                                    "[attack]\nkind = UAV\ntarget = a\nintensity = 1\n");
  ASSERT_EQ(s.attacks.size(), 2u);
  EXPECT_TRUE(s.attacks[0].random_target);
  EXPECT_EQ(s.attacks[0].intensity_min, 0.2);
  EXPECT_EQ(s.attacks[0].intensity_max, 0.7);
  EXPECT_EQ(s.attacks[0].constants.dos_factor, 0.5);
  EXPECT_EQ(s.attacks[1].target, "a");
  const auto unknown = diagnostics_of(std::string(kMinimal) +
                                      "[attack]\nkind = DoS\ntarget = ghost\nintensity = 1\n");
  ASSERT_EQ(unknown.size(), 1u);
  EXPECT_EQ(unknown[0].field, "attack[0].target");
  const auto handover = diagnostics_of(std::string(kMinimal) +
                                       "[attack]\nkind = Handover\ntarget = a\nintensity = 1\n");
  ASSERT_EQ(handover.size(), 1u);  // a is static
  const auto missing = diagnostics_of(std::string(kMinimal) + "[attack]\nkind = DoS\n");
  EXPECT_EQ(missing.size(), 2u);
}

Scenario random_scenario(std::mt19937_64& g) {
  const auto graph = testing::random_layered_graph(g, 20);
  Scenario s;
  s.channel = testing::random_channel(g);
  s.cell_radius_m = 250.0;
  s.nodes = graph.nodes;
  for (const Edge& e : graph.edges) {
    EdgeSpec es{e, {}};
    switch (testing::pick(g, 3)) {
      case 0: break;
      case 1: es.eavesdropper = {EavesdropperSpec::Mode::Constant, testing::uniform(g, 0, 2e9)}; break;
      default: es.eavesdropper = {EavesdropperSpec::Mode::Distance, testing::uniform(g, 1, 300)};
    }
    s.edges.push_back(es);
  }
  s.trials = 1 + testing::pick(g, 100);
  s.seed = g();
  s.reauth_success_prob = testing::uniform(g, 0, 1);
  s.silence_ticks = testing::pick(g, 5);
  s.eavesdropper_bps = testing::uniform(g, 0, 1e9);
  s.schedule = testing::pick(g, 2) ? AttackSchedule::All : AttackSchedule::RoundRobin;
  s.fading = testing::pick(g, 2) ? FadingModel::Off : FadingModel::Rayleigh;
  s.fading_probability = testing::uniform(g, 0, 1);
  for (std::size_t k = testing::pick(g, 4); k > 0; --k) {
    AttackBlock a;
    a.kind = kAllAttackKinds[testing::pick(g, 5)];
    a.random_target = true;
    a.intensity_min = testing::uniform(g, 0, 0.5);
    a.intensity_max = testing::pick(g, 2) ? a.intensity_min : testing::uniform(g, 0.5, 1);
    a.seed = g();
    a.constants.uav_factor = testing::uniform(g, 0, 2);
    s.attacks.push_back(a);
  }
  return s;
}

TEST(ScenarioProperty, SerializeParseRoundTrip) {
  auto g = testing::make_gen(61);
  for (int i = 0; i < 200; ++i) {
    const Scenario s = random_scenario(g);
    const std::string text = serialize_scenario(s);
    const Scenario back = parse_scenario(text);
    EXPECT_EQ(back, s) << text;
    EXPECT_EQ(serialize_scenario(back), text);
  }
}

TEST(ScenarioProperty, ShippedScenariosRoundTrip) {
  for (const char* name : {"table3.scenario", "calibrated_noisy.scenario"}) {
    const Scenario s = load_scenario(std::string(LGTBIDS_SOURCE_DIR) + "/scenarios/" + name);
    EXPECT_EQ(parse_scenario(serialize_scenario(s)), s) << name;
  }
}

}  // namespace
}  // namespace lgtbids
