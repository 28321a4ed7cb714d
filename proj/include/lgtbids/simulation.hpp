#pragma once

// Seeded Monte Carlo driver: topology -> channel sampling -> attacks ->
// detection -> scoring, one independent trial per seed.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lgtbids/attack.hpp"
#include "lgtbids/channel.hpp"
#include "lgtbids/detector.hpp"
#include "lgtbids/error.hpp"
#include "lgtbids/metrics.hpp"
#include "lgtbids/rng.hpp"
#include "lgtbids/scenario.hpp"
#include "lgtbids/topology.hpp"

namespace lgtbids {

struct RunOptions {
  unsigned threads = 1;  // trial-level workers
  ScoringMode mode = ScoringMode::Screened;
  std::uint64_t first_trial = 0;  // trial t uses derive_seed(seed, first_trial + t)
  std::optional<std::uint64_t> trials;  // overrides Scenario::trials
  std::optional<std::uint64_t> seed;    // overrides Scenario::seed
};

struct TrialRecord {
  std::uint64_t index = 0;  // absolute trial index
  std::uint64_t seed = 0;
  std::vector<AttackSpec> attacks;
  GroundTruth truth;
  DetectionReport report;

  bool same_outcome(const TrialRecord& o) const {
    return index == o.index && seed == o.seed && attacks == o.attacks && truth == o.truth &&
           report.same_outcome(o.report);
  }
};

/// One row of the per-node envelope table.
struct EnvelopeRow {
  std::size_t layer = 0;
  NodeId node;
  NodeKind kind = NodeKind::CU;
  double tx_power_dbm = 0.0;
  BoundsEnvelope envelope;
  bool screened = false;
  int flag = 0;       // range_cross on this node's envelope
  bool attacked = false;
  std::string status;  // "Under attack" | "Vulnerable" | "Normal"

  bool operator==(const EnvelopeRow&) const = default;
};

struct RunArtifacts {
  std::uint64_t seed = 0;
  ScoringMode mode = ScoringMode::Screened;
  std::vector<TrialRecord> trials;
  TrialSummary summary;
  std::vector<EnvelopeRow> table4_dump;  // from the first trial of the run
  std::vector<EdgeListRow> graph;
};

/// Status label of a node in the envelope table.
inline std::string envelope_status(bool screened, int flag) {
  if (screened && flag) return "Under attack";
  if (screened) return "Vulnerable";
  return "Normal";
}

namespace detail {

/// Per-run, read-only data shared by all trials.
struct TrialContext {
  const Scenario& scenario;
  const LayeredTopology& topo;
  std::vector<double> eavesdropper;  // per topo.edges() index
  std::map<std::pair<NodeId, NodeId>, std::size_t> edge_index;
  std::vector<NodeId> attack_pool;    // every non-BS node
  std::vector<NodeId> handover_pool;  // mobile nodes in the two outermost layers

  TrialContext(const Scenario& s, const LayeredTopology& t) : scenario(s), topo(t) {
    std::map<std::pair<NodeId, NodeId>, EavesdropperSpec> spec;
    for (const EdgeSpec& e : s.edges) spec[{e.edge.src, e.edge.dst}] = e.eavesdropper;
    for (std::size_t i = 0; i < t.edges().size(); ++i) {
      const Edge& e = t.edges()[i];
      edge_index[{e.src, e.dst}] = i;
      const EavesdropperSpec& ev = spec.at({e.src, e.dst});
      switch (ev.mode) {
        case EavesdropperSpec::Mode::Global: eavesdropper.push_back(s.eavesdropper_bps); break;
        case EavesdropperSpec::Mode::Constant: eavesdropper.push_back(ev.value); break;
        case EavesdropperSpec::Mode::Distance:
          eavesdropper.push_back(
              eavesdropper_capacity_at(s.channel, t.node(e.src).tx_power_dbm, ev.value));
          break;
      }
    }
    attack_pool = t.non_bs_nodes();
    for (const NodeId& id : attack_pool)
      if (handover_applicable(t, id)) handover_pool.push_back(id);
  }
};

/// Honest envelopes of every edge for one trial: achieved extra loss drawn
/// uniformly from [0, P_e] per edge, optionally with a Rayleigh SNR gain.
inline std::vector<BoundsEnvelope> sample_edges(const TrialContext& ctx, Rng& rng) {
  const Scenario& s = ctx.scenario;
  std::vector<BoundsEnvelope> out;
  out.reserve(ctx.topo.edges().size());
  for (std::size_t i = 0; i < ctx.topo.edges().size(); ++i) {
    const Edge& e = ctx.topo.edges()[i];
    const double pe = extra_loss_db(s.channel, e.entity_depths_m);
    const double loss = rng.uniform(0.0, pe);
    double gain = 1.0;
    if (s.fading == FadingModel::Rayleigh) {
      // both draws are always consumed so the stream layout is fixed
      const bool faded = rng.bernoulli(s.fading_probability);
      const double g = rng.exponential();
      if (faded) gain = g;
    }
    out.push_back(link_bounds(s.channel, e, ctx.topo.node(e.src).tx_power_dbm,
                              ctx.topo.node(e.dst).power_consumption_w, ctx.eavesdropper[i],
                              std::min(loss, pe), gain));
  }
  return out;
}

inline std::vector<AttackSpec> resolve_attacks(const TrialContext& ctx, std::uint64_t trial,
                                               Rng& rng) {
  const Scenario& s = ctx.scenario;
  std::vector<AttackSpec> out;
  if (s.attacks.empty()) return out;
  std::vector<std::size_t> active;
  if (s.schedule == AttackSchedule::All) {
    for (std::size_t i = 0; i < s.attacks.size(); ++i) active.push_back(i);
  } else {
    active.push_back(trial % s.attacks.size());
  }
  for (std::size_t i : active) {
    const AttackBlock& b = s.attacks[i];
    AttackSpec a;
    a.kind = b.kind;
    a.constants = b.constants;
    a.seed = derive_seed(b.seed, trial);
    if (b.random_target) {
      const auto& pool = b.kind == AttackKind::Handover ? ctx.handover_pool : ctx.attack_pool;
      if (pool.empty())
        throw Error(ErrorCode::InapplicableAttack,
                    "no eligible random target for " + std::string(to_string(b.kind)));
      a.target = pool[rng.below(pool.size())];
    } else {
      a.target = b.target;
    }
    a.intensity = b.intensity_min == b.intensity_max
                      ? b.intensity_min
                      : rng.uniform(b.intensity_min, b.intensity_max);
    out.push_back(std::move(a));
  }
  return out;
}

struct TrialOutput {
  TrialRecord record;
  EnvelopeMap envelopes;  // post-attack, per node
};

inline TrialOutput run_trial(const TrialContext& ctx, std::uint64_t master_seed,
                             std::uint64_t trial) {
  const Scenario& s = ctx.scenario;
  const LayeredTopology& topo = ctx.topo;
  TrialOutput out;
  TrialRecord& rec = out.record;
  rec.index = trial;
  rec.seed = derive_seed(master_seed, trial);

  Rng channel_rng(derive_seed(rec.seed, Stream::ChannelSampling));
  const std::vector<BoundsEnvelope> edge_env = sample_edges(ctx, channel_rng);
  auto env_of = [&](const Edge& e) -> const BoundsEnvelope& {
    return edge_env[ctx.edge_index.at({e.src, e.dst})];
  };

  EnvelopeMap honest;
  for (const NodeId& id : topo.non_bs_nodes()) {
    const ParentChoice p =
        parent_edge(topo, id, [&](const Edge& e) { return env_of(e).capacity_achieved_bps; });
    honest.emplace(id, env_of(*p.edge));
  }

  Rng attack_rng(derive_seed(rec.seed, Stream::AttackDraws));
  rec.attacks = resolve_attacks(ctx, trial, attack_rng);
  AttackOutcome attacked = apply_attacks(rec.attacks, topo, std::move(honest));
  rec.truth = std::move(attacked.truth);

  DetectorOptions opt;
  opt.reauth_success_prob = s.reauth_success_prob;
  opt.seed = derive_seed(rec.seed, Stream::Remediation);
  opt.silence_ticks = s.silence_ticks;
  opt.alternative = [&](const Edge& e) { return env_of(e); };
  rec.report = run_lgtbids(topo, s.channel, attacked.budgets, opt);
  rec.report.oracle_flags = full_scan(topo, s.channel, attacked.budgets);
  out.envelopes = std::move(attacked.budgets);
  return out;
}

inline std::vector<EnvelopeRow> envelope_table(const LayeredTopology& topo,
                                               const EnvelopeMap& envelopes,
                                               const TrialRecord& rec) {
  std::map<NodeId, int> screened_flag;
  for (const DetectionFlag& f : rec.report.flags) screened_flag[f.node] = f.flag;
  std::vector<EnvelopeRow> rows;
  for (const NodeId& id : topo.non_bs_nodes()) {
    EnvelopeRow r;
    r.layer = topo.layer_of(id);
    r.node = id;
    r.kind = topo.node(id).kind;
    r.tx_power_dbm = topo.node(id).tx_power_dbm;
    r.envelope = envelopes.at(id);
    r.flag = range_cross(r.envelope).flag;
    auto it = screened_flag.find(id);
    r.screened = it != screened_flag.end();
    r.attacked = rec.truth.attacked.count(id) != 0;
    r.status = envelope_status(r.screened, r.screened ? it->second : 0);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace detail

/// Runs every trial of `scenario`. Results depend only on the scenario, the
/// seed and the trial indices; thread count changes nothing but wall time.
/// Module errors are rethrown with the failing trial's index.
inline RunArtifacts run(const Scenario& scenario, const RunOptions& opt = {}) {
  const LayeredTopology topo = build_topology(scenario.nodes, scenario.plain_edges());
  const detail::TrialContext ctx(scenario, topo);
  const std::uint64_t n = opt.trials.value_or(scenario.trials);
  const std::uint64_t master = opt.seed.value_or(scenario.seed);
  if (n < 1) throw Error(ErrorCode::ValidationError, "trials must be >= 1");

  std::vector<std::optional<detail::TrialOutput>> outputs(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t t; (t = next.fetch_add(1)) < n;) {
      try {
        detail::TrialOutput o = detail::run_trial(ctx, master, opt.first_trial + t);
        if (t != 0) o.envelopes.clear();  // only the first trial's table is kept
        outputs[t] = std::move(o);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(opt.threads, 1u), n));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  for (std::uint64_t t = 0; t < n; ++t) {
    if (!errors[t]) continue;
    const std::string where = "trial " + std::to_string(opt.first_trial + t) + ": ";
    try {
      std::rethrow_exception(errors[t]);
    } catch (const Error& e) {
      throw Error(e.code(), where + e.message(), e.subjects());
    }
  }

  RunArtifacts art;
  art.seed = master;
  art.mode = opt.mode;
  art.graph = edge_list_rows(topo);
  art.trials.reserve(n);
  art.table4_dump = detail::envelope_table(topo, outputs[0]->envelopes, outputs[0]->record);
  for (auto& o : outputs) art.trials.push_back(std::move(o->record));

  std::vector<DetectionReport> reports;
  std::vector<GroundTruth> truths;
  std::vector<std::vector<AttackSpec>> specs;
  reports.reserve(n);
  truths.reserve(n);
  specs.reserve(n);
  for (const TrialRecord& r : art.trials) {
    reports.push_back(r.report);
    truths.push_back(r.truth);
    specs.push_back(r.attacks);
  }
  art.summary = aggregate(reports, truths, specs, opt.mode);
  return art;
}

}  // namespace lgtbids
