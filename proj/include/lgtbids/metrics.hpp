#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lgtbids/attack.hpp"
#include "lgtbids/detector.hpp"
#include "lgtbids/error.hpp"
#include "lgtbids/format.hpp"

namespace lgtbids {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) noexcept {
    return a += b;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

/// A fraction in [0, 1], or nullopt when its denominator is zero.
using Fraction = std::optional<double>;

struct MetricSuite {
  Fraction accuracy;
  Fraction detection_rate;  // T+ / (T+ + F+)
  Fraction far;
  Fraction for_;
  Fraction fnr;
  Fraction specificity;
  Fraction sensitivity;
  Fraction balanced_accuracy;
  Fraction f1;
  Fraction error_rate;

  bool operator==(const MetricSuite&) const = default;
};

inline Fraction ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

inline MetricSuite metric_suite(const ConfusionCounts& c) {
  MetricSuite m;
  const std::uint64_t all = c.total();
  m.accuracy = ratio(c.tp + c.tn, all);
  m.detection_rate = ratio(c.tp, c.tp + c.fp);
  m.far = ratio(c.fp, c.fp + c.tn);
  m.for_ = ratio(c.fn, c.fn + c.tp);
  m.fnr = ratio(c.fn, c.tp + c.fn);
  m.specificity = ratio(c.tn, c.fp + c.tn);
  m.sensitivity = ratio(c.tp, c.tp + c.fn);
  if (m.sensitivity && m.specificity)
    m.balanced_accuracy = (*m.sensitivity + *m.specificity) / 2.0;
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  m.error_rate = ratio(c.fp + c.fn, all);
  return m;
}

/// Tallies flags against ground truth over `scored_nodes` only.
inline ConfusionCounts score(std::span<const DetectionFlag> flags, const GroundTruth& truth,
                             std::span<const NodeId> scored_nodes) {
  std::map<NodeId, int> by_node;
  for (const DetectionFlag& f : flags) by_node[f.node] = f.flag;
  ConfusionCounts c;
  for (const NodeId& id : scored_nodes) {
    auto it = by_node.find(id);
    if (it == by_node.end())
      throw Error(ErrorCode::FlagTruthMismatch, "no flag for scored node '" + id + "'", {id});
    const bool flagged = it->second != 0;
    const bool attacked = truth.attacked.count(id) != 0;
    if (flagged && attacked) ++c.tp;
    else if (flagged) ++c.fp;
    else if (attacked) ++c.fn;
    else ++c.tn;
  }
  return c;
}

/// Scores a flag list over exactly the nodes it covers.
inline ConfusionCounts score(std::span<const DetectionFlag> flags, const GroundTruth& truth) {
  std::vector<NodeId> nodes;
  nodes.reserve(flags.size());
  for (const DetectionFlag& f : flags) nodes.push_back(f.node);
  return score(flags, truth, nodes);
}

struct TrialSummary {
  std::map<AttackKind, ConfusionCounts> per_attack_counts;
  ConfusionCounts overall_counts;
  std::map<AttackKind, MetricSuite> per_attack;
  MetricSuite overall;
  double mean_detection_seconds = 0.0;
  std::map<std::size_t, double> per_layer_ee;
  std::map<std::size_t, std::uint64_t> per_layer_ops;
  std::uint64_t trials = 0;

  bool operator==(const TrialSummary&) const = default;
};

/// Micro-averaged summary: confusion counts are summed per attack kind and
/// overall, then turned into metrics. A trial contributes to every kind it
/// contains. `mode` picks the screened flags or the full-scan oracle flags.
inline TrialSummary aggregate(std::span<const DetectionReport> reports,
                              std::span<const GroundTruth> truths,
                              std::span<const std::vector<AttackSpec>> specs,
                              ScoringMode mode = ScoringMode::Screened) {
  if (reports.size() != truths.size() || reports.size() != specs.size())
    throw Error(ErrorCode::LengthMismatch,
                "aggregate needs one report, truth and attack list per trial");
  TrialSummary s;
  s.trials = reports.size();
  std::map<std::size_t, double> ee_sum;
  std::map<std::size_t, std::uint64_t> ee_n;
  double seconds = 0.0;
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const ConfusionCounts c = score(
        mode == ScoringMode::Screened ? reports[t].flags : reports[t].oracle_flags, truths[t]);
    s.overall_counts += c;
    std::set<AttackKind> kinds;
    for (const AttackSpec& a : specs[t]) kinds.insert(a.kind);
    for (AttackKind k : kinds) s.per_attack_counts[k] += c;
    seconds += reports[t].elapsed_detection_seconds;
    for (const auto& [layer, ee] : reports[t].per_layer_mean_ee) {
      ee_sum[layer] += ee;
      ++ee_n[layer];
    }
    for (const auto& [layer, ops] : reports[t].per_layer_ops) s.per_layer_ops[layer] += ops;
  }
  for (const auto& [layer, sum] : ee_sum) s.per_layer_ee[layer] = sum / static_cast<double>(ee_n[layer]);
  s.overall = metric_suite(s.overall_counts);
  for (const auto& [k, c] : s.per_attack_counts) s.per_attack[k] = metric_suite(c);
  s.mean_detection_seconds = reports.empty() ? 0.0 : seconds / static_cast<double>(reports.size());
  return s;
}

inline std::string format_fraction(const Fraction& f) { return f ? format_double(*f) : "NA"; }
inline std::string format_percent2(const Fraction& f) { return f ? format_fixed2(*f * 100.0) : "NA"; }

/// Summary CSV: one row per attack kind present, then an "overall" row.
/// Columns follow the per-attack performance table; every metric has a full
/// precision fraction column and a 2-decimal percentage column. Wall-clock
/// timings are deliberately absent so the file is reproducible.
inline void write_summary_csv(std::ostream& os, const TrialSummary& s) {
  struct Col {
    const char* name;
    Fraction MetricSuite::*field;
  };
  static const Col cols[] = {
      {"accuracy", &MetricSuite::accuracy},
      {"detection_rate", &MetricSuite::detection_rate},
      {"error_rate", &MetricSuite::error_rate},
      {"far", &MetricSuite::far},
      {"fnr", &MetricSuite::fnr},
      {"for", &MetricSuite::for_},
      {"sensitivity", &MetricSuite::sensitivity},
      {"balanced_accuracy", &MetricSuite::balanced_accuracy},
      {"f1", &MetricSuite::f1},
      {"specificity", &MetricSuite::specificity},
  };
  os << "attack,tp,fp,tn,fn";
  for (const Col& c : cols) os << ',' << c.name << ',' << c.name << "_pct";
  os << '\n';
  auto row = [&](std::string_view label, const ConfusionCounts& cc, const MetricSuite& m) {
    os << label << ',' << cc.tp << ',' << cc.fp << ',' << cc.tn << ',' << cc.fn;
    for (const Col& c : cols)
      os << ',' << format_fraction(m.*(c.field)) << ',' << format_percent2(m.*(c.field));
    os << '\n';
  };
  for (AttackKind k : kAllAttackKinds) {
    auto it = s.per_attack.find(k);
    if (it != s.per_attack.end()) row(to_string(k), s.per_attack_counts.at(k), it->second);
  }
  row("overall", s.overall_counts, s.overall);
}

/// Per-layer plot data: mean achieved EE and detector operation counts.
inline void write_layers_csv(std::ostream& os, const TrialSummary& s) {
  os << "layer,mean_ee_bps_per_w,mean_ee_gbps_per_w_2dp,ops\n";
  std::set<std::size_t> layers;
  for (const auto& [l, v] : s.per_layer_ee) layers.insert(l);
  for (const auto& [l, v] : s.per_layer_ops) layers.insert(l);
  for (std::size_t l : layers) {
    auto ee = s.per_layer_ee.find(l);
    auto ops = s.per_layer_ops.find(l);
    os << l << ',' << (ee != s.per_layer_ee.end() ? format_double(ee->second) : "NA") << ','
       << (ee != s.per_layer_ee.end() ? format_fixed2(ee->second / 1e9) : "NA") << ','
       << (ops != s.per_layer_ops.end() ? ops->second : 0) << '\n';
  }
}

}  // namespace lgtbids
