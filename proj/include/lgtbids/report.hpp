#pragma once

// Output files of a run and the JSON document they can be regenerated from.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lgtbids/simulation.hpp"

namespace lgtbids {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

inline constexpr std::string_view kSummaryFile = "summary.csv";
inline constexpr std::string_view kEnvelopesFile = "envelopes.csv";
inline constexpr std::string_view kReportFile = "report.json";
inline constexpr std::string_view kLayersFile = "layers.csv";
inline constexpr std::string_view kEdgesFile = "edges.csv";

struct OutputSelection {
  bool summary = false;
  bool envelopes = false;
  bool report = false;
  bool layers = false;
  bool edges = false;

  static OutputSelection all() { return {true, true, true, true, true}; }
  static OutputSelection csv() { return {true, true, false, true, true}; }
  static OutputSelection json_only() { return {false, false, true, false, false}; }
  bool operator==(const OutputSelection&) const = default;
};

/// "csv" | "json" | "all", or a comma list of summary, envelopes, report,
/// layers, edges.
inline OutputSelection parse_output_selection(std::string_view s) {
  if (s == "all") return OutputSelection::all();
  if (s == "csv") return OutputSelection::csv();
  if (s == "json") return OutputSelection::json_only();
  OutputSelection sel;
  for (std::string_view part : detail::split_char(s, ',')) {
    part = detail::trim(part);
    if (part == "summary") sel.summary = true;
    else if (part == "envelopes") sel.envelopes = true;
    else if (part == "report") sel.report = true;
    else if (part == "layers") sel.layers = true;
    else if (part == "edges") sel.edges = true;
    else
      throw Error(ErrorCode::ValidationError,
                  "unknown output '" + std::string(part) +
                      "' (csv, json, all, or summary,envelopes,report,layers,edges)");
  }
  return sel;
}

// ---------------------------------------------------------------------------
// CSV writers
// ---------------------------------------------------------------------------

/// Per-node envelope table. Rates are in bps and bps/W at full precision;
/// each is followed by a 2-decimal display column in Gbps or Gbps/W.
inline void write_envelopes_csv(std::ostream& os, const std::vector<EnvelopeRow>& rows) {
  struct Col {
    const char* name;
    double BoundsEnvelope::*field;
  };
  static const Col cols[] = {
      {"secrecy_lower_bps", &BoundsEnvelope::secrecy_lower_bps},
      {"secrecy_upper_bps", &BoundsEnvelope::secrecy_upper_bps},
      {"ee_lower_bps_per_w", &BoundsEnvelope::ee_lower},
      {"ee_upper_bps_per_w", &BoundsEnvelope::ee_upper},
      {"ee_achieved_bps_per_w", &BoundsEnvelope::ee_achieved},
      {"secrecy_achieved_bps", &BoundsEnvelope::secrecy_achieved_bps},
  };
  os << "layer,node,kind,link_src,tx_power_dbm,tx_power_dbm_2dp";
  for (const Col& c : cols) os << ',' << c.name << ',' << c.name << "_g2dp";
  os << ",screened,flag,attacked,status\n";
  for (const EnvelopeRow& r : rows) {
    os << r.layer << ',' << r.node << ',' << to_string(r.kind) << ',' << r.envelope.link_src << ','
       << format_double(r.tx_power_dbm) << ',' << format_fixed2(r.tx_power_dbm);
    for (const Col& c : cols)
      os << ',' << format_double(r.envelope.*(c.field)) << ','
         << format_fixed2(r.envelope.*(c.field) / 1e9);
    os << ',' << (r.screened ? 1 : 0) << ',' << r.flag << ',' << (r.attacked ? 1 : 0) << ','
       << r.status << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace detail {

inline json fraction_json(const Fraction& f) { return f ? json(*f) : json(nullptr); }
inline Fraction fraction_from(const json& j) {
  return j.is_null() ? Fraction{} : Fraction{j.get<double>()};
}

template <typename E, std::size_t N>
E enum_from(const json& j, const E (&all)[N], const char* what) {
  const std::string s = j.get<std::string>();
  for (E e : all)
    if (to_string(e) == s) return e;
  throw Error(ErrorCode::SyntaxError, std::string("unknown ") + what + " '" + s + "'");
}

inline constexpr Breach kAllBreaches[] = {Breach::None, Breach::SecrecyLow, Breach::SecrecyHigh,
                                          Breach::EELow, Breach::EEHigh, Breach::Multiple};
inline constexpr RemediationPhase kAllPhases[] = {
    RemediationPhase::SilentRandomBits, RemediationPhase::ReAuthPending,
    RemediationPhase::ReAuthFailed, RemediationPhase::Reallocated};
inline constexpr NodeKind kAllNodeKinds[] = {
    NodeKind::BS,      NodeKind::SCA,    NodeKind::Relay,      NodeKind::CU,        NodeKind::D2DDevice,
    NodeKind::Vehicle, NodeKind::Sensor, NodeKind::SpectrumTx, NodeKind::SpectrumRx};

}  // namespace detail

inline void to_json(json& j, const ConfusionCounts& c) {
  j = json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}
inline void from_json(const json& j, ConfusionCounts& c) {
  c.tp = j.at("tp").get<std::uint64_t>();
  c.fp = j.at("fp").get<std::uint64_t>();
  c.tn = j.at("tn").get<std::uint64_t>();
  c.fn = j.at("fn").get<std::uint64_t>();
}

inline void to_json(json& j, const MetricSuite& m) {
  using detail::fraction_json;
  j = json{{"accuracy", fraction_json(m.accuracy)},
           {"detection_rate", fraction_json(m.detection_rate)},
           {"far", fraction_json(m.far)},
           {"for", fraction_json(m.for_)},
           {"fnr", fraction_json(m.fnr)},
           {"specificity", fraction_json(m.specificity)},
           {"sensitivity", fraction_json(m.sensitivity)},
           {"balanced_accuracy", fraction_json(m.balanced_accuracy)},
           {"f1", fraction_json(m.f1)},
           {"error_rate", fraction_json(m.error_rate)}};
}
inline void from_json(const json& j, MetricSuite& m) {
  using detail::fraction_from;
  m.accuracy = fraction_from(j.at("accuracy"));
  m.detection_rate = fraction_from(j.at("detection_rate"));
  m.far = fraction_from(j.at("far"));
  m.for_ = fraction_from(j.at("for"));
  m.fnr = fraction_from(j.at("fnr"));
  m.specificity = fraction_from(j.at("specificity"));
  m.sensitivity = fraction_from(j.at("sensitivity"));
  m.balanced_accuracy = fraction_from(j.at("balanced_accuracy"));
  m.f1 = fraction_from(j.at("f1"));
  m.error_rate = fraction_from(j.at("error_rate"));
}

inline void to_json(json& j, const TrialSummary& s) {
  json per_attack = json::array();
  for (AttackKind k : kAllAttackKinds) {
    auto it = s.per_attack_counts.find(k);
    if (it == s.per_attack_counts.end()) continue;
    per_attack.push_back(
        {{"attack", to_string(k)}, {"counts", it->second}, {"metrics", s.per_attack.at(k)}});
  }
  json layers = json::array();
  for (const auto& [layer, ee] : s.per_layer_ee) {
    auto ops = s.per_layer_ops.find(layer);
    layers.push_back({{"layer", layer},
                      {"mean_ee_bps_per_w", ee},
                      {"ops", ops == s.per_layer_ops.end() ? 0 : ops->second}});
  }
  j = json{{"trials", s.trials},
           {"overall_counts", s.overall_counts},
           {"overall", s.overall},
           {"per_attack", per_attack},
           {"layers", layers},
           {"mean_detection_seconds", s.mean_detection_seconds}};
}
inline void from_json(const json& j, TrialSummary& s) {
  s.trials = j.at("trials").get<std::uint64_t>();
  s.overall_counts = j.at("overall_counts").get<ConfusionCounts>();
  s.overall = j.at("overall").get<MetricSuite>();
  for (const json& a : j.at("per_attack")) {
    const AttackKind k = detail::enum_from(a.at("attack"), kAllAttackKinds, "attack kind");
    s.per_attack_counts[k] = a.at("counts").get<ConfusionCounts>();
    s.per_attack[k] = a.at("metrics").get<MetricSuite>();
  }
  for (const json& l : j.at("layers")) {
    const auto layer = l.at("layer").get<std::size_t>();
    s.per_layer_ee[layer] = l.at("mean_ee_bps_per_w").get<double>();
    s.per_layer_ops[layer] = l.at("ops").get<std::uint64_t>();
  }
  s.mean_detection_seconds = j.at("mean_detection_seconds").get<double>();
}

inline void to_json(json& j, const AttackConstants& c) {
  j = json{{"half_duplex_factor", c.half_duplex_factor},
           {"spoof_knee_m", c.spoof_knee_m},
           {"handover_penalty_db", c.handover_penalty_db},
           {"dos_factor", c.dos_factor},
           {"uav_factor", c.uav_factor}};
}
inline void from_json(const json& j, AttackConstants& c) {
  c.half_duplex_factor = j.at("half_duplex_factor").get<double>();
  c.spoof_knee_m = j.at("spoof_knee_m").get<double>();
  c.handover_penalty_db = j.at("handover_penalty_db").get<double>();
  c.dos_factor = j.at("dos_factor").get<double>();
  c.uav_factor = j.at("uav_factor").get<double>();
}

inline void to_json(json& j, const AttackSpec& a) {
  j = json{{"kind", to_string(a.kind)},
           {"target", a.target},
           {"intensity", a.intensity},
           {"seed", a.seed},
           {"constants", a.constants}};
}
inline void from_json(const json& j, AttackSpec& a) {
  a.kind = detail::enum_from(j.at("kind"), kAllAttackKinds, "attack kind");
  a.target = j.at("target").get<std::string>();
  a.intensity = j.at("intensity").get<double>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.constants = j.at("constants").get<AttackConstants>();
}

inline void to_json(json& j, const VulnerableEntry& v) {
  j = json{{"layer", v.layer}, {"node", v.node}, {"capacity_bps", v.capacity_bps}};
}
inline void from_json(const json& j, VulnerableEntry& v) {
  v.layer = j.at("layer").get<std::size_t>();
  v.node = j.at("node").get<std::string>();
  v.capacity_bps = j.at("capacity_bps").get<double>();
}

inline void to_json(json& j, const DetectionFlag& f) {
  j = json{{"node", f.node},
           {"flag", f.flag},
           {"breached", to_string(f.breached)},
           {"breach_mask", f.breach_mask}};
}
inline void from_json(const json& j, DetectionFlag& f) {
  f.node = j.at("node").get<std::string>();
  f.flag = j.at("flag").get<int>();
  f.breached = detail::enum_from(j.at("breached"), detail::kAllBreaches, "breach");
  f.breach_mask = j.at("breach_mask").get<unsigned>();
}

inline void to_json(json& j, const Edge& e) {
  j = json{{"src", e.src},
           {"dst", e.dst},
           {"distance_m", e.distance_m},
           {"entity_depths_m", e.entity_depths_m}};
}
inline void from_json(const json& j, Edge& e) {
  e.src = j.at("src").get<std::string>();
  e.dst = j.at("dst").get<std::string>();
  e.distance_m = j.at("distance_m").get<double>();
  e.entity_depths_m = j.at("entity_depths_m").get<std::vector<double>>();
}

inline void to_json(json& j, const BoundsEnvelope& e) {
  j = json{{"node", e.node},
           {"link_src", e.link_src},
           {"secrecy_lower_bps", e.secrecy_lower_bps},
           {"secrecy_upper_bps", e.secrecy_upper_bps},
           {"secrecy_achieved_bps", e.secrecy_achieved_bps},
           {"ee_lower_bps_per_w", e.ee_lower},
           {"ee_upper_bps_per_w", e.ee_upper},
           {"ee_achieved_bps_per_w", e.ee_achieved},
           {"capacity_lower_bps", e.capacity_lower_bps},
           {"capacity_upper_bps", e.capacity_upper_bps},
           {"capacity_achieved_bps", e.capacity_achieved_bps},
           {"eavesdropper_bps", e.eavesdropper_bps},
           {"p_cc_w", e.p_cc_w},
           {"bandwidth_hz", e.bandwidth_hz},
           {"distance_m", e.distance_m},
           {"max_extra_loss_db", e.max_extra_loss_db},
           {"achieved_extra_loss_db", e.achieved_extra_loss_db}};
}
inline void from_json(const json& j, BoundsEnvelope& e) {
  e.node = j.at("node").get<std::string>();
  e.link_src = j.at("link_src").get<std::string>();
  e.secrecy_lower_bps = j.at("secrecy_lower_bps").get<double>();
  e.secrecy_upper_bps = j.at("secrecy_upper_bps").get<double>();
  e.secrecy_achieved_bps = j.at("secrecy_achieved_bps").get<double>();
  e.ee_lower = j.at("ee_lower_bps_per_w").get<double>();
  e.ee_upper = j.at("ee_upper_bps_per_w").get<double>();
  e.ee_achieved = j.at("ee_achieved_bps_per_w").get<double>();
  e.capacity_lower_bps = j.at("capacity_lower_bps").get<double>();
  e.capacity_upper_bps = j.at("capacity_upper_bps").get<double>();
  e.capacity_achieved_bps = j.at("capacity_achieved_bps").get<double>();
  e.eavesdropper_bps = j.at("eavesdropper_bps").get<double>();
  e.p_cc_w = j.at("p_cc_w").get<double>();
  e.bandwidth_hz = j.at("bandwidth_hz").get<double>();
  e.distance_m = j.at("distance_m").get<double>();
  e.max_extra_loss_db = j.at("max_extra_loss_db").get<double>();
  e.achieved_extra_loss_db = j.at("achieved_extra_loss_db").get<double>();
}

inline void to_json(json& j, const RemediationState& r) {
  json history = json::array();
  for (RemediationPhase p : r.history) history.push_back(to_string(p));
  j = json{{"node", r.node},
           {"phase", to_string(r.phase)},
           {"random_bits_sent", r.random_bits_sent},
           {"new_edge", r.new_edge ? json(*r.new_edge) : json(nullptr)},
           {"new_envelope", r.new_envelope ? json(*r.new_envelope) : json(nullptr)},
           {"history", history}};
}
inline void from_json(const json& j, RemediationState& r) {
  r.node = j.at("node").get<std::string>();
  r.phase = detail::enum_from(j.at("phase"), detail::kAllPhases, "remediation phase");
  r.random_bits_sent = j.at("random_bits_sent").get<std::uint64_t>();
  if (!j.at("new_edge").is_null()) r.new_edge = j.at("new_edge").get<Edge>();
  if (!j.at("new_envelope").is_null()) r.new_envelope = j.at("new_envelope").get<BoundsEnvelope>();
  for (const json& p : j.at("history"))
    r.history.push_back(detail::enum_from(p, detail::kAllPhases, "remediation phase"));
}

inline json layer_map_json(const std::map<std::size_t, double>& ee,
                           const std::map<std::size_t, std::uint64_t>& ops) {
  json out = json::array();
  for (const auto& [layer, v] : ee)
    out.push_back({{"layer", layer}, {"mean_ee_bps_per_w", v}, {"ops", ops.at(layer)}});
  return out;
}

inline void to_json(json& j, const TrialRecord& t) {
  j = json{{"index", t.index},
           {"seed", t.seed},
           {"attacks", t.attacks},
           {"attacked", t.truth.attacked},
           {"screening", t.report.screening.per_layer_vulnerable},
           {"flags", t.report.flags},
           {"oracle_flags", t.report.oracle_flags},
           {"remediation", t.report.remediation},
           {"layers", layer_map_json(t.report.per_layer_mean_ee, t.report.per_layer_ops)},
           {"elapsed_detection_seconds", t.report.elapsed_detection_seconds}};
}
inline void from_json(const json& j, TrialRecord& t) {
  t.index = j.at("index").get<std::uint64_t>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.attacks = j.at("attacks").get<std::vector<AttackSpec>>();
  t.truth.attacked = j.at("attacked").get<std::set<NodeId>>();
  t.report.screening.per_layer_vulnerable = j.at("screening").get<std::vector<VulnerableEntry>>();
  t.report.flags = j.at("flags").get<std::vector<DetectionFlag>>();
  t.report.oracle_flags = j.at("oracle_flags").get<std::vector<DetectionFlag>>();
  t.report.remediation = j.at("remediation").get<std::vector<RemediationState>>();
  for (const json& l : j.at("layers")) {
    const auto layer = l.at("layer").get<std::size_t>();
    t.report.per_layer_mean_ee[layer] = l.at("mean_ee_bps_per_w").get<double>();
    t.report.per_layer_ops[layer] = l.at("ops").get<std::uint64_t>();
  }
  t.report.elapsed_detection_seconds = j.at("elapsed_detection_seconds").get<double>();
}

inline void to_json(json& j, const EnvelopeRow& r) {
  j = json{{"layer", r.layer},
           {"node", r.node},
           {"kind", to_string(r.kind)},
           {"tx_power_dbm", r.tx_power_dbm},
           {"envelope", r.envelope},
           {"screened", r.screened},
           {"flag", r.flag},
           {"attacked", r.attacked},
           {"status", r.status}};
}
inline void from_json(const json& j, EnvelopeRow& r) {
  r.layer = j.at("layer").get<std::size_t>();
  r.node = j.at("node").get<std::string>();
  r.kind = detail::enum_from(j.at("kind"), detail::kAllNodeKinds, "node kind");
  r.tx_power_dbm = j.at("tx_power_dbm").get<double>();
  r.envelope = j.at("envelope").get<BoundsEnvelope>();
  r.screened = j.at("screened").get<bool>();
  r.flag = j.at("flag").get<int>();
  r.attacked = j.at("attacked").get<bool>();
  r.status = j.at("status").get<std::string>();
}

inline void to_json(json& j, const EdgeListRow& r) {
  j = json{{"src", r.src},
           {"dst", r.dst},
           {"src_layer", r.src_layer},
           {"dst_layer", r.dst_layer},
           {"distance_m", r.distance_m}};
}
inline void from_json(const json& j, EdgeListRow& r) {
  r.src = j.at("src").get<std::string>();
  r.dst = j.at("dst").get<std::string>();
  r.src_layer = j.at("src_layer").get<std::size_t>();
  r.dst_layer = j.at("dst_layer").get<std::size_t>();
  r.distance_m = j.at("distance_m").get<double>();
}

/// The detection report document; see docs/report_schema.json.
inline json report_json(const RunArtifacts& a) {
  return json{{"schema_version", kReportSchemaVersion},
              {"seed", a.seed},
              {"scoring", a.mode == ScoringMode::Screened ? "screened" : "full_scan"},
              {"summary", a.summary},
              {"envelopes", a.table4_dump},
              {"graph", a.graph},
              {"trials", a.trials}};
}

inline RunArtifacts artifacts_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion)
      throw Error(ErrorCode::ValidationError, "unsupported report schema_version");
    RunArtifacts a;
    a.seed = j.at("seed").get<std::uint64_t>();
    const std::string scoring = j.at("scoring").get<std::string>();
    if (scoring != "screened" && scoring != "full_scan")
      throw Error(ErrorCode::ValidationError, "unknown scoring '" + scoring + "'");
    a.mode = scoring == "screened" ? ScoringMode::Screened : ScoringMode::FullScan;
    a.summary = j.at("summary").get<TrialSummary>();
    a.table4_dump = j.at("envelopes").get<std::vector<EnvelopeRow>>();
    a.graph = j.at("graph").get<std::vector<EdgeListRow>>();
    a.trials = j.at("trials").get<std::vector<TrialRecord>>();
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SyntaxError, std::string("malformed report: ") + e.what());
  }
}

inline RunArtifacts load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'", {path});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SyntaxError, path + ": " + e.what(), {path});
  }
  return artifacts_from_json(j);
}

// ---------------------------------------------------------------------------
// emit
// ---------------------------------------------------------------------------

/// Writes the selected files into `dir` (created if needed) and returns their
/// paths in a fixed order. Output depends only on `a`.
inline std::vector<std::filesystem::path> emit(const RunArtifacts& a, const OutputSelection& sel,
                                               const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "'",
                {dir.string()});

  std::vector<fs::path> written;
  auto write = [&](std::string_view name, auto&& body) {
    const fs::path p = dir / name;
    std::ostringstream os;
    body(os);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << os.str();
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + p.string() + "'", {p.string()});
    written.push_back(p);
  };
  if (sel.summary) write(kSummaryFile, [&](std::ostream& os) { write_summary_csv(os, a.summary); });
  if (sel.envelopes)
    write(kEnvelopesFile, [&](std::ostream& os) { write_envelopes_csv(os, a.table4_dump); });
  if (sel.report) write(kReportFile, [&](std::ostream& os) { os << report_json(a).dump(2) << '\n'; });
  if (sel.layers) write(kLayersFile, [&](std::ostream& os) { write_layers_csv(os, a.summary); });
  if (sel.edges) write(kEdgesFile, [&](std::ostream& os) { write_edge_list(os, a.graph); });
  return written;
}

}  // namespace lgtbids
