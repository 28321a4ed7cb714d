#pragma once

// Scenario files: INI-style sections with key = value pairs, plus two
// whitespace-separated tables. The grammar is documented in
// docs/scenario_format.md.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lgtbids/attack.hpp"
#include "lgtbids/channel.hpp"
#include "lgtbids/error.hpp"
#include "lgtbids/format.hpp"
#include "lgtbids/topology.hpp"

namespace lgtbids {

inline constexpr int kScenarioVersion = 1;

/// Eavesdropper capacity on one link: the scenario-wide constant, a per-link
/// constant, or derived from an eavesdropper at a given distance from the
/// link's transmitter.
struct EavesdropperSpec {
  enum class Mode { Global, Constant, Distance };
  Mode mode = Mode::Global;
  double value = 0.0;  // bps for Constant, metres for Distance

  bool operator==(const EavesdropperSpec&) const = default;
};

struct EdgeSpec {
  Edge edge;
  EavesdropperSpec eavesdropper;

  bool operator==(const EdgeSpec&) const = default;
};

enum class AttackSchedule { All, RoundRobin };
enum class FadingModel { Off, Rayleigh };

/// An attack block. `target` is a node id, or empty when `random_target`
/// draws a fresh eligible target every trial; intensity is drawn uniformly
/// from [intensity_min, intensity_max] per trial.
struct AttackBlock {
  AttackKind kind = AttackKind::HalfDuplex;
  NodeId target;
  bool random_target = false;
  double intensity_min = 0.0;
  double intensity_max = 0.0;
  std::uint64_t seed = 0;
  AttackConstants constants;

  bool operator==(const AttackBlock&) const = default;
};

struct Scenario {
  ChannelParams channel;
  double cell_radius_m = 250.0;

  std::vector<Node> nodes;
  std::vector<EdgeSpec> edges;

  double eavesdropper_bps = 0.0;
  std::vector<AttackBlock> attacks;

  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  double reauth_success_prob = 1.0;
  std::uint64_t silence_ticks = 1;
  AttackSchedule schedule = AttackSchedule::All;
  FadingModel fading = FadingModel::Off;
  double fading_probability = 1.0;  // share of links faded per trial when fading is on

  bool operator==(const Scenario&) const = default;

  std::vector<Edge> plain_edges() const {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const EdgeSpec& e : edges) out.push_back(e.edge);
    return out;
  }
};

struct Diagnostic {
  ErrorCode code;
  std::size_t line = 0;  // 0 when the problem is not tied to a line
  std::string field;
  std::string message;
};

inline std::string to_string(const Diagnostic& d) {
  std::string s = std::string(to_string(d.code));
  if (d.line) s += " (line " + std::to_string(d.line) + ")";
  if (!d.field.empty()) s += " [" + d.field + "]";
  return s + ": " + d.message;
}

/// Thrown by parse_scenario with every problem found, not just the first.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<Diagnostic> diags)
      : Error(primary_code(diags), summarize(diags)), diagnostics_(std::move(diags)) {}

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static ErrorCode primary_code(const std::vector<Diagnostic>& d) {
    for (ErrorCode c : {ErrorCode::SyntaxError, ErrorCode::UnknownKey})
      for (const Diagnostic& x : d)
        if (x.code == c) return c;
    return ErrorCode::ValidationError;
  }
  static std::string summarize(const std::vector<Diagnostic>& d) {
    std::string s = std::to_string(d.size()) + " problem(s) in scenario";
    for (const Diagnostic& x : d) s += "\n  " + to_string(x);
    return s;
  }
  std::vector<Diagnostic> diagnostics_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

inline std::vector<std::string_view> split_char(std::string_view s, char c) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  for (;;) {
    const std::size_t e = s.find(c, b);
    out.push_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto p = line.find('#');
  return p == std::string_view::npos ? line : line.substr(0, p);
}

class ScenarioParser {
 public:
  explicit ScenarioParser(std::string_view text) : text_(text) {}

  Scenario parse() {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      const std::size_t nl = text_.find('\n', pos);
      const std::string_view raw =
          text_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++lineno;
      handle_line(trim(strip_comment(raw)), lineno);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    finish_attack();
    check_required();
    if (diags_.empty()) validate_semantics();
    if (!diags_.empty()) throw ScenarioError(std::move(diags_));
    return s_;
  }

 private:
  enum class Section { None, Channel, Run, Nodes, Edges, Attack };

  void error(ErrorCode c, std::size_t line, std::string field, std::string msg) {
    diags_.push_back({c, line, std::move(field), std::move(msg)});
  }

  void handle_line(std::string_view line, std::size_t lineno) {
    if (line.empty()) return;
    if (line.front() == '[') {
      if (line.back() != ']') {
        error(ErrorCode::SyntaxError, lineno, "", "unterminated section header");
        section_ = Section::None;
        skip_section_ = true;
        return;
      }
      open_section(trim(line.substr(1, line.size() - 2)), lineno);
      return;
    }
    if (skip_section_) return;
    switch (section_) {
      case Section::Nodes: node_row(line, lineno); return;
      case Section::Edges: edge_row(line, lineno); return;
      default: break;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      error(ErrorCode::SyntaxError, lineno, "", "expected 'key = value'");
      return;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      error(ErrorCode::SyntaxError, lineno, key, "expected 'key = value'");
      return;
    }
    switch (section_) {
      case Section::None: top_key(key, value, lineno); break;
      case Section::Channel: channel_key(key, value, lineno); break;
      case Section::Run: run_key(key, value, lineno); break;
      case Section::Attack: attack_key(key, value, lineno); break;
      default: break;
    }
  }

  void open_section(std::string_view name, std::size_t lineno) {
    finish_attack();
    skip_section_ = false;
    const std::string n(name);
    if (n == "attack") {
      section_ = Section::Attack;
      attack_ = AttackBlock{};
      attack_line_ = lineno;
      attack_keys_.clear();
      in_attack_ = true;
      return;
    }
    Section sec = Section::None;
    if (n == "channel") sec = Section::Channel;
    else if (n == "run") sec = Section::Run;
    else if (n == "nodes") sec = Section::Nodes;
    else if (n == "edges") sec = Section::Edges;
    else {
      error(ErrorCode::UnknownKey, lineno, n, "unknown section [" + n + "]");
      section_ = Section::None;
      skip_section_ = true;
      return;
    }
    if (!sections_.insert(n).second) {
      error(ErrorCode::SyntaxError, lineno, n, "section [" + n + "] appears twice");
      skip_section_ = true;
    }
    section_ = sec;
  }

  bool seen(std::set<std::string>& keys, const std::string& scope, const std::string& key,
            std::size_t lineno) {
    if (!keys.insert(key).second) {
      error(ErrorCode::SyntaxError, lineno, scope + "." + key, "duplicate key");
      return true;
    }
    return false;
  }

  std::optional<double> number(std::string_view v, const std::string& field, std::size_t lineno) {
    auto d = parse_double(v);
    if (!d || !std::isfinite(*d)) {
      error(ErrorCode::SyntaxError, lineno, field, "expected a number, got '" + std::string(v) + "'");
      return std::nullopt;
    }
    return d;
  }

  std::optional<std::uint64_t> integer(std::string_view v, const std::string& field,
                                       std::size_t lineno) {
    auto d = parse_u64(v);
    if (!d) {
      error(ErrorCode::SyntaxError, lineno, field,
            "expected a non-negative integer, got '" + std::string(v) + "'");
      return std::nullopt;
    }
    return d;
  }

  std::optional<bool> boolean(std::string_view v, const std::string& field, std::size_t lineno) {
    if (v == "yes" || v == "true") return true;
    if (v == "no" || v == "false") return false;
    error(ErrorCode::SyntaxError, lineno, field, "expected yes/no, got '" + std::string(v) + "'");
    return std::nullopt;
  }

  void top_key(const std::string& key, std::string_view value, std::size_t lineno) {
    if (seen(top_keys_, "", key, lineno)) return;
    if (key == "version") {
      if (auto v = integer(value, key, lineno); v && *v != kScenarioVersion)
        error(ErrorCode::ValidationError, lineno, key,
              "unsupported version " + std::to_string(*v) + " (expected " +
                  std::to_string(kScenarioVersion) + ")");
      return;
    }
    error(ErrorCode::UnknownKey, lineno, key, "unknown top-level key '" + key + "'");
  }

  void channel_key(const std::string& key, std::string_view value, std::size_t lineno) {
    if (seen(channel_keys_, "channel", key, lineno)) return;
    const std::string field = "channel." + key;
    double* target = nullptr;
    if (key == "frequency_hz") target = &s_.channel.frequency_hz;
    else if (key == "bandwidth_hz") target = &s_.channel.bandwidth_hz;
    else if (key == "noise_dbm") target = &s_.channel.noise_dbm;
    else if (key == "pathloss_exponent") target = &s_.channel.pathloss_exponent;
    else if (key == "gamma_per_m") target = &s_.channel.gamma_per_m;
    else if (key == "cell_radius_m") target = &s_.cell_radius_m;
    if (!target) {
      error(ErrorCode::UnknownKey, lineno, field, "unknown key");
      channel_keys_.erase(key);
      return;
    }
    if (auto v = number(value, field, lineno)) *target = *v;
  }

  void run_key(const std::string& key, std::string_view value, std::size_t lineno) {
    if (seen(run_keys_, "run", key, lineno)) return;
    const std::string field = "run." + key;
    if (key == "trials") {
      if (auto v = integer(value, field, lineno)) s_.trials = *v;
    } else if (key == "seed") {
      if (auto v = integer(value, field, lineno)) s_.seed = *v;
    } else if (key == "silence_ticks") {
      if (auto v = integer(value, field, lineno)) s_.silence_ticks = *v;
    } else if (key == "reauth_success_prob") {
      if (auto v = number(value, field, lineno)) s_.reauth_success_prob = *v;
    } else if (key == "eavesdropper_bps") {
      if (auto v = number(value, field, lineno)) s_.eavesdropper_bps = *v;
    } else if (key == "fading_probability") {
      if (auto v = number(value, field, lineno)) s_.fading_probability = *v;
    } else if (key == "schedule") {
      if (value == "all") s_.schedule = AttackSchedule::All;
      else if (value == "round_robin") s_.schedule = AttackSchedule::RoundRobin;
      else error(ErrorCode::SyntaxError, lineno, field, "expected all | round_robin");
    } else if (key == "fading") {
      if (value == "off") s_.fading = FadingModel::Off;
      else if (value == "rayleigh") s_.fading = FadingModel::Rayleigh;
      else error(ErrorCode::SyntaxError, lineno, field, "expected off | rayleigh");
    } else {
      error(ErrorCode::UnknownKey, lineno, field, "unknown key");
      run_keys_.erase(key);
    }
  }

  void attack_key(const std::string& key, std::string_view value, std::size_t lineno) {
    if (seen(attack_keys_, "attack", key, lineno)) return;
    const std::string field = "attack[" + std::to_string(s_.attacks.size()) + "]." + key;
    AttackConstants& c = attack_.constants;
    if (key == "kind") {
      if (auto k = parse_attack_kind(value)) attack_.kind = *k;
      else
        error(ErrorCode::SyntaxError, lineno, field,
              "unknown attack kind '" + std::string(value) +
                  "' (HalfDuplex, BandwidthSpoofing, Handover, DoS, UAV)");
    } else if (key == "target") {
      attack_.random_target = value == "random";
      attack_.target = attack_.random_target ? "" : std::string(value);
    } else if (key == "intensity") {
      const auto dots = value.find("..");
      if (dots == std::string_view::npos) {
        if (auto v = number(value, field, lineno)) attack_.intensity_min = attack_.intensity_max = *v;
      } else {
        auto lo = number(trim(value.substr(0, dots)), field, lineno);
        auto hi = number(trim(value.substr(dots + 2)), field, lineno);
        if (lo && hi) {
          attack_.intensity_min = *lo;
          attack_.intensity_max = *hi;
        }
      }
    } else if (key == "seed") {
      if (auto v = integer(value, field, lineno)) attack_.seed = *v;
    } else if (key == "half_duplex_factor") {
      if (auto v = number(value, field, lineno)) c.half_duplex_factor = *v;
    } else if (key == "spoof_knee_m") {
      if (auto v = number(value, field, lineno)) c.spoof_knee_m = *v;
    } else if (key == "handover_penalty_db") {
      if (auto v = number(value, field, lineno)) c.handover_penalty_db = *v;
    } else if (key == "dos_factor") {
      if (auto v = number(value, field, lineno)) c.dos_factor = *v;
    } else if (key == "uav_factor") {
      if (auto v = number(value, field, lineno)) c.uav_factor = *v;
    } else {
      error(ErrorCode::UnknownKey, lineno, field, "unknown key");
      attack_keys_.erase(key);
    }
  }

  void finish_attack() {
    if (!in_attack_) return;
    in_attack_ = false;
    const std::string field = "attack[" + std::to_string(s_.attacks.size()) + "]";
    for (const char* k : {"kind", "target", "intensity"})
      if (!attack_keys_.count(k))
        error(ErrorCode::ValidationError, attack_line_, field + "." + k, "missing required key");
    attack_lines_.push_back(attack_line_);
    s_.attacks.push_back(attack_);
  }

  void node_row(std::string_view line, std::size_t lineno) {
    const auto cols = split_ws(line);
    if (cols.size() != 5) {
      error(ErrorCode::SyntaxError, lineno, "nodes",
            "expected 5 columns: id kind tx_power_dbm p_cc_w mobile");
      return;
    }
    Node n;
    n.id = std::string(cols[0]);
    const std::string field = "nodes." + n.id;
    auto kind = parse_node_kind(cols[1]);
    if (!kind) {
      error(ErrorCode::SyntaxError, lineno, field + ".kind",
            "unknown node kind '" + std::string(cols[1]) + "'");
      return;
    }
    n.kind = *kind;
    auto tx = number(cols[2], field + ".tx_power_dbm", lineno);
    auto pcc = number(cols[3], field + ".p_cc_w", lineno);
    auto mobile = boolean(cols[4], field + ".mobile", lineno);
    if (!tx || !pcc || !mobile) return;
    n.tx_power_dbm = *tx;
    n.power_consumption_w = *pcc;
    n.mobile = *mobile;
    node_lines_.push_back(lineno);
    s_.nodes.push_back(std::move(n));
  }

  void edge_row(std::string_view line, std::size_t lineno) {
    const auto cols = split_ws(line);
    if (cols.size() != 5) {
      error(ErrorCode::SyntaxError, lineno, "edges",
            "expected 5 columns: src dst distance_m depths_m eavesdropper");
      return;
    }
    EdgeSpec e;
    e.edge.src = std::string(cols[0]);
    e.edge.dst = std::string(cols[1]);
    const std::string field = "edges." + e.edge.src + "->" + e.edge.dst;
    auto d = number(cols[2], field + ".distance_m", lineno);
    if (!d) return;
    e.edge.distance_m = *d;
    if (cols[3] != "-") {
      for (std::string_view w : split_char(cols[3], ',')) {
        auto v = number(w, field + ".depths_m", lineno);
        if (!v) return;
        e.edge.entity_depths_m.push_back(*v);
      }
    }
    if (cols[4] == "-") {
      e.eavesdropper.mode = EavesdropperSpec::Mode::Global;
    } else if (cols[4].substr(0, 2) == "d=") {
      auto v = number(cols[4].substr(2), field + ".eavesdropper", lineno);
      if (!v) return;
      e.eavesdropper = {EavesdropperSpec::Mode::Distance, *v};
    } else {
      auto v = number(cols[4], field + ".eavesdropper", lineno);
      if (!v) return;
      e.eavesdropper = {EavesdropperSpec::Mode::Constant, *v};
    }
    edge_lines_.push_back(lineno);
    s_.edges.push_back(std::move(e));
  }

  void check_required() {
    for (const char* sec : {"channel", "run", "nodes", "edges"})
      if (!sections_.count(sec))
        error(ErrorCode::ValidationError, 0, sec, std::string("missing required section [") + sec + "]");
    if (sections_.count("channel"))
      for (const char* k : {"frequency_hz", "bandwidth_hz", "noise_dbm", "pathloss_exponent",
                            "gamma_per_m", "cell_radius_m"})
        if (!channel_keys_.count(k))
          error(ErrorCode::ValidationError, 0, std::string("channel.") + k, "missing required key");
    if (sections_.count("run"))
      for (const char* k : {"trials", "seed"})
        if (!run_keys_.count(k))
          error(ErrorCode::ValidationError, 0, std::string("run.") + k, "missing required key");
  }

  void validate_semantics() {
    auto bad = [&](std::size_t line, std::string field, std::string msg) {
      error(ErrorCode::ValidationError, line, std::move(field), std::move(msg));
    };
    try {
      validate(s_.channel);
    } catch (const Error& e) {
      bad(0, "channel", e.what());
    }
    if (!(s_.cell_radius_m > 0.0)) bad(0, "channel.cell_radius_m", "must be > 0");
    if (s_.trials < 1) bad(0, "run.trials", "must be >= 1");
    if (!(s_.reauth_success_prob >= 0.0 && s_.reauth_success_prob <= 1.0))
      bad(0, "run.reauth_success_prob", "must lie in [0, 1]");
    if (!(s_.fading_probability >= 0.0 && s_.fading_probability <= 1.0))
      bad(0, "run.fading_probability", "must lie in [0, 1]");
    if (!(s_.eavesdropper_bps >= 0.0)) bad(0, "run.eavesdropper_bps", "must be >= 0");

    for (std::size_t i = 0; i < s_.nodes.size(); ++i) {
      const Node& n = s_.nodes[i];
      if (!(n.tx_power_dbm >= 13.0 && n.tx_power_dbm <= 30.0))
        bad(node_lines_[i], "nodes." + n.id + ".tx_power_dbm", "must lie in [13, 30] dBm");
      if (!(n.power_consumption_w > 0.0)) bad(node_lines_[i], "nodes." + n.id + ".p_cc_w", "must be > 0");
    }
    for (std::size_t i = 0; i < s_.edges.size(); ++i) {
      const EdgeSpec& e = s_.edges[i];
      const std::string field = "edges." + e.edge.src + "->" + e.edge.dst;
      if (!(e.edge.distance_m > 0.0 && e.edge.distance_m <= s_.cell_radius_m))
        bad(edge_lines_[i], field + ".distance_m", "must lie in (0, cell_radius_m]");
      for (double w : e.edge.entity_depths_m)
        if (!(w >= 0.0)) bad(edge_lines_[i], field + ".depths_m", "depths must be >= 0");
      if (e.eavesdropper.mode != EavesdropperSpec::Mode::Global && !(e.eavesdropper.value > 0.0) &&
          !(e.eavesdropper.mode == EavesdropperSpec::Mode::Constant && e.eavesdropper.value == 0.0))
        bad(edge_lines_[i], field + ".eavesdropper", "must be >= 0 (bps) or d=<metres > 0>");
    }
    if (!diags_.empty()) return;

    std::optional<LayeredTopology> topo;
    try {
      topo = build_topology(s_.nodes, s_.plain_edges());
    } catch (const Error& e) {
      bad(0, "topology", e.what());
      return;
    }
    for (std::size_t i = 0; i < s_.attacks.size(); ++i) {
      const AttackBlock& a = s_.attacks[i];
      const std::string field = "attack[" + std::to_string(i) + "]";
      const std::size_t line = attack_lines_[i];
      if (!(a.intensity_min >= 0.0 && a.intensity_max <= 1.0 && a.intensity_min <= a.intensity_max))
        bad(line, field + ".intensity", "must lie in [0, 1] with min <= max");
      if (a.random_target) continue;
      if (!topo->contains(a.target)) {
        bad(line, field + ".target", "target '" + a.target + "' is not a declared node");
        continue;
      }
      AttackSpec probe{a.kind, a.target, a.intensity_min, a.seed, a.constants};
      probe.intensity = std::clamp(probe.intensity, 0.0, 1.0);
      try {
        validate(probe, *topo);
      } catch (const Error& e) {
        bad(line, field + (e.code() == ErrorCode::InvalidAttack ? "" : ".target"),
            topo->node(a.target).kind == NodeKind::BS ? "target is not the BS" : e.what());
      }
    }
  }

  std::string_view text_;
  Scenario s_;
  std::vector<Diagnostic> diags_;
  Section section_ = Section::None;
  bool skip_section_ = false;
  std::set<std::string> sections_, top_keys_, channel_keys_, run_keys_, attack_keys_;
  AttackBlock attack_;
  bool in_attack_ = false;
  std::size_t attack_line_ = 0;
  std::vector<std::size_t> node_lines_, edge_lines_, attack_lines_;
};

}  // namespace detail

/// Parses and fully validates a scenario document. Throws ScenarioError
/// carrying every diagnostic found.
inline Scenario parse_scenario(std::string_view text) {
  return detail::ScenarioParser(text).parse();
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'", {path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
inline std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  auto num = [](double v) { return format_double(v); };
  os << "version = " << kScenarioVersion << "\n\n";
  os << "[channel]\n"
     << "frequency_hz = " << num(s.channel.frequency_hz) << '\n'
     << "bandwidth_hz = " << num(s.channel.bandwidth_hz) << '\n'
     << "noise_dbm = " << num(s.channel.noise_dbm) << '\n'
     << "pathloss_exponent = " << num(s.channel.pathloss_exponent) << '\n'
     << "gamma_per_m = " << num(s.channel.gamma_per_m) << '\n'
     << "cell_radius_m = " << num(s.cell_radius_m) << "\n\n";
  os << "[run]\n"
     << "trials = " << s.trials << '\n'
     << "seed = " << s.seed << '\n'
     << "reauth_success_prob = " << num(s.reauth_success_prob) << '\n'
     << "silence_ticks = " << s.silence_ticks << '\n'
     << "eavesdropper_bps = " << num(s.eavesdropper_bps) << '\n'
     << "schedule = " << (s.schedule == AttackSchedule::All ? "all" : "round_robin") << '\n'
     << "fading = " << (s.fading == FadingModel::Off ? "off" : "rayleigh") << '\n'
     << "fading_probability = " << num(s.fading_probability) << "\n\n";
  os << "[nodes]\n# id kind tx_power_dbm p_cc_w mobile\n";
  for (const Node& n : s.nodes)
    os << n.id << ' ' << to_string(n.kind) << ' ' << num(n.tx_power_dbm) << ' '
       << num(n.power_consumption_w) << ' ' << (n.mobile ? "yes" : "no") << '\n';
  os << "\n[edges]\n# src dst distance_m depths_m eavesdropper\n";
  for (const EdgeSpec& e : s.edges) {
    os << e.edge.src << ' ' << e.edge.dst << ' ' << num(e.edge.distance_m) << ' ';
    if (e.edge.entity_depths_m.empty()) os << '-';
    for (std::size_t i = 0; i < e.edge.entity_depths_m.size(); ++i)
      os << (i ? "," : "") << num(e.edge.entity_depths_m[i]);
    switch (e.eavesdropper.mode) {
      case EavesdropperSpec::Mode::Global: os << " -\n"; break;
      case EavesdropperSpec::Mode::Constant: os << ' ' << num(e.eavesdropper.value) << '\n'; break;
      case EavesdropperSpec::Mode::Distance: os << " d=" << num(e.eavesdropper.value) << '\n'; break;
    }
  }
  for (const AttackBlock& a : s.attacks) {
    const AttackConstants& c = a.constants;
    os << "\n[attack]\n"
       << "kind = " << to_string(a.kind) << '\n'
       << "target = " << (a.random_target ? std::string("random") : a.target) << '\n';
    if (a.intensity_min == a.intensity_max) os << "intensity = " << num(a.intensity_min) << '\n';
    else os << "intensity = " << num(a.intensity_min) << ".." << num(a.intensity_max) << '\n';
    os << "seed = " << a.seed << '\n'
       << "half_duplex_factor = " << num(c.half_duplex_factor) << '\n'
       << "spoof_knee_m = " << num(c.spoof_knee_m) << '\n'
       << "handover_penalty_db = " << num(c.handover_penalty_db) << '\n'
       << "dos_factor = " << num(c.dos_factor) << '\n'
       << "uav_factor = " << num(c.uav_factor) << '\n';
  }
  return os.str();
}

}  // namespace lgtbids
