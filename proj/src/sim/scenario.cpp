#include "iotledger/sim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "iotledger/common/error.hpp"

namespace iotledger::sim {

std::string_view consensus_name(ConsensusKind kind) {
  switch (kind) {
    case ConsensusKind::Pow: return "pow";
    case ConsensusKind::Pos: return "pos";
    case ConsensusKind::Pbft: return "pbft";
  }
  return "?";
}

std::uint64_t Scenario::device_count() const {
  std::uint64_t n = 0;
  for (const auto& d : devices) n += d.count;
  return n;
}

namespace {

[[noreturn]] void fail(std::size_t line, std::string_view key, const std::string& msg) {
  std::string where = line == 0 ? std::string() : "line " + std::to_string(line) + ": ";
  if (!key.empty()) where += "'" + std::string(key) + "': ";
  throw Error(ErrorCode::ConfigInvalid, where + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    auto comma = v.find(',');
    out.push_back(trim(v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

// Parsing context for one `key = value` line.
struct Field {
  std::size_t line;
  std::string_view key;
  std::string_view value;

  [[noreturn]] void bad(const std::string& msg) const { fail(line, key, msg); }

  std::uint64_t u64_of(std::string_view text) const {
    std::string digits;
    for (char c : text) {
      if (c == '_') continue;
      digits.push_back(c);
    }
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || text.front() == '_') {
      bad("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
  }
  std::uint64_t u64() const { return u64_of(value); }
  std::uint64_t positive() const {
    std::uint64_t v = u64();
    if (v == 0) bad("must be positive");
    return v;
  }
  std::vector<std::uint64_t> u64_list() const {
    std::vector<std::uint64_t> out;
    if (value.empty()) return out;
    for (auto item : split_list(value)) out.push_back(u64_of(item));
    return out;
  }
  double probability() const {
    double v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !(v >= 0.0 && v <= 1.0)) {
      bad("expected a probability in [0, 1], got '" + std::string(value) + "'");
    }
    return v;
  }
  bool boolean() const {
    if (value == "true") return true;
    if (value == "false") return false;
    bad("expected true or false, got '" + std::string(value) + "'");
  }
  // Decimal seconds, rounded up to whole milliseconds.
  std::uint64_t seconds_as_ms() const {
    auto dot = value.find('.');
    std::uint64_t whole = u64_of(value.substr(0, dot));
    std::uint64_t ms = 0;
    if (dot != std::string_view::npos) {
      std::string_view frac = value.substr(dot + 1);
      if (frac.empty()) bad("malformed decimal '" + std::string(value) + "'");
      for (std::size_t i = 0; i < frac.size(); ++i) {
        char c = frac[i];
        if (c < '0' || c > '9') bad("malformed decimal '" + std::string(value) + "'");
        if (i < 3) {
          ms += static_cast<std::uint64_t>(c - '0') * (i == 0 ? 100 : i == 1 ? 10 : 1);
        } else if (c != '0') {
          ms += 1;
          break;
        }
      }
    }
    std::uint64_t total = whole * 1000 + ms;
    if (total == 0) bad("must be positive");
    return total;
  }
  template <typename F>
  auto parse_with(F&& parser) const {
    try {
      return parser(value);
    } catch (const Error& e) {
      bad(e.what());
    }
  }
};

using Setter = void (*)(Scenario&, DeviceClass*, const Field&);

const std::map<std::string, std::map<std::string, Setter>>& section_keys() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"",
       {
           {"seed", [](Scenario& s, DeviceClass*, const Field& f) { s.seed = f.u64(); }},
       }},
      {"chain",
       {
           {"consensus",
            [](Scenario& s, DeviceClass*, const Field& f) {
              if (f.value == "pow") s.consensus = ConsensusKind::Pow;
              else if (f.value == "pos") s.consensus = ConsensusKind::Pos;
              else if (f.value == "pbft") s.consensus = ConsensusKind::Pbft;
              else f.bad("expected pow, pos or pbft, got '" + std::string(f.value) + "'");
            }},
           {"block_interval_s", [](Scenario& s, DeviceClass*, const Field& f) { s.block_interval_s = f.positive(); }},
           {"gas_limit", [](Scenario& s, DeviceClass*, const Field& f) { s.gas_limit = f.positive(); }},
           {"tx_gas", [](Scenario& s, DeviceClass*, const Field& f) { s.tx_gas = f.positive(); }},
           {"confirmations", [](Scenario& s, DeviceClass*, const Field& f) { s.confirmations = f.u64(); }},
           {"propagation_delay_ms",
            [](Scenario& s, DeviceClass*, const Field& f) { s.propagation_delay_ms = f.u64(); }},
       }},
      {"pow",
       {
           {"miners", [](Scenario& s, DeviceClass*, const Field& f) { s.miners = f.positive(); }},
           {"hashrate", [](Scenario& s, DeviceClass*, const Field& f) { s.hashrate = f.positive(); }},
           {"initial_attempts", [](Scenario& s, DeviceClass*, const Field& f) { s.initial_attempts = f.u64(); }},
           {"retarget_window", [](Scenario& s, DeviceClass*, const Field& f) { s.retarget_window = f.u64(); }},
           {"retarget_clamp", [](Scenario& s, DeviceClass*, const Field& f) { s.retarget_clamp = f.positive(); }},
       }},
      {"pos",
       {
           {"stakes", [](Scenario& s, DeviceClass*, const Field& f) { s.stakes = f.u64_list(); }},
       }},
      {"pbft",
       {
           {"validators", [](Scenario& s, DeviceClass*, const Field& f) { s.validators = f.positive(); }},
           {"f", [](Scenario& s, DeviceClass*, const Field& f) { s.f = f.u64(); }},
           {"offline", [](Scenario& s, DeviceClass*, const Field& f) { s.offline = f.u64_list(); }},
           {"view_timeout_ms", [](Scenario& s, DeviceClass*, const Field& f) { s.view_timeout_ms = f.positive(); }},
       }},
      {"devices",
       {
           {"count", [](Scenario&, DeviceClass* d, const Field& f) { d->count = f.u64(); }},
           {"power",
            [](Scenario&, DeviceClass* d, const Field& f) { d->power = f.parse_with(lpwan::parse_power_source); }},
           {"mode", [](Scenario&, DeviceClass* d, const Field& f) { d->mode = f.parse_with(lpwan::parse_client_mode); }},
           {"tech", [](Scenario&, DeviceClass* d, const Field& f) { d->tech = f.parse_with(lpwan::parse_link_tech); }},
           {"emit_period_s", [](Scenario&, DeviceClass* d, const Field& f) { d->emit_period_ms = f.seconds_as_ms(); }},
           {"payload_len",
            [](Scenario&, DeviceClass* d, const Field& f) {
              d->payload_len = f.u64();
              if (d->payload_len > lpwan::kMaxPayload) f.bad("payload_len above 255 bytes");
            }},
           {"frames", [](Scenario&, DeviceClass* d, const Field& f) { d->frames = f.u64(); }},
           {"stagger_ms", [](Scenario&, DeviceClass* d, const Field& f) { d->stagger_ms = f.u64(); }},
           {"refuse_signing", [](Scenario&, DeviceClass* d, const Field& f) { d->refuse_signing = f.boolean(); }},
       }},
      {"gateways",
       {
           {"count", [](Scenario& s, DeviceClass*, const Field& f) { s.gateways = f.positive(); }},
           {"roles",
            [](Scenario& s, DeviceClass*, const Field& f) {
              s.gateway_roles.clear();
              for (auto item : split_list(f.value)) {
                s.gateway_roles.push_back(
                    Field{f.line, f.key, item}.parse_with(lpwan::parse_gateway_role));
              }
            }},
           {"loss_probability", [](Scenario& s, DeviceClass*, const Field& f) { s.loss_probability = f.probability(); }},
           {"proxy_buffer", [](Scenario& s, DeviceClass*, const Field& f) { s.proxy_buffer = f.positive(); }},
       }},
      {"store",
       {
           {"nodes", [](Scenario& s, DeviceClass*, const Field& f) { s.store_nodes = f.positive(); }},
           {"replication", [](Scenario& s, DeviceClass*, const Field& f) { s.replication = f.positive(); }},
           {"outage_nodes", [](Scenario& s, DeviceClass*, const Field& f) { s.outage_nodes = f.u64(); }},
           {"outage_start_s", [](Scenario& s, DeviceClass*, const Field& f) { s.outage_start_s = f.u64(); }},
           {"outage_end_s", [](Scenario& s, DeviceClass*, const Field& f) { s.outage_end_s = f.u64(); }},
       }},
      {"run",
       {
           {"duration_s", [](Scenario& s, DeviceClass*, const Field& f) { s.duration_s = f.positive(); }},
           {"max_blocks", [](Scenario& s, DeviceClass*, const Field& f) { s.max_blocks = f.u64(); }},
           {"saturate", [](Scenario& s, DeviceClass*, const Field& f) { s.saturate = f.boolean(); }},
           {"drain_limit_s", [](Scenario& s, DeviceClass*, const Field& f) { s.drain_limit_s = f.u64(); }},
       }},
  };
  return table;
}

bool valid_class_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string join(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values[i]);
  }
  return out;
}

std::string ms_as_seconds(std::uint64_t ms) {
  std::string out = std::to_string(ms / 1000);
  if (std::uint64_t frac = ms % 1000; frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 3 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

void validate_scenario(const Scenario& s) {
  if (s.tx_gas > s.gas_limit) fail(0, "chain.tx_gas", "per-transaction gas exceeds the block gas limit");
  if (s.consensus == ConsensusKind::Pos) {
    std::uint64_t total = 0;
    for (auto v : s.stakes) total += v;
    if (s.stakes.empty() || total == 0) fail(0, "pos.stakes", "total stake must be positive");
  }
  if (s.consensus == ConsensusKind::Pbft) {
    if (s.validators < 3 * s.f + 1) {
      fail(0, "pbft.f", "n=" + std::to_string(s.validators) + " validators cannot tolerate f=" + std::to_string(s.f));
    }
    std::set<std::uint64_t> seen;
    for (auto i : s.offline) {
      if (i >= s.validators) fail(0, "pbft.offline", "validator index " + std::to_string(i) + " out of range");
      if (!seen.insert(i).second) fail(0, "pbft.offline", "validator " + std::to_string(i) + " listed twice");
    }
  }
  if (s.gateway_roles.empty()) fail(0, "gateways.roles", "at least one role required");
  if (s.replication > s.store_nodes) fail(0, "store.replication", "replication factor exceeds node count");
  if (s.outage_nodes > s.store_nodes) fail(0, "store.outage_nodes", "more outage nodes than store nodes");
  if (s.outage_nodes > 0 && s.outage_end_s <= s.outage_start_s) {
    fail(0, "store.outage_end_s", "outage must end after it starts");
  }
  for (const auto& d : s.devices) {
    if (!lpwan::role_allowed(d.power, d.mode)) {
      fail(0, "devices." + d.name + ".mode",
           std::string(lpwan::power_source_name(d.power)) + " devices cannot be " +
               std::string(lpwan::client_mode_name(d.mode)) + " clients");
    }
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  s.devices.clear();
  const auto& table = section_keys();

  std::string section;
  DeviceClass* current_class = nullptr;
  std::set<std::string> seen_keys;
  std::set<std::string> seen_sections;
  bool schema_seen = false;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, {}, "unterminated section header");
      if (!schema_seen) fail(line_no, {}, "'schema = 1' must come first");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (!seen_sections.insert(name).second) fail(line_no, {}, "section [" + name + "] repeated");
      current_class = nullptr;
      if (name.rfind("devices.", 0) == 0) {
        std::string cls = name.substr(8);
        if (!valid_class_name(cls)) fail(line_no, {}, "bad device class name '" + cls + "'");
        s.devices.push_back(DeviceClass{});
        s.devices.back().name = cls;
        current_class = &s.devices.back();
        section = "devices";
      } else if (name.empty() || name == "devices" || table.count(name) == 0) {
        fail(line_no, {}, "unknown section [" + name + "]");
      } else {
        section = name;
      }
      seen_keys.clear();
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, {}, "expected 'key = value'");
    Field field{line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (field.key.empty()) fail(line_no, {}, "missing key");

    if (!schema_seen) {
      if (field.key != "schema") fail(line_no, field.key, "'schema = 1' must come first");
      if (field.u64() != kScenarioSchema) field.bad("unsupported schema version " + std::string(field.value));
      schema_seen = true;
      continue;
    }

    std::string key(field.key);
    const auto& keys = table.at(section);
    auto it = keys.find(key);
    if (it == keys.end()) {
      std::string where = section.empty() ? "top level" : "[" + section + "]";
      field.bad("unknown key in " + where);
    }
    if (!seen_keys.insert(key).second) field.bad("key repeated");
    it->second(s, current_class, field);
  }
  if (!schema_seen) fail(0, "schema", "missing 'schema = 1'");
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, path.filename().string() + ": " + e.what());
  }
}

std::string Scenario::canonical_text() const {
  std::ostringstream o;
  o << "schema = " << kScenarioSchema << "\n";
  o << "seed = " << seed << "\n";
  o << "\n[chain]\n";
  o << "consensus = " << consensus_name(consensus) << "\n";
  o << "block_interval_s = " << block_interval_s << "\n";
  o << "gas_limit = " << gas_limit << "\n";
  o << "tx_gas = " << tx_gas << "\n";
  o << "confirmations = " << confirmations << "\n";
  o << "propagation_delay_ms = " << propagation_delay_ms << "\n";
  o << "\n[pow]\n";
  o << "miners = " << miners << "\n";
  o << "hashrate = " << hashrate << "\n";
  o << "initial_attempts = " << initial_attempts << "\n";
  o << "retarget_window = " << retarget_window << "\n";
  o << "retarget_clamp = " << retarget_clamp << "\n";
  o << "\n[pos]\n";
  o << "stakes = " << join(stakes) << "\n";
  o << "\n[pbft]\n";
  o << "validators = " << validators << "\n";
  o << "f = " << f << "\n";
  o << "offline = " << join(offline) << "\n";
  o << "view_timeout_ms = " << view_timeout_ms << "\n";
  for (const auto& d : devices) {
    o << "\n[devices." << d.name << "]\n";
    o << "count = " << d.count << "\n";
    o << "power = " << lpwan::power_source_name(d.power) << "\n";
    o << "mode = " << lpwan::client_mode_name(d.mode) << "\n";
    o << "tech = " << lpwan::link_spec(d.tech).name << "\n";
    o << "emit_period_s = " << ms_as_seconds(d.emit_period_ms) << "\n";
    o << "payload_len = " << d.payload_len << "\n";
    o << "frames = " << d.frames << "\n";
    o << "stagger_ms = " << d.stagger_ms << "\n";
    o << "refuse_signing = " << (d.refuse_signing ? "true" : "false") << "\n";
  }
  o << "\n[gateways]\n";
  o << "count = " << gateways << "\n";
  o << "roles = ";
  for (std::size_t i = 0; i < gateway_roles.size(); ++i) {
    o << (i ? ", " : "") << lpwan::gateway_role_name(gateway_roles[i]);
  }
  o << "\n";
  o << "loss_probability = " << format_double(loss_probability) << "\n";
  o << "proxy_buffer = " << proxy_buffer << "\n";
  o << "\n[store]\n";
  o << "nodes = " << store_nodes << "\n";
  o << "replication = " << replication << "\n";
  o << "outage_nodes = " << outage_nodes << "\n";
  o << "outage_start_s = " << outage_start_s << "\n";
  o << "outage_end_s = " << outage_end_s << "\n";
  o << "\n[run]\n";
  o << "duration_s = " << duration_s << "\n";
  o << "max_blocks = " << max_blocks << "\n";
  o << "saturate = " << (saturate ? "true" : "false") << "\n";
  o << "drain_limit_s = " << drain_limit_s << "\n";
  return o.str();
}

Digest Scenario::config_digest() const { return Encoder{}.put("iotledger-scenario").put(canonical_text()).digest(); }

}  // namespace iotledger::sim
