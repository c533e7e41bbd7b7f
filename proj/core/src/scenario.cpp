#include "bhd/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "bhd/constants.hpp"
#include "bhd/errors.hpp"

namespace bhd {

bool ScenarioConfig::wants(const std::string& output) const {
  return analysis.outputs.empty() ||
         std::find(analysis.outputs.begin(), analysis.outputs.end(), output) != analysis.outputs.end();
}

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
};

struct Document {
  std::vector<Section> sections;

  Section* find(const std::string& name) {
    for (auto& s : sections) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
  Section& get_or_add(const std::string& name, int line) {
    if (Section* s = find(name)) return *s;
    sections.push_back({name, line, {}, {}});
    return sections.back();
  }
};

Document parse_document(std::istream& is) {
  Document doc;
  Section* cur = nullptr;
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header '" + line + "'", lineno);
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (doc.find(name)) {
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate section [" + name + "]", lineno);
      }
      cur = &doc.get_or_add(name, lineno);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'", lineno);
    }
    if (!cur) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside of any section", lineno);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key", lineno);
    if (cur->entries.count(key)) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "' in [" + cur->name + "]",
                        lineno, key);
    }
    cur->entries[key] = {value, lineno, false};
    cur->order.push_back(key);
  }
  return doc;
}

void apply_override(Document& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("--set '" + spec + "': expected section.key=value");
  const std::string path = trim(spec.substr(0, eq));
  const std::string value = trim(spec.substr(eq + 1));
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
    throw ConfigError("--set '" + spec + "': expected section.key=value");
  }
  Section& s = doc.get_or_add(path.substr(0, dot), 0);
  const std::string key = path.substr(dot + 1);
  if (!s.entries.count(key)) s.order.push_back(key);
  s.entries[key] = {value, 0, false};
}

struct Range {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false;
  bool hi_open = false;

  bool contains(double v) const {
    const bool lo_ok = lo_open ? v > lo : v >= lo;
    const bool hi_ok = hi_open ? v < hi : v <= hi;
    return lo_ok && hi_ok;
  }
  std::string str() const {
    std::ostringstream os;
    os << (lo_open ? '(' : '[') << lo << ", " << hi << (hi_open ? ')' : ']');
    return os.str();
  }
};

const Range kAny{};
const Range kPositive{0.0, std::numeric_limits<double>::infinity(), true, false};
const Range kNonNegative{0.0, std::numeric_limits<double>::infinity(), false, false};
const Range kOpenUnit{0.0, 1.0, true, true};
const Range kUnit{0.0, 1.0, false, false};
const Range kHalfOpenUnit{0.0, 1.0, true, false};  // (0, 1]
const Range kUnitBelowOne{0.0, 1.0, false, true};  // [0, 1)

class Reader {
 public:
  Reader(Section* s, std::string name) : s_(s), name_(std::move(name)) {}

  bool present() const { return s_ != nullptr; }
  bool has(const std::string& key) const { return s_ && s_->entries.count(key); }

  std::string str(const std::string& key, const std::string& def) {
    Entry* e = entry(key);
    return e ? e->value : def;
  }

  std::string require_str(const std::string& key) {
    Entry* e = entry(key);
    if (!e) throw ConfigError("[" + name_ + "] is missing required key '" + key + "'", s_ ? s_->line : 0, key);
    return e->value;
  }

  double real(const std::string& key, double def, const Range& r = kAny) {
    Entry* e = entry(key);
    if (!e) return def;
    return parse_real(*e, key, r);
  }

  std::optional<double> opt_real(const std::string& key, const Range& r = kAny) {
    Entry* e = entry(key);
    if (!e) return std::nullopt;
    return parse_real(*e, key, r);
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def) {
    Entry* e = entry(key);
    if (!e) return def;
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(e->value.c_str(), &end, 10);
    if (e->value.empty() || *end != '\0' || errno == ERANGE || e->value.front() == '-') {
      fail(*e, key, "'" + e->value + "' is not an unsigned integer");
    }
    return v;
  }

  bool boolean(const std::string& key, bool def) {
    Entry* e = entry(key);
    if (!e) return def;
    std::string v = e->value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail(*e, key, "'" + e->value + "' is not a boolean");
  }

  template <class F>
  auto parsed(const std::string& key, F&& parse, decltype(parse(std::string{})) def) {
    Entry* e = entry(key);
    if (!e) return def;
    try {
      return parse(e->value);
    } catch (const std::exception& ex) {
      fail(*e, key, ex.what());
    }
  }

  [[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& msg) const {
    std::ostringstream os;
    if (e.line > 0) os << "line " << e.line << ": ";
    os << name_ << '.' << key << ": " << msg;
    throw ConfigError(os.str(), e.line, key);
  }

  void check_unknown(bool strict, std::vector<std::string>& warnings) const {
    if (!s_) return;
    for (const auto& key : s_->order) {
      const Entry& e = s_->entries.at(key);
      if (e.used) continue;
      std::ostringstream os;
      if (e.line > 0) os << "line " << e.line << ": ";
      os << "unknown key '" << key << "' in [" << name_ << "]";
      if (strict) throw ConfigError(os.str(), e.line, key);
      warnings.push_back(os.str());
    }
  }

 private:
  Entry* entry(const std::string& key) {
    if (!s_) return nullptr;
    auto it = s_->entries.find(key);
    if (it == s_->entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  double parse_real(const Entry& e, const std::string& key, const Range& r) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (e.value.empty() || *end != '\0' || errno == ERANGE) fail(e, key, "'" + e.value + "' is not a number");
    if (std::isnan(v) || !r.contains(v)) {
      std::ostringstream os;
      os << "value " << e.value << " is outside the allowed range " << r.str();
      fail(e, key, os.str());
    }
    return v;
  }

  Section* s_;
  std::string name_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

NoisePsd read_psd(Reader& r, const std::string& type) {
  double level = r.real("level", 0.0, kNonNegative);
  if (auto db = r.opt_real("level_db")) level = from_db(*db);
  if (type == "white") return NoisePsd::white(level);
  if (type == "one_over_f") {
    return NoisePsd::one_over_f(level, r.real("reference_hz", 1.0, kPositive), r.real("exponent", 1.0));
  }
  if (type == "rin") {
    return NoisePsd::rin_anchored(level, r.real("anchor_hz", 10.0, kPositive), r.real("corner_hz", 1000.0, kPositive));
  }
  if (type == "broken_power_law") {
    return NoisePsd::broken_power_law(level, r.real("corner_hz", 1.0, kPositive), r.real("low_exponent", 2.0),
                                      r.real("high_exponent", 0.0));
  }
  throw DomainError("unknown noise type '" + type + "' (white, one_over_f, rin, broken_power_law)");
}

ScenarioConfig build(Document& doc, const ParseOptions& opts, const std::string& label) {
  ScenarioConfig c;
  c.source = label;

  for (const char* required : {"laser", "homodyne", "analysis"}) {
    if (!doc.find(required)) throw ConfigError(label + ": missing required section [" + required + "]");
  }

  std::deque<Reader> readers;
  auto reader = [&](const std::string& name) -> Reader& {
    readers.emplace_back(doc.find(name), name);
    return readers.back();
  };

  {
    Reader& r = reader("laser");
    c.laser.power_w = r.real("power_w", c.laser.power_w, kPositive);
    c.laser.rin_enabled = r.has("rin_db");
    c.laser.rin_db = r.real("rin_db", c.laser.rin_db);
    c.laser.rin_enabled = r.boolean("rin", c.laser.rin_enabled);
    c.laser.rin_anchor_hz = r.real("rin_anchor_hz", c.laser.rin_anchor_hz, kPositive);
    c.laser.rin_corner_hz = r.real("rin_corner_hz", c.laser.rin_corner_hz, kPositive);
    c.laser.rin_reference_power_w = r.real("rin_reference_power_w", 0.0, kNonNegative);
  }
  {
    Reader& r = reader("modecleaner");
    c.modecleaner.enabled = r.boolean("enabled", c.modecleaner.enabled);
    c.modecleaner.cavity.linewidth_hz = r.real("linewidth_hz", c.modecleaner.cavity.linewidth_hz, kPositive);
    c.modecleaner.cavity.hom_suppression =
        r.real("hom_suppression", c.modecleaner.cavity.hom_suppression, {1.0, INFINITY, false, false});
    c.modecleaner.cavity.conversion_per_m =
        r.real("conversion_per_m", c.modecleaner.cavity.conversion_per_m, kNonNegative);
  }
  {
    Reader& r = reader("electronics");
    auto& e = c.electronics;
    e.resistor_type = r.parsed("resistor_type", [](const std::string& s) { return parse_resistor_type(s); },
                               e.resistor_type);
    e.flicker_coefficient = r.real("flicker_coefficient", e.flicker_coefficient, kNonNegative);
    e.responsivity = r.real("responsivity", e.responsivity, {0.0, kIdealResponsivity, true, false});
    e.dark = r.str("dark", e.dark);
    if (e.dark != "default" && e.dark != "white" && e.dark != "none") {
      throw ConfigError("electronics.dark: '" + e.dark + "' is not one of default, white, none", 0, "dark");
    }
    e.dark_corner_hz = r.real("dark_corner_hz", e.dark_corner_hz, kNonNegative);
    e.dark_clearance_db = r.real("dark_clearance_db", e.dark_clearance_db);
    e.dark_level_v2_per_hz = r.real("dark_level_v2_per_hz", e.dark_level_v2_per_hz, kNonNegative);
  }
  {
    Reader& r = reader("homodyne");
    auto& h = c.homodyne;
    const double qe = std::min(1.0, c.electronics.responsivity / kIdealResponsivity);
    h.optics.eta_bs = r.real("eta_bs", h.optics.eta_bs, kOpenUnit);
    h.optics.eta_l = r.real("eta_l", 0.0, kUnit);
    h.optics.eta_pd1 = r.real("eta_pd1", qe, kHalfOpenUnit);
    h.optics.eta_pd2 = r.real("eta_pd2", qe, kHalfOpenUnit);
    h.topology = r.parsed("topology", [](const std::string& s) { return parse_topology(s); }, h.topology);
    h.g1 = r.real("g1", h.g1, kPositive);
    h.g1 = r.real("gain", h.g1, kPositive);
    h.g2 = r.opt_real("g2", kPositive);
    h.balance = r.parsed(
        "balance",
        [](const std::string& s) {
          if (s == "optimize") return BalanceMode::optimize;
          if (s == "manual") return BalanceMode::manual;
          if (s == "cmrr") return BalanceMode::cmrr;
          throw DomainError("'" + s + "' is not one of optimize, manual, cmrr");
        },
        h.balance);
    h.target_cmrr_db = r.real("target_cmrr_db", h.target_cmrr_db, kPositive);
    if (h.topology == Topology::current_subtracting && h.g2 && *h.g2 != h.g1) {
      throw ConfigError("homodyne.g2: current_subtracting has a single gain; drop g2 or set it equal to g1", 0, "g2");
    }
  }
  {
    Reader& r = reader("dither");
    c.dither.enabled = r.boolean("enabled", r.present());
    c.dither.frequency_hz = r.real("frequency_hz", c.dither.frequency_hz, kPositive);
    c.dither.amplitude_cycles = r.real("cycles", c.dither.amplitude_cycles, kNonNegative);
  }
  {
    Reader& r = reader("dust");
    auto& d = c.dust;
    d.enabled = r.boolean("enabled", r.present());
    d.location = r.parsed(
        "location",
        [](const std::string& s) {
          if (s == "arm1") return DustLocation::arm1;
          if (s == "common") return DustLocation::common;
          throw DomainError("'" + s + "' is not one of arm1, common");
        },
        d.location);
    d.process.rate_hz = r.real("rate_hz", 0.5, kNonNegative);
    d.process.depth_min = r.real("depth_min", d.process.depth_min, kOpenUnit);
    d.process.depth_max = r.real("depth_max", d.process.depth_max, kOpenUnit);
    d.process.duration_min_s = r.real("duration_min_s", d.process.duration_min_s, kPositive);
    d.process.duration_max_s = r.real("duration_max_s", d.process.duration_max_s, kPositive);
    d.process.pulse_shape = r.parsed(
        "pulse",
        [](const std::string& s) {
          if (s == "raised_cosine") return PulseShape::raised_cosine;
          if (s == "rectangular") return PulseShape::rectangular;
          throw DomainError("'" + s + "' is not one of raised_cosine, rectangular");
        },
        d.process.pulse_shape);
    d.monitor_duration_s = r.real("monitor_duration_s", d.monitor_duration_s, kPositive);
    d.monitor_rate_hz = r.real("monitor_rate_hz", d.monitor_rate_hz, kPositive);
    try {
      d.process.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[dust] ") + e.what(), 0);
    }
  }
  {
    Reader& r = reader("jitter");
    auto& j = c.jitter;
    j.enabled = r.boolean("enabled", r.present());
    j.location = r.parsed(
        "location",
        [](const std::string& s) {
          if (s == "pre_mc") return JitterLocation::pre_mc;
          if (s == "post_mc") return JitterLocation::post_mc;
          throw DomainError("'" + s + "' is not one of pre_mc, post_mc");
        },
        j.location);
    const double level = r.real("level_m2_per_hz", 1e-18, kNonNegative);
    const double corner = r.real("corner_hz", 10.0, kPositive);
    const double lo_exp = r.real("low_exponent", 2.0);
    const double hi_exp = r.real("high_exponent", 4.0);
    const double y_ratio = r.real("y_ratio", 1.0, kNonNegative);
    j.process.displacement_x = NoisePsd::broken_power_law(level, corner, lo_exp, hi_exp);
    j.process.displacement_y = NoisePsd::broken_power_law(level * y_ratio, corner, lo_exp, hi_exp);
    j.waist_m = r.real("waist_m", j.waist_m, kPositive);
    j.map.kind = r.str("map", j.map.kind);
    if (j.map.kind != "uniform" && j.map.kind != "gradient" && j.map.kind != "synthetic" && j.map.kind != "file") {
      throw ConfigError("jitter.map: '" + j.map.kind + "' is not one of uniform, gradient, synthetic, file", 0, "map");
    }
    j.map.file = r.str("map_file", "");
    j.map.nominal = r.real("map_nominal", 0.0, kUnit);
    j.map.rms = r.real("map_rms", j.map.rms, kNonNegative);
    j.map.correlation_m = r.real("map_correlation_m", j.map.correlation_m, kPositive);
    j.map.gradient_per_m = r.real("map_gradient_per_m", j.map.gradient_per_m);
    j.map.nodes = static_cast<std::size_t>(r.u64("map_nodes", j.map.nodes));
    j.map.pitch_m = r.real("map_pitch_m", j.map.pitch_m, kPositive);
    if (j.map.kind == "file" && j.map.file.empty()) {
      throw ConfigError("jitter.map_file is required when map = file", 0, "map_file");
    }
  }
  {
    Reader& r = reader("opo");
    auto& o = c.opo;
    o.enabled = r.boolean("enabled", r.present());
    o.params.pump_ratio = r.real("pump_ratio", o.params.pump_ratio, kUnitBelowOne);
    o.params.cavity_linewidth_hz = r.real("linewidth_hz", o.params.cavity_linewidth_hz, kPositive);
    o.params.phase_noise_rms_rad = r.real("phase_noise_rms_rad", o.params.phase_noise_rms_rad, kNonNegative);
    o.chain.escape = r.real("escape", o.chain.escape, kHalfOpenUnit);
    o.chain.propagation = r.real("propagation", o.chain.propagation, kHalfOpenUnit);
    o.chain.visibility = r.real("visibility", o.chain.visibility, kHalfOpenUnit);
    o.chain.quantum_efficiency = r.real("quantum_efficiency", o.chain.quantum_efficiency, kHalfOpenUnit);
  }
  {
    Reader& r = reader("analysis");
    auto& a = c.analysis;
    a.plan = r.parsed("spans", [](const std::string& s) { return SpanPlan::parse(s); }, SpanPlan{});
    if (a.plan.spans.empty()) throw ConfigError("[analysis] is missing required key 'spans'", 0, "spans");
    a.seed = r.u64("seed", a.seed);
    a.sample_rate_hz = r.real("sample_rate_hz", 0.0, kNonNegative);
    a.duration_s = r.real("duration_s", 0.0, kNonNegative);
    a.reference_hz = r.real("reference_hz", a.reference_hz, kPositive);
    a.band_lo_hz = r.real("band_lo_hz", a.band_lo_hz, kPositive);
    a.band_hi_hz = r.real("band_hi_hz", a.band_hi_hz, kPositive);
    a.outputs = split_list(r.str("outputs", ""));
    for (const auto& o : a.outputs) {
      if (o != "shot" && o != "dark" && o != "squeezed" && o != "anti_squeezed") {
        throw ConfigError("analysis.outputs: unknown output '" + o + "' (shot, dark, squeezed, anti_squeezed)", 0,
                          "outputs");
      }
    }
    if (a.sample_rate_hz > 0.0 && a.sample_rate_hz < 2.0 * a.plan.spans.back().span_hz) {
      throw ConfigError("analysis.sample_rate_hz must be at least twice the largest span", 0, "sample_rate_hz");
    }
  }

  for (auto& sec : doc.sections) {
    const std::string& n = sec.name;
    if (n.rfind("noise.", 0) == 0) {
      Reader& r = reader(n);
      NoiseSourceConfig src;
      src.name = n.substr(6);
      src.port = r.require_str("port");
      const std::string type = r.require_str("type");
      try {
        src.psd = read_psd(r, type);
      } catch (const DomainError& e) {
        throw ConfigError("[" + n + "] " + e.what(), sec.line, "type");
      }
      src.replaces_vacuum = r.boolean("replaces_vacuum", false);
      if (!r.boolean("enabled", true)) continue;
      c.noise.push_back(std::move(src));
    } else if (n.rfind("scatter.", 0) == 0) {
      Reader& r = reader(n);
      ScatterConfig s;
      s.name = n.substr(8);
      s.enabled = r.boolean("enabled", true);
      s.path.forward_location =
          r.parsed("location", [](const std::string& v) { return parse_scatter_location(v); }, s.path.forward_location);
      s.path.backscatter_power_fraction = r.real("fraction", 0.0, kUnitBelowOne);
      s.path.phase_process = NoisePsd::broken_power_law(
          r.real("displacement_level_m2_per_hz", 1e-20, kNonNegative), r.real("displacement_corner_hz", 50.0, kPositive),
          r.real("displacement_low_exponent", 2.0), r.real("displacement_high_exponent", 0.0));
      s.path.static_fringe_phase = r.opt_real("static_phase_rad");
      s.path.isolation_db = r.real("isolation_db", 0.0, kNonNegative);
      s.path.isolator_self_scatter = r.real("self_scatter", 0.0, kUnitBelowOne);
      c.scatter.push_back(std::move(s));
    }
  }

  static const std::vector<std::string> known = {"laser", "modecleaner", "homodyne", "electronics", "dither",
                                                 "dust",  "jitter",      "opo",      "analysis"};
  for (const auto& sec : doc.sections) {
    const bool ok = std::find(known.begin(), known.end(), sec.name) != known.end() ||
                    sec.name.rfind("noise.", 0) == 0 || sec.name.rfind("scatter.", 0) == 0;
    if (!ok) {
      std::ostringstream os;
      if (sec.line > 0) os << "line " << sec.line << ": ";
      os << "unknown section [" << sec.name << "]";
      if (opts.strict) throw ConfigError(os.str(), sec.line);
      c.warnings.push_back(os.str());
    }
  }
  for (const auto& r : readers) r.check_unknown(opts.strict, c.warnings);
  return c;
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text, const ParseOptions& opts, const std::string& label) {
  std::istringstream is(text);
  Document doc = parse_document(is);
  for (const auto& o : opts.overrides) apply_override(doc, o);
  return build(doc, opts, label);
}

ScenarioConfig parse_scenario(const std::string& path, const ParseOptions& opts) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario_text(ss.str(), opts, path);
}

}  // namespace bhd
