// Copyright 2026 The holoqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "holoqed/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "holoqed/kernels.hpp"

#ifndef HOLOQED_VERSION
#define HOLOQED_VERSION "0.0.0"
#endif

namespace holoqed::scenario {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string join(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) out += (out.empty() ? "" : ".") + p;
  return out;
}

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + int(std::count(text.begin(), text.begin() + std::ptrdiff_t(offset), '\n'));
}

struct Context {
  const std::string& text;
  std::set<std::string> overridden;

  int line(const std::vector<std::string>& path) const {
    if (overridden.count(join(path))) return 0;
    std::size_t pos = 0;
    for (const auto& key : path) {
      const auto p = text.find('"' + key + '"', pos);
      if (p == std::string::npos) return 0;
      pos = p;
    }
    return line_of_offset(text, pos);
  }
};

enum class Bound { Any, NonNegative, Positive };

// One JSON object of the config: typed getters record defaults into `out`
// and `finish` rejects keys nobody asked for.
class Section {
 public:
  Section(const json* node, std::vector<std::string> path, const Context& ctx, ojson& out)
      : node_(node), path_(std::move(path)), ctx_(ctx), out_(out) {
    if (node_ && !node_->is_object()) fail_here("must be an object");
    out_ = ojson::object();
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    auto path = path_;
    path.push_back(key);
    const auto field = join(path);
    const int line = ctx_.line(path);
    std::ostringstream os;
    os << field << ": " << message;
    if (ctx_.overridden.count(field)) os << " (from --override)";
    throw SchemaError(field, line, os.str());
  }

  double real(const char* key, double fallback, Bound bound = Bound::Any) {
    const json* v = get(key);
    const double x = v ? as_number(key, *v) : fallback;
    check_bound(key, x, bound);
    out_[key] = x;
    return x;
  }

  std::optional<double> optional_real(const char* key, Bound bound = Bound::Any) {
    const json* v = get(key);
    if (!v || v->is_null()) {
      out_[key] = nullptr;
      return std::nullopt;
    }
    const double x = as_number(key, *v);
    check_bound(key, x, bound);
    out_[key] = x;
    return x;
  }

  bool has(const char* key) const { return node_ && node_->contains(key) && !(*node_)[key].is_null(); }

  std::size_t integer(const char* key, std::size_t fallback, std::size_t lo, std::size_t hi) {
    const json* v = get(key);
    std::size_t x = fallback;
    if (v) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      const auto raw = v->get<long long>();
      if (raw < 0) fail(key, "must be >= 0");
      x = std::size_t(raw);
    }
    if (x < lo || x > hi) fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out_[key] = x;
    return x;
  }

  bool boolean(const char* key, bool fallback) {
    const json* v = get(key);
    bool x = fallback;
    if (v) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      x = v->get<bool>();
    }
    out_[key] = x;
    return x;
  }

  std::string choice(const char* key, const std::string& fallback, const std::vector<std::string>& allowed) {
    const json* v = get(key);
    std::string x = fallback;
    if (v) {
      if (!v->is_string()) fail(key, "expected a string");
      x = v->get<std::string>();
    }
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), x) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(key, "unknown value '" + x + "' (expected one of: " + list + ")");
    }
    out_[key] = x;
    return x;
  }

  /// Fixed-length list; a null entry yields an empty vector when `nullable`.
  std::vector<double> reals(const char* key, const std::vector<double>& fallback, std::size_t length, Bound bound,
                            bool nullable = false) {
    const json* v = get(key);
    std::vector<double> xs = fallback;
    if (v) {
      if (v->is_null() && nullable) {
        xs.clear();
      } else {
        if (!v->is_array()) fail(key, "expected an array of numbers");
        xs.clear();
        for (const auto& e : *v) xs.push_back(as_number(key, e));
      }
    }
    if (!xs.empty() && length && xs.size() != length) {
      fail(key, "expected exactly " + std::to_string(length) + " numbers");
    }
    if (xs.empty() && !nullable) fail(key, "must not be empty");
    for (double x : xs) check_bound(key, x, bound);
    out_[key] = xs.empty() ? ojson(nullptr) : ojson(xs);
    return xs;
  }

  Section child(const char* key, ojson& into) {
    used_.insert(key);
    const json* v = node_ && node_->contains(key) ? &(*node_)[key] : nullptr;
    auto path = path_;
    path.push_back(key);
    return Section(v, path, ctx_, into);
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (!used_.count(key)) fail(key, "unknown field");
    }
  }

  void mark_used(const char* key) { used_.insert(key); }

 private:
  [[noreturn]] void fail_here(const std::string& message) const {
    const auto field = join(path_);
    throw SchemaError(field, ctx_.line(path_), field + ": " + message);
  }

  const json* get(const char* key) {
    used_.insert(key);
    if (!node_ || !node_->contains(key)) return nullptr;
    const json& v = (*node_)[key];
    return &v;
  }

  double as_number(const char* key, const json& v) const {
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  void check_bound(const char* key, double x, Bound bound) const {
    if (bound == Bound::NonNegative && !(x >= 0.0)) fail(key, "must be >= 0");
    if (bound == Bound::Positive && !(x > 0.0)) fail(key, "must be > 0");
  }

  const json* node_;
  std::vector<std::string> path_;
  const Context& ctx_;
  ojson& out_;
  std::set<std::string> used_;
};

void apply_override(json& doc, const std::string& spec, std::set<std::string>& overridden) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SchemaError(spec, 0, "override '" + spec + "' must look like key.path=value");
  }
  const std::string key = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  std::vector<std::string> path;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw SchemaError(key, 0, "override key '" + key + "' has an empty component");
    path.push_back(part);
  }
  json* node = &doc;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->contains(path[i])) (*node)[path[i]] = json::object();
    node = &(*node)[path[i]];
    if (!node->is_object()) throw SchemaError(key, 0, "override '" + key + "' descends into a non-object");
  }
  (*node)[path.back()] = value;
  overridden.insert(key);
}

Kind parse_kind(const std::string& s) {
  if (s == "single_gate") return Kind::SingleGate;
  if (s == "single_average") return Kind::SingleAverage;
  if (s == "two_qubit_gate") return Kind::TwoQubitGate;
  if (s == "circuit_params") return Kind::CircuitParams;
  return Kind::HolonomyChecks;
}

double mhz_field(Section& s, const char* key, double fallback, Bound bound) {
  return mhz_to_angular(s.real(key, fallback, bound));
}

void parse_numerics(Section s, Config& c, PropagationOptions& o) {
  o.rtol = s.real("rtol", 1e-8, Bound::Positive);
  o.atol = s.real("atol", 1e-10, Bound::NonNegative);
  o.initial_step = s.real("initial_step_ns", 0.01, Bound::Positive);
  o.max_step = s.real("max_step_ns", 0.0, Bound::NonNegative);
  o.max_trace_drift = s.real("max_trace_drift", 1e-5, Bound::Positive);
  c.output_resolution = s.real("output_resolution_ns", 0.25, Bound::Positive);
  o.output_step = c.output_resolution;
  const auto duration = s.optional_real("duration_ns", Bound::NonNegative);
  c.single.duration = duration;
  c.two.duration = duration;
  s.finish();
}

void parse_single(Section& root, Config& c) {
  auto& r = c.resolved;
  SingleQubitScenario& s = c.single;
  {
    Section p = root.child("physics", r["physics"]);
    s.omega_c = mhz_field(p, "omega_c_mhz", 6000.0, Bound::Positive);
    s.g0 = mhz_field(p, "g0_mhz", 300.0, Bound::Positive);
    s.anharmonicity = mhz_field(p, "anharmonicity_mhz", 310.0, Bound::NonNegative);
    s.transmon_levels = p.integer("transmon_levels", 3, 2, 3);
    s.fock_cutoff = p.integer("fock_cutoff", 5, 2, 64);
    s.ladder = p.choice("drive_ladder", "qubit", {"qubit", "harmonic"}) == "qubit" ? DriveLadder::Qubit
                                                                                     : DriveLadder::Harmonic;
    s.kappa = mhz_field(p, "kappa_mhz", 0.01, Bound::NonNegative);
    s.gamma1 = mhz_field(p, "gamma1_mhz", 0.01, Bound::NonNegative);
    s.gamma2 = mhz_field(p, "gamma2_mhz", 0.01, Bound::NonNegative);
    s.decoherence = p.boolean("decoherence", true);
    p.finish();
  }
  {
    Section d = root.child("drive", r["drive"]);
    const std::string gate = d.choice("gate", "hadamard", {"hadamard", "not", "custom"});
    const bool amplitudes = d.has("omega1_mhz") || d.has("omega2_mhz");
    if (gate != "custom") {
      if (amplitudes) d.fail("omega1_mhz", "explicit tone amplitudes need gate = custom");
      if (d.has("theta_rad")) d.fail("theta_rad", "theta_rad needs gate = custom");
    }
    if (amplitudes) {
      if (d.has("omega_mhz")) d.fail("omega_mhz", "give either omega_mhz or omega1_mhz/omega2_mhz, not both");
      if (d.has("theta_rad")) d.fail("theta_rad", "give either theta_rad or omega1_mhz/omega2_mhz, not both");
      const double o1 = mhz_field(d, "omega1_mhz", 0.0, Bound::Any);
      const double o2 = mhz_field(d, "omega2_mhz", 0.0, Bound::Any);
      DriveSpec probe{o1, o2, 0.0, s.g0, s.omega_c};
      if (!(probe.omega() > 0.0)) d.fail("omega1_mhz", "tone amplitudes must not both vanish");
      s.omega = probe.omega();
      s.theta = probe.theta();
      d.mark_used("omega_mhz");
      d.mark_used("theta_rad");
    } else {
      s.omega = mhz_field(d, "omega_mhz", 8.0, Bound::Positive);
      s.theta = gate == "hadamard" ? kPi / 4.0 : gate == "not" ? kPi / 2.0 : d.real("theta_rad", kPi / 4.0);
    }
    s.phi = d.real("phi_rad", gate == "hadamard" ? kPi : 0.0);
    s.id = c.id.empty() ? gate : c.id;
    d.finish();
  }
  {
    Section i = root.child("initial", r["initial"]);
    s.theta_prime = i.real("theta_prime_rad", 0.0);
    i.finish();
  }
}

void parse_two(Section& root, Config& c) {
  Section p = root.child("cell", c.resolved["cell"]);
  TwoQubitScenario& t = c.two;
  t.omega_c = mhz_field(p, "omega_c_mhz", 6000.0, Bound::Positive);
  t.g = mhz_field(p, "g_mhz", 100.0, Bound::Positive);
  t.t13 = mhz_field(p, "t13_mhz", 6.0, Bound::Positive);
  t.t23 = mhz_field(p, "t23_mhz", 6.0, Bound::Any);
  t.rate = mhz_field(p, "rate_mhz", 0.01, Bound::NonNegative);
  t.decoherence = p.boolean("decoherence", true);
  t.id = c.id.empty() ? "two_qubit" : c.id;
  p.finish();
}

void parse_device(Section& root, Config& c) {
  Section p = root.child("device", c.resolved["device"]);
  auto& d = c.device;
  d.unit_inductance = p.real("l_h_per_m", 4.1e-7, Bound::Positive);
  d.unit_capacitance = p.real("c_f_per_m", 1.6e-10, Bound::Positive);
  const auto lengths = p.reals("lengths_mm", {10.2, 8.5, 9.57}, 3, Bound::Positive);
  for (std::size_t k = 0; k < 3; ++k) d.lengths[k] = lengths[k] * 1e-3;
  d.critical_current = p.real("critical_current_ua", 46.0, Bound::Positive) * 1e-6;
  d.dc_bias = p.real("dc_bias", 0.43, Bound::Positive);
  if (std::abs(std::cos(kPi * d.dc_bias)) < 1e-12) p.fail("dc_bias", "a half flux quantum makes L_J diverge");
  d.junction_capacitance = p.real("junction_capacitance_pf", 0.5, Bound::Positive) * 1e-12;
  d.ac13 = p.real("ac13", 0.0153, Bound::Positive);
  d.ac23 = p.real("ac23", 0.0166, Bound::Positive);
  d.phi_rms = p.reals("phi_rms", {3.6e-3, 3.4e-3, 3.1e-3}, 3, Bound::Positive, true);
  c.scaling_factors = p.reals("scaling_factors", {0.5, 1.0, 2.0, 4.0, 8.0}, 0, Bound::Positive);
  if (c.scaling_factors.size() < 2) p.fail("scaling_factors", "needs at least two values");
  for (std::size_t k = 1; k < c.scaling_factors.size(); ++k) {
    if (!(c.scaling_factors[k] > c.scaling_factors[k - 1])) p.fail("scaling_factors", "must be strictly increasing");
  }
  p.finish();
}

// Physics checks that throw ConfigurationError become schema errors on a section.
template <typename F>
void physics_check(const Context& ctx, const char* section, F&& f) {
  try {
    f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(section, ctx.line({section}), std::string(section) + ": " + e.what());
  }
}

void add_angular(const ojson& in, ojson& out) {
  for (const auto& [key, value] : in.items()) {
    if (value.is_object()) {
      ojson sub = ojson::object();
      add_angular(value, sub);
      if (!sub.empty()) out[key] = sub;
    } else if (key.size() > 4 && key.ends_with("_mhz") && value.is_number()) {
      out[key.substr(0, key.size() - 4) + "_rad_per_ns"] = mhz_to_angular(value.get<double>());
    }
  }
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string timeseries_csv(const PropagationResult& r) {
  std::string out = "t_ns";
  for (const auto& [name, _] : r.observables) out += "," + name;
  out += "\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    out += fmt(r.times[k]);
    for (const auto& [_, series] : r.observables) out += "," + fmt(series[k]);
    out += "\n";
  }
  return out;
}

ojson diagnostics_json(const Diagnostics& d, bool lindblad) {
  ojson j;
  j["accepted_steps"] = d.steps.accepted;
  j["rejected_steps"] = d.steps.rejected;
  j["rhs_evaluations"] = d.steps.rhs_evals;
  j["smallest_step_ns"] = d.steps.smallest_step;
  j["largest_step_ns"] = d.steps.largest_step;
  j[lindblad ? "max_trace_drift" : "max_norm_drift"] = d.max_trace_drift;
  if (lindblad) {
    j["max_hermiticity_error"] = d.max_hermiticity_error;
    j["min_eigenvalue"] = d.min_eigenvalue;
  }
  return j;
}

ojson numerics_json(const PropagationOptions& o) {
  ojson j;
  j["rtol"] = o.rtol;
  j["atol"] = o.atol;
  j["kernels"] = std::string(kernels::name(kernels::active_backend()));
  return j;
}

double angular_mhz(double w) { return angular_to_mhz(w); }

}  // namespace

SchemaError::SchemaError(std::string field, int line, const std::string& message)
    : ConfigurationError(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      field_(std::move(field)),
      line_(line) {}

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::SingleGate: return "single_gate";
    case Kind::SingleAverage: return "single_average";
    case Kind::TwoQubitGate: return "two_qubit_gate";
    case Kind::CircuitParams: return "circuit_params";
    case Kind::HolonomyChecks: return "holonomy_checks";
  }
  return "unknown";
}

std::string library_version() { return HOLOQED_VERSION; }

Config parse(const std::string& text, const std::vector<std::string>& overrides, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw SchemaError("", line, source + ": malformed JSON: " + e.what());
  }
  Context ctx{text, {}};
  for (const auto& o : overrides) apply_override(doc, o, ctx.overridden);

  Config c;
  ojson& r = c.resolved;
  r = ojson::object();
  Section root(&doc, {}, ctx, r);

  const auto version = root.integer("schema_version", 0, 0, 1000);
  if (version != std::size_t(kSchemaVersion)) {
    root.fail("schema_version", "unsupported schema_version " + std::to_string(version) + " (expected " +
                                    std::to_string(kSchemaVersion) + ")");
  }
  if (!doc.contains("kind")) root.fail("kind", "missing required field");
  c.kind = parse_kind(root.choice(
      "kind", "", {"single_gate", "single_average", "two_qubit_gate", "circuit_params", "holonomy_checks"}));
  c.id = root.choice("id", to_string(c.kind), {});
  {
    Section o = root.child("output", r["output"]);
    c.out_dir = o.choice("dir", ".", {});
    o.finish();
  }

  switch (c.kind) {
    case Kind::SingleGate:
    case Kind::SingleAverage:
    case Kind::HolonomyChecks:
      parse_single(root, c);
      c.single.id = c.id;
      break;
    case Kind::TwoQubitGate:
      parse_two(root, c);
      c.two.id = c.id;
      break;
    case Kind::CircuitParams:
      parse_device(root, c);
      break;
  }
  if (c.kind != Kind::CircuitParams) {
    parse_numerics(root.child("numerics", r["numerics"]), c,
                   c.kind == Kind::TwoQubitGate ? c.two.numerics : c.single.numerics);
  }
  if (c.kind == Kind::SingleAverage) {
    Section a = root.child("average", r["average"]);
    c.n_states = a.integer("n_states", 1000, 2, 1'000'000);
    c.method = a.choice("method", "linear", {"linear", "per_state"}) == "linear" ? AverageMethod::Linear
                                                                                 : AverageMethod::PerState;
    c.workers = unsigned(a.integer("workers", 0, 0, 1024));
    a.finish();
  }
  if (c.kind == Kind::HolonomyChecks) {
    Section h = root.child("holonomy", r["holonomy"]);
    c.transport_samples = h.integer("samples", 200, 10, 1'000'000);
    c.random_gates = h.integer("random_gates", 1000, 1, 10'000'000);
    c.seed = h.integer("seed", 7, 0, std::size_t(-1));
    h.finish();
  }
  root.finish();

  switch (c.kind) {
    case Kind::SingleGate:
    case Kind::SingleAverage:
    case Kind::HolonomyChecks:
      physics_check(ctx, "drive", [&] { c.single.validate(); });
      break;
    case Kind::TwoQubitGate:
      physics_check(ctx, "cell", [&] { c.two.validate(); });
      break;
    case Kind::CircuitParams:
      physics_check(ctx, "device", [&] { c.device.validate(); });
      break;
  }
  return c;
}

Config load(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SchemaError("", 0, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), overrides, path.string());
}

Validation validate(const Config& c) {
  Validation v;
  auto& d = v.derived;
  d["kind"] = to_string(c.kind);
  switch (c.kind) {
    case Kind::SingleGate:
    case Kind::SingleAverage:
    case Kind::HolonomyChecks: {
      const auto& s = c.single;
      const auto drive = s.drive();
      d["theta_rad"] = drive.theta();
      d["theta_over_pi"] = drive.theta() / kPi;
      d["phi_rad"] = s.phi;
      d["omega_mhz"] = angular_mhz(drive.omega());
      d["omega1_mhz"] = angular_mhz(drive.omega1);
      d["omega2_mhz"] = angular_mhz(drive.omega2);
      d["gate_time_ns"] = s.gate_time();
      d["cyclic_time_ns"] = cyclic_time(GateKind::Single, s.omega);
      d["hilbert_dimension"] = s.space().dimension();
      d["hilbert_space"] = s.space().describe();
      const double ratio = s.omega / s.g0;
      d["omega_over_g0"] = ratio;
      if (ratio > 0.1) {
        std::ostringstream os;
        os << "Omega/g0 = " << ratio << " exceeds 0.1; the effective holonomic model loses accuracy";
        v.warnings.push_back(os.str());
      }
      if (c.kind == Kind::SingleAverage) d["n_states"] = c.n_states;
      break;
    }
    case Kind::TwoQubitGate: {
      const auto cell = c.two.cell();
      d["gate_time_ns"] = c.two.gate_time();
      d["cyclic_time_ns"] = cyclic_time(GateKind::Two, c.two.t13);
      d["hilbert_dimension"] = cell_space().dimension();
      d["omega_c_mhz"] = {angular_mhz(cell.omega_c[0]), angular_mhz(cell.omega_c[1]), angular_mhz(cell.omega_c[2])};
      d["delta_c_mhz"] = angular_mhz(4.0 * c.two.g);
      d["modulation_mhz"] = angular_mhz(cell.modulation);
      if (std::abs(std::abs(c.two.t23) - c.two.t13) > 1e-12 * c.two.t13) {
        v.warnings.push_back("|t23| differs from t13; the cyclic condition assumes equal hopping strengths");
      }
      if (c.two.t13 > 0.1 * c.two.g) {
        v.warnings.push_back("t13 exceeds 10% of g; neglected transitions are no longer well detuned");
      }
      break;
    }
    case Kind::CircuitParams: {
      const auto p = circuit::derive_cell(c.device);
      d["omega_c_ghz"] = {angular_mhz(p.omega_c[0]) / 1e3, angular_mhz(p.omega_c[1]) / 1e3,
                          angular_mhz(p.omega_c[2]) / 1e3};
      d["e_j0_thz"] = angular_mhz(p.e_j0) / 1e6;
      d["phi_rms_estimated"] = p.phi_estimated;
      for (const auto& w : c.device.warnings()) v.warnings.push_back(w);
      break;
    }
  }
  return v;
}

Outcome run(const Config& c, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  Outcome out;
  ojson& s = out.summary;
  s["library_version"] = library_version();
  s["scenario"] = c.resolved;
  ojson angular = ojson::object();
  add_angular(c.resolved, angular);
  s["scenario_angular"] = angular;
  s["derived"] = validate(c).derived;

  auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = out_dir / name;
    write_text(path, text);
    out.files.push_back(path);
  };

  switch (c.kind) {
    case Kind::SingleGate: {
      const auto report = simulate_gate_fidelity(c.single);
      emit("timeseries.csv", timeseries_csv(report.trajectory));
      s["gate_time_ns"] = report.gate_time;
      s["final_fidelity"] = report.final_fidelity;
      s["diagnostics"] = diagnostics_json(report.trajectory.diagnostics, true);
      s["diagnostics"]["numerics"] = numerics_json(c.single.numerics);
      break;
    }
    case Kind::TwoQubitGate: {
      const auto report = simulate_gate_fidelity(c.two);
      emit("timeseries.csv", timeseries_csv(report.trajectory));
      s["gate_time_ns"] = report.gate_time;
      s["final_fidelity"] = report.final_fidelity;
      s["diagnostics"] = diagnostics_json(report.trajectory.diagnostics, true);
      s["diagnostics"]["numerics"] = numerics_json(c.two.numerics);
      break;
    }
    case Kind::SingleAverage: {
      const auto report = average_gate_fidelity(c.single, c.n_states, c.method, c.workers);
      std::string csv = "theta_prime_rad,fidelity\n";
      for (std::size_t k = 0; k < report.per_state.size(); ++k) {
        csv += fmt(report.theta_primes[k]) + "," + fmt(report.per_state[k]) + "\n";
      }
      emit("fidelities.csv", csv);
      s["gate_time_ns"] = report.gate_time;
      s["final_fidelity"] = report.final_fidelity;
      ojson diag;
      diag["method"] = report.method;
      diag["n_states"] = report.per_state.size();
      diag["min_fidelity"] = *std::min_element(report.per_state.begin(), report.per_state.end());
      diag["max_fidelity"] = *std::max_element(report.per_state.begin(), report.per_state.end());
      diag["numerics"] = numerics_json(c.single.numerics);
      s["diagnostics"] = diag;
      break;
    }
    case Kind::HolonomyChecks: {
      const auto drive = c.single.drive();
      const auto pt = check_parallel_transport(drive, c.transport_samples);
      std::mt19937_64 rng(c.seed);
      std::uniform_real_distribution<double> angle(0.0, kTwoPi);
      double u1_error = 0.0;
      for (std::size_t k = 0; k < c.random_gates; ++k) {
        const auto u = ideal_u1(angle(rng), angle(rng)).matrix;
        const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
        u1_error = std::max({u1_error, (u * u - id).cwiseAbs().maxCoeff(),
                             (u.adjoint() * u - id).cwiseAbs().maxCoeff(), std::abs(u.determinant() + 1.0)});
      }
      const auto u2 = ideal_u2().matrix;
      const double u2_error = (u2 * u2 - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
      const double eff_error = (effective_gate(drive) - ideal_u1(drive.theta(), drive.phi).matrix).cwiseAbs().maxCoeff();

      ojson conv = ojson::array();
      const Eigen::Vector2cd ground(1.0, 0.0);
      for (int k = 0; k < 4; ++k) {
        DriveSpec d = drive;
        const double scale = std::ldexp(1.0, -k);
        d.omega1 *= scale;
        d.omega2 *= scale;
        ojson row;
        row["omega_mhz"] = angular_mhz(d.omega());
        row["distance_projected"] = reduced_model_distance(d, ReducedVariant::Projected, ground);
        row["distance_truncated"] = reduced_model_distance(d, ReducedVariant::Truncated, ground);
        conv.push_back(row);
      }

      // Effective-model trajectory from the scenario input.
      const auto model = build_heff1(drive);
      const auto in = c.single.input();
      Vector psi0 = Vector::Zero(3);
      psi0.head(2) = in;
      const Eigen::Vector2cd target2 = ideal_u1(drive.theta(), drive.phi).matrix * in;
      Vector target = Vector::Zero(3);
      target.head(2) = target2;
      const double tau = c.single.gate_time();
      TimeDependentHamiltonian h(model.h);
      std::vector<Observable> obs;
      Vector e = Vector::Zero(3);
      const char* names[3] = {"pop_G", "pop_minus", "pop_plus"};
      for (int k = 0; k < 3; ++k) {
        e.setZero();
        e(k) = 1.0;
        obs.push_back(population_observable(names[k], e));
      }
      obs.push_back(Observable{"leakage", [](double, const Matrix& st) { return 1.0 - st.col(0).squaredNorm(); }});
      obs.push_back(population_observable("fidelity", target));
      PropagationOptions o = PropagationOptions::schrodinger();
      o.output_step = c.output_resolution;
      const auto traj = propagate_schrodinger(h, StateVector::normalized(h.space(), psi0), tau, obs, o);
      emit("timeseries.csv", timeseries_csv(traj));

      s["gate_time_ns"] = tau;
      s["final_fidelity"] = std::norm(target.dot(traj.final_state.col(0)));
      ojson checks;
      checks["u1_max_property_error"] = u1_error;
      checks["u1_random_gates"] = c.random_gates;
      checks["u2_involution_error"] = u2_error;
      checks["dark_annihilation_over_omega"] = pt.dark_annihilation / drive.omega();
      checks["parallel_transport_max_over_omega"] = pt.max_coupling / drive.omega();
      checks["cyclicity_defect"] = pt.cyclicity_defect;
      checks["half_period_defect_bright"] = pt.half_period_defect_bright;
      checks["effective_gate_error"] = eff_error;
      checks["reduced_model_convergence"] = conv;
      s["checks"] = checks;
      s["diagnostics"] = diagnostics_json(traj.diagnostics, false);
      break;
    }
    case Kind::CircuitParams: {
      const auto p = circuit::derive_cell(c.device);
      std::vector<double> sweep;
      for (double f : c.scaling_factors) sweep.push_back(f * p.e_j0);
      const auto table = circuit::scaling_check(c.device, sweep);
      std::string text = circuit::report(c.device, p);
      text += "\nE_J0 scaling (phi ~ 1/E_J0)\n";
      std::string csv = "e_j0_thz,phi1,phi3,j13_mhz\n";
      for (const auto& row : table.rows) {
        csv += fmt(angular_mhz(row.e_j0) / 1e6) + "," + fmt(row.phi1) + "," + fmt(row.phi3) + "," +
               fmt(angular_mhz(row.j13)) + "\n";
        text += "  E_J0/2pi = " + fmt(angular_mhz(row.e_j0) / 1e6) + " THz -> J_13/2pi = " +
                fmt(angular_mhz(row.j13)) + " MHz\n";
      }
      text += "  log-log slope = " + fmt(table.slope) + "\n";
      emit("report.txt", text);
      emit("scaling.csv", csv);
      s["gate_time_ns"] = nullptr;
      s["final_fidelity"] = nullptr;
      ojson dp;
      dp["omega_c_mhz"] = {angular_mhz(p.omega_c[0]), angular_mhz(p.omega_c[1]), angular_mhz(p.omega_c[2])};
      dp["phi_rms"] = {p.phi_rms[0], p.phi_rms[1], p.phi_rms[2]};
      dp["phi_rms_estimated"] = p.phi_estimated;
      dp["e_j0_mhz"] = angular_mhz(p.e_j0);
      dp["j_dc_mhz"] = {{"12", angular_mhz(p.j12)}, {"13", angular_mhz(p.j13)}, {"23", angular_mhz(p.j23)}};
      dp["t_ac_mhz"] = {{"13", angular_mhz(p.t13)}, {"23", angular_mhz(p.t23)}};
      dp["omega_p_mhz"] = angular_mhz(p.omega_p);
      dp["delta_c_mhz"] = angular_mhz(p.delta_c);
      dp["plasma_margin"] = p.plasma_margin();
      dp["fourth_order_ratio"] = p.fourth_order_ratio;
      dp["mixing_weak"] = p.mixing_weak();
      dp["scaling_slope"] = table.slope;
      s["circuit"] = dp;
      break;
    }
  }
  s["generated_at"] = timestamp();
  emit("summary.json", s.dump(2) + "\n");
  return out;
}

}  // namespace holoqed::scenario
