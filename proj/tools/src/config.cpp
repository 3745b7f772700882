#include "qfall/cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include <yaml-cpp/yaml.h>

namespace qfall::cli {

namespace {

struct KindName {
  ScenarioKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 7> kKinds{{{ScenarioKind::ep_a, "ep-a"},
                                          {ScenarioKind::ep_b, "ep-b"},
                                          {ScenarioKind::dephase, "dephase"},
                                          {ScenarioKind::echo, "echo"},
                                          {ScenarioKind::qubit_phase, "qubit-phase"},
                                          {ScenarioKind::wigner, "wigner"},
                                          {ScenarioKind::evolve, "evolve"}}};

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const std::string& w : words) out += (out.empty() ? "" : ", ") + w;
  return out;
}

// A YAML node plus the dotted path that reached it, for diagnostics.
class Node {
 public:
  Node(YAML::Node node, std::string path, const std::string* source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {}

  [[noreturn]] void fail(const std::string& message) const {
    const YAML::Mark mark = node_.Mark();
    const bool known = mark.line >= 0;
    throw ConfigError(*source_, known ? static_cast<std::size_t>(mark.line) + 1 : 0,
                      known ? static_cast<std::size_t>(mark.column) + 1 : 0, path_, message);
  }

  const std::string& path() const noexcept { return path_; }
  bool is_map() const { return node_.IsMap(); }
  bool is_sequence() const { return node_.IsSequence(); }

  bool has(const std::string& key) const { return node_.IsMap() && node_[key].IsDefined(); }

  Node child(const std::string& key) const {
    if (!has(key)) fail("missing required key '" + key + "'");
    return Node(node_[key], path_.empty() ? key : path_ + "." + key, source_);
  }

  std::vector<Node> items() const {
    if (!node_.IsSequence()) fail("expected a list");
    std::vector<Node> out;
    for (std::size_t i = 0; i < node_.size(); ++i) {
      out.emplace_back(node_[i], path_ + "[" + std::to_string(i) + "]", source_);
    }
    return out;
  }

  void require_map() const {
    if (!node_.IsMap()) fail("expected a mapping");
  }

  // Rejects keys outside `allowed` so typos do not silently fall back to defaults.
  void only_keys(std::initializer_list<std::string_view> allowed) const {
    require_map();
    for (const auto& entry : node_) {
      const std::string key = entry.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        std::vector<std::string> names(allowed.begin(), allowed.end());
        Node(entry.first, path_.empty() ? key : path_ + "." + key, source_)
            .fail("unknown key '" + key + "' (expected one of: " + join(names) + ")");
      }
    }
  }

  std::string text() const {
    if (!node_.IsScalar()) fail("expected a scalar");
    return node_.Scalar();
  }

  double number() const {
    const std::string raw = text();
    std::istringstream in(raw);
    in.imbue(std::locale::classic());
    double value = 0.0;
    in >> value;
    if (in.fail() || !in.eof() || !std::isfinite(value)) fail("expected a finite number, got '" + raw + "'");
    return value;
  }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be positive");
    return v;
  }

  double non_negative() const {
    const double v = number();
    if (v < 0.0) fail("must be non-negative");
    return v;
  }

  std::size_t count(std::size_t minimum) const {
    const double v = number();
    if (v != std::floor(v) || v < static_cast<double>(minimum) || v > 1e9) {
      fail("expected an integer >= " + std::to_string(minimum));
    }
    return static_cast<std::size_t>(v);
  }

  bool flag() const {
    const std::string raw = text();
    if (raw == "true") return true;
    if (raw == "false") return false;
    fail("expected true or false, got '" + raw + "'");
  }

  template <class T>
  T choice(std::initializer_list<std::pair<std::string_view, T>> options) const {
    const std::string raw = text();
    std::vector<std::string> names;
    for (const auto& [name, value] : options) {
      if (raw == name) return value;
      names.emplace_back(name);
    }
    fail("unknown value '" + raw + "' (expected one of: " + join(names) + ")");
  }

  // A list of numbers or {from, to, count}, endpoints included.
  RealVector sweep() const {
    RealVector out;
    if (node_.IsSequence()) {
      for (const Node& item : items()) out.push_back(item.number());
      if (out.empty()) fail("empty list");
      return out;
    }
    only_keys({"from", "to", "count"});
    const double from = child("from").number();
    const double to = child("to").number();
    const std::size_t n = child("count").count(1);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(n == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
  }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string* source_;
};

nlohmann::json to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Map: {
      nlohmann::json out = nlohmann::json::object();
      for (const auto& entry : node) out[entry.first.as<std::string>()] = to_json(entry.second);
      return out;
    }
    case YAML::NodeType::Sequence: {
      nlohmann::json out = nlohmann::json::array();
      for (const auto& item : node) out.push_back(to_json(item));
      return out;
    }
    case YAML::NodeType::Scalar: {
      const std::string& raw = node.Scalar();
      long long whole = 0;
      const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), whole);
      if (ec == std::errc{} && end == raw.data() + raw.size()) return whole;
      std::istringstream in(raw);
      in.imbue(std::locale::classic());
      double value = 0.0;
      in >> value;
      if (!in.fail() && in.eof()) return value;
      if (raw == "true" || raw == "false") return raw == "true";
      return raw;
    }
    default:
      return nullptr;
  }
}

PacketSpec read_packet(const Node& node, bool in_cat) {
  if (in_cat) {
    node.only_keys({"x", "v", "sigma", "weight"});
  } else {
    node.only_keys({"kind", "x", "v", "sigma"});
  }
  PacketSpec spec;
  if (node.has("x")) spec.mean_x = node.child("x").number();
  if (node.has("v")) spec.mean_v = node.child("v").number();
  spec.sigma_x = node.child("sigma").positive();
  if (node.has("weight")) {
    const std::vector<Node> parts = node.child("weight").items();
    if (parts.size() != 2) node.child("weight").fail("expected [re, im]");
    spec.weight = {parts[0].number(), parts[1].number()};
  }
  return spec;
}

StateConfig read_state(const Node& node) {
  node.require_map();
  StateConfig state;
  state.kind = node.has("kind")
                   ? node.child("kind").choice<StateKind>({{"gaussian", StateKind::gaussian}, {"cat", StateKind::cat}})
                   : StateKind::gaussian;
  if (state.kind == StateKind::gaussian) {
    state.packets.push_back(read_packet(node, false));
    return state;
  }
  node.only_keys({"kind", "packets"});
  for (const Node& item : node.child("packets").items()) state.packets.push_back(read_packet(item, true));
  if (state.packets.empty()) node.child("packets").fail("a cat state needs at least one packet");
  return state;
}

SpectrumConfig read_spectrum(const Node& node) {
  node.require_map();
  SpectrumConfig s;
  s.kind = node.child("kind").choice<SpectrumKind>({{"two-level", SpectrumKind::two_level},
                                                     {"harmonic", SpectrumKind::harmonic},
                                                     {"explicit", SpectrumKind::explicit_levels}});
  switch (s.kind) {
    case SpectrumKind::two_level:
      node.only_keys({"kind", "omega"});
      s.omega = node.child("omega").positive();
      break;
    case SpectrumKind::harmonic:
      node.only_keys({"kind", "omega", "levels"});
      s.omega = node.child("omega").positive();
      s.levels = node.child("levels").count(1);
      break;
    case SpectrumKind::explicit_levels:
      node.only_keys({"kind", "levels"});
      for (const Node& item : node.child("levels").items()) s.omegas.push_back(item.number());
      s.levels = s.omegas.size();
      break;
  }
  return s;
}

EvolutionParams read_evolution(const Node& node, bool with_time) {
  if (with_time) {
    node.only_keys({"g", "t", "mass_ratio"});
  } else {
    node.only_keys({"g", "mass_ratio"});
  }
  EvolutionParams p;
  p.g = node.child("g").number();
  if (with_time) p.t = node.child("t").non_negative();
  if (node.has("mass_ratio")) p.mass_ratio = node.child("mass_ratio").positive();
  return p;
}

double default_tolerance(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::ep_a: return 1e-10;
    case ScenarioKind::ep_b: return 1e-8;
    case ScenarioKind::dephase: return 1e-12;
    case ScenarioKind::echo: return 1e-8;
    case ScenarioKind::qubit_phase: return 1e-9;
    case ScenarioKind::wigner: return 1e-6;
    case ScenarioKind::evolve: return kNormTolerance;
  }
  return 0.0;
}

// Runs a library constructor and reports its precondition failures against `where`.
template <class F>
auto checked(const Node& where, F&& build) {
  try {
    return build();
  } catch (const InvalidArgument& e) {
    where.fail(e.what());
  }
}

}  // namespace

std::string_view scenario_name(ScenarioKind kind) noexcept {
  for (const KindName& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

ConfigError::ConfigError(std::string source, std::size_t line, std::size_t column, std::string field,
                         const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) + ":" + std::to_string(column) : "") +
                         ": " + (field.empty() ? "" : "'" + field + "': ") + message),
      line_(line),
      column_(column),
      field_(std::move(field)) {}

Grid1D build_grid(const ScenarioConfig& config) {
  return make_grid(config.grid.x_min, config.grid.x_max, config.grid.n);
}

WaveFunction build_state(const ScenarioConfig& config, const Grid1D& grid) {
  if (config.state.kind == StateKind::gaussian) return gaussian_packet(grid, config.mass, config.state.packets.front());
  return cat_state(grid, config.mass, config.state.packets);
}

InternalSpectrum build_spectrum(const ScenarioConfig& config) {
  const SpectrumConfig& s = config.spectrum;
  switch (s.kind) {
    case SpectrumKind::two_level: return two_level_spectrum(s.omega, config.mass);
    case SpectrumKind::harmonic: return harmonic_spectrum(s.omega, s.levels, config.mass);
    case SpectrumKind::explicit_levels: return explicit_spectrum(s.omegas, config.mass);
  }
  throw InvalidArgument("unknown spectrum kind");
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node document;
  try {
    document = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, static_cast<std::size_t>(e.mark.line) + 1, static_cast<std::size_t>(e.mark.column) + 1,
                      "", e.msg);
  }

  ScenarioConfig config;
  config.source = source;
  const Node root(document, "", &config.source);
  if (!document.IsMap()) root.fail("the config must be a mapping");

  config.kind = root.child("scenario").choice<ScenarioKind>({{"ep-a", ScenarioKind::ep_a},
                                                             {"ep-b", ScenarioKind::ep_b},
                                                             {"dephase", ScenarioKind::dephase},
                                                             {"echo", ScenarioKind::echo},
                                                             {"qubit-phase", ScenarioKind::qubit_phase},
                                                             {"wigner", ScenarioKind::wigner},
                                                             {"evolve", ScenarioKind::evolve}});
  const ScenarioKind kind = config.kind;

  switch (kind) {
    case ScenarioKind::ep_a:
      root.only_keys({"scenario", "name", "units", "tolerance", "output", "grid", "mass", "state", "evolution",
                      "split_steps", "split_tolerance"});
      break;
    case ScenarioKind::ep_b:
      root.only_keys({"scenario", "name", "units", "tolerance", "output", "grid", "mass", "state", "mass2",
                      "evolution", "expect_violation"});
      break;
    case ScenarioKind::dephase:
      root.only_keys({"scenario", "name", "units", "tolerance", "output", "mass", "spectrum", "beta", "g", "times",
                      "delta_x"});
      break;
    case ScenarioKind::echo:
      root.only_keys({"scenario", "name", "units", "tolerance", "output", "grid", "mass", "state", "spectrum", "beta",
                      "g", "T", "delta_x", "samples"});
      break;
    case ScenarioKind::qubit_phase:
      root.only_keys({"scenario", "name", "units", "tolerance", "output", "omega", "g", "L", "sigma_x", "samples"});
      break;
    case ScenarioKind::wigner:
      root.only_keys({"scenario", "name", "units", "tolerance", "output", "grid", "mass", "state", "evolution", "axis",
                      "stride"});
      break;
    case ScenarioKind::evolve:
      root.only_keys({"scenario", "name", "units", "tolerance", "output", "grid", "mass", "state", "evolution", "times",
                      "method", "split_steps"});
      break;
  }

  config.name = root.has("name") ? root.child("name").text() : std::string(scenario_name(kind));
  if (config.name.empty() || config.name.find_first_of("/\\") != std::string::npos) {
    root.child("name").fail("must be a non-empty file stem without path separators");
  }
  if (root.has("units")) {
    const Node units = root.child("units");
    config.units = units.choice<UnitMode>({{"natural", UnitMode::natural}, {"si", UnitMode::si}});
    if (config.units == UnitMode::si && kind != ScenarioKind::qubit_phase) {
      units.fail("si units only apply to the qubit-phase scenario");
    }
  }
  config.tolerance = root.has("tolerance") ? root.child("tolerance").positive() : default_tolerance(kind);
  if (root.has("output")) {
    const Node output = root.child("output");
    output.only_keys({"dir"});
    config.output_dir = output.child("dir").text();
  }

  const bool has_wave = kind != ScenarioKind::dephase && kind != ScenarioKind::qubit_phase;
  if (root.has("mass")) config.mass = root.child("mass").positive();

  std::optional<Grid1D> grid;
  if (has_wave) {
    const Node g = root.child("grid");
    g.only_keys({"x_min", "x_max", "n"});
    config.grid = {g.child("x_min").number(), g.child("x_max").number(), g.child("n").count(2)};
    grid = checked(g, [&] { return build_grid(config); });

    const Node state = root.child("state");
    config.state = read_state(state);
    if (kind == ScenarioKind::echo && config.state.kind != StateKind::gaussian) {
      state.fail("the echo scenario starts from a gaussian packet");
    }
    checked(state, [&] { return build_state(config, *grid); });
  }

  switch (kind) {
    case ScenarioKind::ep_a: {
      const Node evolution = root.child("evolution");
      config.evolution = read_evolution(evolution, true);
      const double drop = 0.5 * config.evolution.g * config.evolution.t * config.evolution.t;
      if (!is_grid_aligned(drop, grid->dx())) {
        evolution.fail("g t^2/2 = " + std::to_string(drop) + " must be a whole number of cells (dx = " +
                       std::to_string(grid->dx()) + ")");
      }
      if (root.has("split_steps")) config.split_steps = root.child("split_steps").count(1);
      if (root.has("split_tolerance")) config.split_tolerance = root.child("split_tolerance").positive();
      break;
    }
    case ScenarioKind::ep_b:
      config.evolution = read_evolution(root.child("evolution"), true);
      config.mass2 = root.child("mass2").positive();
      if (root.has("expect_violation")) config.expect_violation = root.child("expect_violation").flag();
      break;
    case ScenarioKind::wigner: {
      config.evolution = read_evolution(root.child("evolution"), true);
      if (root.has("axis")) {
        config.axis = root.child("axis").choice<AxisChoice>(
            {{"momentum", AxisChoice::momentum}, {"velocity", AxisChoice::velocity}});
      }
      if (root.has("stride")) config.stride = root.child("stride").count(1);
      if (config.grid.n > kMaxWignerSize) {
        root.child("grid").child("n").fail("the Wigner map is limited to n <= " + std::to_string(kMaxWignerSize));
      }
      break;
    }
    case ScenarioKind::evolve: {
      config.evolution = read_evolution(root.child("evolution"), false);
      config.times = root.child("times").sweep();
      for (double t : config.times) {
        if (t < 0.0) root.child("times").fail("times must be non-negative");
      }
      if (root.has("method")) {
        config.method = root.child("method").choice<EvolveMethod>(
            {{"exact", EvolveMethod::exact}, {"free", EvolveMethod::free}, {"split-step", EvolveMethod::split_step}});
      }
      if (config.method == EvolveMethod::split_step) config.split_steps = root.child("split_steps").count(1);
      break;
    }
    case ScenarioKind::dephase:
    case ScenarioKind::echo: {
      const Node spectrum = root.child("spectrum");
      config.spectrum = read_spectrum(spectrum);
      checked(spectrum, [&] { return build_spectrum(config); });
      config.beta = root.child("beta").positive();
      config.evolution.g = root.child("g").number();
      if (kind == ScenarioKind::dephase) {
        config.times = root.child("times").sweep();
        config.delta_x = root.child("delta_x").sweep();
      } else {
        config.evolution.t = root.child("T").non_negative();
        config.echo_delta_x = root.child("delta_x").non_negative();
        config.samples = root.has("samples") ? root.child("samples").count(2) : 21;
        // Purity needs the dense reduced matrix.
        if (config.grid.n > kMaxDenseSize) {
          root.child("grid").child("n").fail("the echo purity needs n <= " + std::to_string(kMaxDenseSize));
        }
      }
      break;
    }
    case ScenarioKind::qubit_phase: {
      config.omegas = root.child("omega").sweep();
      for (double w : config.omegas) {
        if (!(w > 0.0)) root.child("omega").fail("omega must be positive");
      }
      config.evolution.g = root.child("g").positive();
      config.drop_height = root.child("L").positive();
      if (root.has("sigma_x")) config.sigma_x = root.child("sigma_x").positive();
      config.samples = root.has("samples") ? root.child("samples").count(3) : 10000;
      break;
    }
  }

  config.echo = to_json(document);
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, 0, "", "cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

}  // namespace qfall::cli
