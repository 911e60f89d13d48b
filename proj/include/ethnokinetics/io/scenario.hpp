#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "../errors.hpp"
#include "../integrate.hpp"
#include "../interaction.hpp"
#include "../params.hpp"
#include "../time_grid.hpp"
#include "config.hpp"

namespace ethnokinetics::io {

enum class ModelKind { lotka_volterra, two_var, three_var, sde, interaction };

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::lotka_volterra: return "lotka_volterra";
    case ModelKind::two_var: return "two_var";
    case ModelKind::three_var: return "three_var";
    case ModelKind::sde: return "sde";
    case ModelKind::interaction: return "interaction";
  }
  return "?";
}

inline std::optional<ModelKind> model_from_string(std::string_view s) {
  for (auto m : {ModelKind::lotka_volterra, ModelKind::two_var, ModelKind::three_var,
                 ModelKind::sde, ModelKind::interaction})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

/// Number of state components of a model.
inline std::size_t state_size(ModelKind m) {
  return m == ModelKind::lotka_volterra || m == ModelKind::two_var ? 2 : 3;
}

using ParamSet = std::variant<LVParams, TwoVarParams, ThreeVarParams>;

struct GridSpec {
  double t0 = 0.0;
  double tf = 200.0;
  double dt = 1e-3;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct EnsembleSettings {
  std::uint64_t runs = 200;
  double bust_level = 0.3;
  friend bool operator==(const EnsembleSettings&, const EnsembleSettings&) = default;
};

struct OutputRequests {
  bool trajectory = true;
  bool scaled = false;  ///< extra CSV in years and head-counts (needs scale.*)
  bool equilibria = false;
  bool nullclines = false;
  bool plot = false;
  friend bool operator==(const OutputRequests&, const OutputRequests&) = default;
};

struct Scenario {
  std::string name = "custom";
  ModelKind model = ModelKind::three_var;
  ParamSet params = ThreeVarParams{};
  std::vector<double> initial;
  GridSpec grid;
  std::optional<NoiseSpec> noise;
  std::optional<InteractionSpec> interaction;
  std::optional<RealScale> scale;
  EnsembleSettings ensemble;
  OutputRequests outputs;

  friend bool operator==(const Scenario&, const Scenario&) = default;

  const ThreeVarParams& three_var() const { return std::get<ThreeVarParams>(params); }

  template <std::size_t N>
  State<N> initial_state() const {
    if (initial.size() != N) throw ValidationError("model.initial", "wrong number of components");
    State<N> s;
    for (std::size_t i = 0; i < N; ++i) s[i] = initial[i];
    return s;
  }

  /// Time grid, with the interaction gate times as knots when relevant.
  TimeGrid time_grid() const {
    if (model == ModelKind::interaction && interaction) {
      std::vector<double> knots;
      for (double k : {interaction->T1, interaction->onset()})
        if (k > grid.t0 && k < grid.tf) knots.push_back(k);
      return TimeGrid(grid.t0, grid.tf, grid.dt, std::move(knots));
    }
    return TimeGrid(grid.t0, grid.tf, grid.dt);
  }

  void validate() const {
    if (name.empty() || name.find_first_of("#\n\r") != std::string::npos)
      throw ValidationError("model.name", "must be non-empty without '#' or line breaks");
    const bool params_match =
        (model == ModelKind::lotka_volterra && std::holds_alternative<LVParams>(params)) ||
        (model == ModelKind::two_var && std::holds_alternative<TwoVarParams>(params)) ||
        (state_size(model) == 3 && std::holds_alternative<ThreeVarParams>(params));
    if (!params_match) throw ValidationError("params", "parameter set does not match model.kind");
    std::visit([](const auto& p) { p.validate(); }, params);
    if (initial.size() != state_size(model))
      throw ValidationError("model.initial", "expected " + std::to_string(state_size(model)) +
                                                 " components");
    for (double v : initial)
      if (!(v > 0.0 && std::isfinite(v)))
        throw ValidationError("model.initial", "components must be strictly positive");
    if (!(grid.tf > grid.t0)) throw ValidationError("grid.tf", "must exceed grid.t0");
    if (!(grid.dt > 0.0) || !(grid.dt <= grid.tf - grid.t0))
      throw ValidationError("grid.dt", "must be positive and no longer than the horizon");
    const bool stochastic = model == ModelKind::sde || model == ModelKind::interaction;
    if (stochastic && !noise) throw ValidationError("noise", "required for model " + std::string(to_string(model)));
    if (noise) noise->validate();
    if (stochastic) {
      try {
        require_stochastic_signs(three_var());
      } catch (const ParamSignViolation& e) {
        throw ValidationError(three_var().beta12 > 0.0 ? "beta12" : "beta32", e.what());
      }
    }
    if (model == ModelKind::interaction && !interaction)
      throw ValidationError("interaction", "required for the interaction model");
    if (interaction) interaction->validate();
    if (scale) scale->validate();
    if (outputs.scaled && !scale) throw ValidationError("outputs.scaled", "needs scale.* settings");
    if (ensemble.runs == 0) throw ValidationError("ensemble.runs", "must be >= 1");
    if (!(ensemble.bust_level > 0.0)) throw ValidationError("ensemble.bust_level", "must be positive");
  }
};

// ---------------------------------------------------------------------------
// Field tables shared by reader and writer

namespace detail {

template <class P>
struct Field {
  const char* name;
  double P::*member;
};

inline constexpr std::array<Field<LVParams>, 3> lv_fields{
    {{"beta1", &LVParams::beta1}, {"beta2", &LVParams::beta2}, {"gamma", &LVParams::gamma}}};

inline constexpr std::array<Field<TwoVarParams>, 5> two_var_fields{{{"alpha", &TwoVarParams::alpha},
                                                                    {"y0", &TwoVarParams::y0},
                                                                    {"beta1", &TwoVarParams::beta1},
                                                                    {"beta2", &TwoVarParams::beta2},
                                                                    {"gamma", &TwoVarParams::gamma}}};

inline constexpr std::array<Field<ThreeVarParams>, 13> three_var_fields{
    {{"alpha1", &ThreeVarParams::alpha1},
     {"alpha2", &ThreeVarParams::alpha2},
     {"y0", &ThreeVarParams::y0},
     {"z0", &ThreeVarParams::z0},
     {"beta12", &ThreeVarParams::beta12},
     {"beta13", &ThreeVarParams::beta13},
     {"beta21", &ThreeVarParams::beta21},
     {"beta23", &ThreeVarParams::beta23},
     {"beta31", &ThreeVarParams::beta31},
     {"beta32", &ThreeVarParams::beta32},
     {"gamma1", &ThreeVarParams::gamma1},
     {"gamma2", &ThreeVarParams::gamma2},
     {"gamma3", &ThreeVarParams::gamma3}}};

inline constexpr std::array<Field<NoiseSpec>, 3> noise_fields{{{"sigma1", &NoiseSpec::sigma1},
                                                               {"sigma2", &NoiseSpec::sigma2},
                                                               {"sigma3", &NoiseSpec::sigma3}}};

inline constexpr std::array<Field<InteractionSpec>, 4> interaction_fields{
    {{"c1", &InteractionSpec::c1},
     {"c2", &InteractionSpec::c2},
     {"T1", &InteractionSpec::T1},
     {"T2", &InteractionSpec::T2}}};

inline constexpr std::array<Field<RealScale>, 3> scale_fields{
    {{"years_per_unit", &RealScale::years_per_unit},
     {"K", &RealScale::K},
     {"nonpassionary_factor", &RealScale::nonpassionary_factor}}};

template <class P, std::size_t M>
P read_fields(const Config& cfg, const std::string& prefix, const std::array<Field<P>, M>& fields,
              P value = {}) {
  for (const auto& f : fields)
    if (auto v = cfg.number(prefix + f.name)) value.*f.member = *v;
  return value;
}

template <class P, std::size_t M>
bool any_field(const Config& cfg, const std::string& prefix, const std::array<Field<P>, M>& fields) {
  for (const auto& f : fields)
    if (cfg.has(prefix + f.name)) return true;
  return false;
}

template <class P, std::size_t M>
void write_fields(std::ostream& os, const std::string& prefix, const std::array<Field<P>, M>& fields,
                  const P& value) {
  for (const auto& f : fields) os << prefix << f.name << " = " << format_double(value.*f.member) << '\n';
}

inline void write_bool(std::ostream& os, const char* key, bool v) {
  os << key << " = " << (v ? "true" : "false") << '\n';
}

}  // namespace detail

/// Builds and validates a scenario from parsed config text. Unknown keys
/// and invariant violations are reported with their line.
inline Scenario scenario_from_config(const Config& cfg) {
  Scenario s;
  if (auto name = cfg.text("model.name")) s.name = *name;
  const auto kind = cfg.text("model.kind");
  if (!kind) throw ParseError(0, "missing required key 'model.kind'");
  const auto model = model_from_string(*kind);
  if (!model) throw ParseError(cfg.line_of("model.kind"), "unknown model.kind '" + *kind + "'");
  s.model = *model;

  switch (s.model) {
    case ModelKind::lotka_volterra:
      s.params = detail::read_fields(cfg, "params.", detail::lv_fields);
      break;
    case ModelKind::two_var:
      s.params = detail::read_fields(cfg, "params.", detail::two_var_fields);
      break;
    default:
      s.params = detail::read_fields(cfg, "params.", detail::three_var_fields);
      break;
  }
  const auto init = cfg.numbers("model.initial");
  if (!init) throw ParseError(0, "missing required key 'model.initial'");
  s.initial = *init;

  s.grid.t0 = cfg.number("grid.t0").value_or(s.grid.t0);
  s.grid.tf = cfg.number("grid.tf").value_or(s.grid.tf);
  s.grid.dt = cfg.number("grid.dt").value_or(s.grid.dt);

  if (detail::any_field(cfg, "noise.", detail::noise_fields) || cfg.has("noise.seed")) {
    NoiseSpec n = detail::read_fields(cfg, "noise.", detail::noise_fields);
    n.seed = cfg.integer("noise.seed").value_or(0);
    s.noise = n;
  }
  if (detail::any_field(cfg, "interaction.", detail::interaction_fields))
    s.interaction = detail::read_fields(cfg, "interaction.", detail::interaction_fields);
  if (detail::any_field(cfg, "scale.", detail::scale_fields))
    s.scale = detail::read_fields(cfg, "scale.", detail::scale_fields);

  s.ensemble.runs = cfg.integer("ensemble.runs").value_or(s.ensemble.runs);
  s.ensemble.bust_level = cfg.number("ensemble.bust_level").value_or(s.ensemble.bust_level);

  s.outputs.trajectory = cfg.boolean("outputs.trajectory").value_or(s.outputs.trajectory);
  s.outputs.scaled = cfg.boolean("outputs.scaled").value_or(s.outputs.scaled);
  s.outputs.equilibria = cfg.boolean("outputs.equilibria").value_or(s.outputs.equilibria);
  s.outputs.nullclines = cfg.boolean("outputs.nullclines").value_or(s.outputs.nullclines);
  s.outputs.plot = cfg.boolean("outputs.plot").value_or(s.outputs.plot);

  if (const auto unused = cfg.unused_keys(); !unused.empty())
    throw ParseError(cfg.line_of(unused.front()),
                     "unknown key '" + unused.front() + "' for model " + to_string(s.model));

  try {
    s.validate();
  } catch (const ValidationError& e) {
    // Re-anchor the error on the offending line when the field came from the file.
    const std::string& f = e.field();
    for (const std::string& key : {f, "params." + f, "noise." + f, "interaction." + f,
                                   "scale." + f, "grid." + f, "model." + f}) {
      if (cfg.has(key)) {
        const std::string what = e.what();
        throw ValidationError(key, what.substr(f.size() + 2) + " (line " +
                                       std::to_string(cfg.line_of(key)) + ")");
      }
    }
    throw;
  }
  return s;
}

inline Scenario parse_scenario(std::string_view text) { return scenario_from_config(Config::parse(text)); }

/// Config text that parse_scenario() maps back to an equal Scenario.
inline std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "model.kind = " << to_string(s.model) << '\n';
  os << "model.name = " << s.name << '\n';
  os << "model.initial = ";
  for (std::size_t i = 0; i < s.initial.size(); ++i)
    os << (i ? ", " : "") << format_double(s.initial[i]);
  os << "\n\n";
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LVParams>) detail::write_fields(os, "params.", detail::lv_fields, p);
        if constexpr (std::is_same_v<P, TwoVarParams>)
          detail::write_fields(os, "params.", detail::two_var_fields, p);
        if constexpr (std::is_same_v<P, ThreeVarParams>)
          detail::write_fields(os, "params.", detail::three_var_fields, p);
      },
      s.params);
  os << "\ngrid.t0 = " << format_double(s.grid.t0) << "\ngrid.tf = " << format_double(s.grid.tf)
     << "\ngrid.dt = " << format_double(s.grid.dt) << "\n";
  if (s.noise) {
    os << '\n';
    detail::write_fields(os, "noise.", detail::noise_fields, *s.noise);
    os << "noise.seed = " << s.noise->seed << '\n';
  }
  if (s.interaction) {
    os << '\n';
    detail::write_fields(os, "interaction.", detail::interaction_fields, *s.interaction);
  }
  if (s.scale) {
    os << '\n';
    detail::write_fields(os, "scale.", detail::scale_fields, *s.scale);
  }
  os << "\nensemble.runs = " << s.ensemble.runs
     << "\nensemble.bust_level = " << format_double(s.ensemble.bust_level) << "\n\n";
  detail::write_bool(os, "outputs.trajectory", s.outputs.trajectory);
  detail::write_bool(os, "outputs.scaled", s.outputs.scaled);
  detail::write_bool(os, "outputs.equilibria", s.outputs.equilibria);
  detail::write_bool(os, "outputs.nullclines", s.outputs.nullclines);
  detail::write_bool(os, "outputs.plot", s.outputs.plot);
  return os.str();
}

inline Scenario read_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace ethnokinetics::io
