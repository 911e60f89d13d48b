#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "../errors.hpp"
#include "scenario.hpp"

namespace ethnokinetics::io {

inline ThreeVarParams fig4_params() {
  ThreeVarParams p;
  p.alpha1 = 0.03;
  p.alpha2 = 0.11;
  p.y0 = 0.075;
  p.z0 = 0.22;
  p.beta12 = -6.0;
  p.beta13 = 0.6;
  p.beta21 = 0.2;
  p.beta23 = 0.1;
  p.beta31 = 0.5;
  p.beta32 = 0.0;
  p.gamma1 = 1.0;
  p.gamma2 = 0.7;
  p.gamma3 = 0.2;
  return p;
}

inline ThreeVarParams fig6_params() {
  ThreeVarParams p;
  p.alpha1 = 0.03;
  p.alpha2 = 0.1;
  p.y0 = 0.075;
  p.z0 = 0.6;
  p.beta12 = -0.06;
  p.beta13 = 0.6;
  p.beta21 = 1.25;
  p.beta23 = -0.075;
  p.beta31 = -0.5;
  p.beta32 = 0.0;
  p.gamma1 = 2.0;
  p.gamma2 = 20.0;
  p.gamma3 = 0.6;
  return p;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5",
                                              "fig6", "fig7a", "fig7b", "fig8"};
  return names;
}

inline bool is_preset(std::string_view name) {
  for (const auto& n : preset_names())
    if (n == name) return true;
  return false;
}

/// Built-in reference scenarios. Horizons, seeds and output choices
/// are fixed here.
inline Scenario preset(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  if (name == "fig2" || name == "fig3") {
    TwoVarParams p;
    p.alpha = 0.02;
    p.gamma = 0.1;
    if (name == "fig2") {
      p.y0 = 0.05;
      p.beta1 = -1.0 / 3.0;
      p.beta2 = 2.5;
    } else {
      p.y0 = 1.0;
      p.beta1 = 1.0 / 3.0;
      p.beta2 = -2.5;
    }
    s.model = ModelKind::two_var;
    s.params = p;
    s.initial = {0.1, p.y0};
    s.grid.tf = 200.0;
    s.scale = RealScale{};
    s.outputs.scaled = true;
    s.outputs.equilibria = true;
    s.outputs.nullclines = true;
    return s;
  }
  if (name == "fig4" || name == "fig5") {
    ThreeVarParams p = fig4_params();
    if (name == "fig5") p.z0 = 0.0;
    s.model = ModelKind::three_var;
    s.params = p;
    s.initial = {0.07, name == "fig4" ? 0.053 : 0.075, 0.05};
    // long enough for the slow z relaxation to reach its attractor
    s.grid.tf = 1000.0;
    s.outputs.equilibria = true;
    s.outputs.nullclines = true;
    return s;
  }
  if (name == "fig6") {
    ThreeVarParams p = fig6_params();
    s.model = ModelKind::three_var;
    s.params = p;
    s.initial = {0.1, p.y0, p.z0};
    s.grid.tf = 200.0;
    s.outputs.equilibria = true;
    s.outputs.nullclines = true;
    return s;
  }
  if (name == "fig7a" || name == "fig7b") {
    const double sigma = name == "fig7a" ? 0.05 : 0.1;
    s.model = ModelKind::sde;
    s.params = fig4_params();
    s.initial = {0.07, 0.053, 0.05};
    s.grid.tf = 200.0;
    s.noise = NoiseSpec{sigma, sigma, sigma, 42};
    return s;
  }
  if (name == "fig8") {
    s.model = ModelKind::interaction;
    s.params = fig4_params();
    s.initial = {0.07, 0.053, 0.05};
    s.grid.tf = 300.0;
    s.noise = NoiseSpec{0.05, 0.05, 0.05, 42};
    s.interaction = InteractionSpec{0.22, 0.22, 30.0, 5.0};
    return s;
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw UnknownPreset("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

/// A preset name or a path to a scenario file.
inline Scenario load_scenario(const std::string& path_or_preset) {
  if (is_preset(path_or_preset)) return preset(path_or_preset);
  const bool looks_like_path = path_or_preset.find_first_of("./\\") != std::string::npos;
  if (!looks_like_path && !std::filesystem::exists(path_or_preset)) return preset(path_or_preset);
  return read_scenario_file(path_or_preset);
}

}  // namespace ethnokinetics::io
