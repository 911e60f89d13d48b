#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ethnokinetics/ethnokinetics.hpp"
#include "ethnokinetics/io/csv.hpp"
#include "ethnokinetics/io/presets.hpp"
#include "ethnokinetics/io/svg.hpp"

namespace fs = std::filesystem;
using namespace ethnokinetics;
using io::ModelKind;
using io::Scenario;

namespace {

struct Common {
  std::string scenario_file;
  std::string preset_name;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  bool plot = false;
  unsigned workers = 0;
};

struct Extra {
  bool direct = false;
  std::optional<std::uint64_t> runs;
  std::optional<double> z_plane;
  std::size_t grid_n = 200;
  double k = 0.75;
  std::size_t prisms = 4;
  std::vector<double> taus{0.5, 1.0, 2.0};
  std::vector<double> levels{1.0, 1.5, 2.0, 3.0};
  std::size_t samples = 100000;
  double mc_dt = 1e-4;
  double sigma = 1.0;
  bool reference = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_scenario = true) {
  auto* f = sub->add_option("--scenario", c.scenario_file, "Scenario config file");
  auto* p = sub->add_option("--preset", c.preset_name, "Built-in scenario (see 'presets')");
  f->excludes(p);
  p->excludes(f);
  if (needs_scenario) {
    sub->callback([sub, &c] {
      if (c.scenario_file.empty() && c.preset_name.empty())
        throw CLI::ValidationError("one of --scenario or --preset is required");
    });
  }
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "Override noise.seed");
  sub->add_option("--dt", c.dt, "Override grid.dt")->check(CLI::PositiveNumber);
  sub->add_flag("--plot", c.plot, "Also write SVG plots");
  sub->add_option("--workers", c.workers, "Worker threads (0: all cores)")->capture_default_str();
}

Scenario load(const Common& c) {
  Scenario s = c.scenario_file.empty() ? io::preset(c.preset_name)
                                       : io::read_scenario_file(c.scenario_file);
  if (c.seed) {
    if (!s.noise) s.noise = NoiseSpec{};
    s.noise->seed = *c.seed;
  }
  if (c.dt) s.grid.dt = *c.dt;
  if (c.plot) s.outputs.plot = true;
  s.validate();
  return s;
}

fs::path out_file(const Common& c, const Scenario& s, const std::string& suffix) {
  fs::create_directories(c.out);
  return fs::path(c.out) / (s.name + "_" + suffix);
}

template <class Write>
void write_file(const fs::path& path, Write&& w) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  w(os);
  if (!os) throw std::runtime_error("write failed for " + path.string());
  std::cout << "wrote " << path.string() << '\n';
}

void require_three_var(const Scenario& s, const char* what) {
  if (io::state_size(s.model) != 3)
    throw ValidationError("model.kind", std::string(what) + " needs a three-variable model, not " +
                                            io::to_string(s.model));
}

template <std::size_t N>
std::vector<std::vector<io::Series>> series_panels(const Trajectory<N>& tr) {
  std::vector<double> t(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) t[i] = tr.time(i);
  std::vector<std::vector<io::Series>> panels;
  const std::size_t per = N == 6 ? 3 : N;
  for (std::size_t k = 0; k < per; ++k) {
    std::vector<io::Series> panel{
        {tr.labels[k], t, tr.column(k), io::palette[k % io::palette.size()], false}};
    if (N == 6) panel.push_back({tr.labels[k + 3], t, tr.column(k + 3), io::palette[k], true});
    panels.push_back(std::move(panel));
  }
  return panels;
}

template <std::size_t N>
void write_trajectory(const Common& c, const Scenario& s, const Trajectory<N>& tr,
                      const std::string& tag = "trajectory") {
  if (s.outputs.trajectory)
    write_file(out_file(c, s, tag + ".csv"), [&](std::ostream& os) { io::write_trajectory_csv(os, tr); });
  if (s.outputs.scaled && s.scale) {
    const auto real = scale_to_real(tr, *s.scale);
    write_file(out_file(c, s, tag + "_scaled.csv"),
               [&](std::ostream& os) { io::write_trajectory_csv(os, real, "years"); });
  }
  if (s.outputs.plot)
    write_file(out_file(c, s, tag + ".svg"),
               [&](std::ostream& os) { os << io::svg_time_series(series_panels(tr), s.name); });
}

template <std::size_t N>
void print_excitation(const Trajectory<N>& tr, double alpha, const Scenario& s) {
  ExcitationOptions<N> opt;
  opt.excitation_level = default_excitation_level(s.initial[0], alpha);
  opt.duration_level = 0.1;
  const auto rep = detect_excitation(tr, opt);
  std::printf("x peak %.6g at t=%.6g (%s, threshold %.3g); time above x=0.1: %.6g\n",
              rep.peak_value, rep.peak_time, rep.excited ? "excited" : "sub-threshold",
              opt.excitation_level, rep.spike_duration);
  if (s.scale)
    std::printf("  scaled: %.6g passionaries at year %.6g, spike lasts %.6g years\n",
                s.scale->passionaries(rep.peak_value), s.scale->years(rep.peak_time),
                s.scale->years(rep.spike_duration));
  std::printf("terminal state:");
  for (std::size_t k = 0; k < N; ++k) std::printf(" %.6g", tr.back()[k]);
  std::printf("\n");
}

template <std::size_t N>
void emit_equilibria(const Common& c, const Scenario& s, const EquilibriumSet<N>& set) {
  static constexpr const char* names[] = {"x", "y", "z"};
  for (const auto& e : set.points) {
    std::printf("  (");
    for (std::size_t k = 0; k < N; ++k) std::printf("%s%s=%.6g", k ? ", " : "", names[k], e.point[k]);
    std::printf(")  %-10s %-9s Re(lambda)max=%.4g\n", to_string(e.family), to_string(e.stability),
                e.max_real());
  }
  if (set.complex_roots_omitted)
    std::printf("  %zu complex root(s) omitted\n", set.complex_roots_omitted);
  write_file(out_file(c, s, "equilibria.csv"), [&](std::ostream& os) { io::write_equilibria_csv(os, set); });
}

void cmd_equilibria(const Common& c) {
  const auto s = load(c);
  if (s.model == ModelKind::two_var) {
    emit_equilibria(c, s, equilibria_two_var(std::get<TwoVarParams>(s.params)));
  } else if (io::state_size(s.model) == 3) {
    emit_equilibria(c, s, equilibria_three_var(s.three_var()));
  } else {
    throw ValidationError("model.kind", "equilibrium search covers two_var and three-variable models");
  }
}

Window window_for(const std::vector<double>& u, const std::vector<double>& v) {
  const double umax = *std::max_element(u.begin(), u.end());
  const double vmax = *std::max_element(v.begin(), v.end());
  return {0.0, std::max(0.1, 1.15 * umax), 0.0, std::max(0.1, 1.15 * vmax)};
}

template <std::size_t N>
void emit_phase_plane(const Common& c, const Scenario& s, const Trajectory<N>& tr,
                      const std::vector<std::vector<Polyline>>& ncl, const Window& w,
                      const std::vector<std::string>& names, const std::string& title) {
  write_file(out_file(c, s, "nullclines.csv"),
             [&](std::ostream& os) { io::write_nullclines_csv(os, ncl, names); });
  if (s.outputs.plot) {
    std::vector<Polyline> all;
    for (const auto& v : ncl) all.insert(all.end(), v.begin(), v.end());
    const std::vector<std::array<std::vector<double>, 2>> paths{{tr.column(0), tr.column(1)}};
    write_file(out_file(c, s, "phase.svg"), [&](std::ostream& os) {
      os << io::svg_phase_plane(all, paths, w, title, "x", "y");
    });
  }
}

void cmd_nullclines(const Common& c, const Extra& e) {
  const auto s = load(c);
  const auto g = s.time_grid();
  const std::size_t n = e.grid_n;
  if (s.model == ModelKind::lotka_volterra || s.model == ModelKind::two_var) {
    const auto init = s.initial_state<2>();
    const auto tr = s.model == ModelKind::two_var
                        ? integrate_two_var(std::get<TwoVarParams>(s.params), init, g)
                        : integrate_lotka_volterra(std::get<LVParams>(s.params), init, g);
    const auto w = window_for(tr.column(0), tr.column(1));
    std::vector<std::vector<Polyline>> ncl;
    for (std::size_t which : {0u, 1u})
      ncl.push_back(s.model == ModelKind::two_var
                        ? nullclines_two_var(std::get<TwoVarParams>(s.params), which, w, n, n)
                        : nullclines_lotka_volterra(std::get<LVParams>(s.params), which, w, n, n));
    emit_phase_plane(c, s, tr, ncl, w, {"x", "y"}, s.name + " nullclines");
    return;
  }
  const auto& p = s.three_var();
  const auto tr = integrate_three_var(p, s.initial_state<3>(), g);
  const double z = e.z_plane.value_or(s.initial[2]);
  const auto w = window_for(tr.column(0), tr.column(1));
  std::vector<std::vector<Polyline>> ncl;
  for (std::size_t which : {0u, 1u, 2u}) ncl.push_back(nullclines_three_var(p, which, z, w, n, n));
  std::printf("nullclines in the (x, y) plane at z = %.6g\n", z);
  emit_phase_plane(c, s, tr, ncl, w, {"x", "y", "z"}, s.name + " nullclines at z=" + io::format_double(z));
}

Trajectory<3> single_sde(const Scenario& s, bool direct) {
  const auto g = s.time_grid();
  const auto init = s.initial_state<3>();
  if (!direct) return integrate_sde_log(s.three_var(), *s.noise, init, g);
  return integrate_sde_direct(s.three_var(), *s.noise, init, g, brownian_path(g, 3, s.noise->seed));
}

void cmd_sde(const Common& c, const Extra& e) {
  auto s = load(c);
  require_three_var(s, "sde");
  if (!s.noise) throw ValidationError("noise", "required for sde");
  const auto tr = single_sde(s, e.direct);
  const auto x = tr.column(0);
  std::printf("%s Euler-Maruyama, seed %llu\n", e.direct ? "direct" : "log-space",
              static_cast<unsigned long long>(s.noise->seed));
  print_excitation(tr, s.three_var().alpha1, s);
  std::printf("busts above %.3g: %zu\n", s.ensemble.bust_level,
              count_busts(x, s.ensemble.bust_level, 0.25 * s.ensemble.bust_level));
  write_trajectory(c, s, tr);
}

void cmd_simulate(const Common& c, const Extra& e) {
  const auto s = load(c);
  const auto g = s.time_grid();
  switch (s.model) {
    case ModelKind::lotka_volterra: {
      const auto tr = integrate_lotka_volterra(std::get<LVParams>(s.params), s.initial_state<2>(), g);
      std::printf("terminal state: %.6g %.6g\n", tr.back()[0], tr.back()[1]);
      write_trajectory(c, s, tr);
      break;
    }
    case ModelKind::two_var: {
      const auto& p = std::get<TwoVarParams>(s.params);
      const auto tr = integrate_two_var(p, s.initial_state<2>(), g);
      print_excitation(tr, p.alpha, s);
      write_trajectory(c, s, tr);
      if (s.outputs.equilibria) emit_equilibria(c, s, equilibria_two_var(p));
      if (s.outputs.nullclines) cmd_nullclines(c, e);
      break;
    }
    case ModelKind::three_var: {
      const auto& p = s.three_var();
      const auto tr = integrate_three_var(p, s.initial_state<3>(), g);
      print_excitation(tr, p.alpha1, s);
      write_trajectory(c, s, tr);
      if (s.outputs.equilibria) emit_equilibria(c, s, equilibria_three_var(p));
      if (s.outputs.nullclines) cmd_nullclines(c, e);
      break;
    }
    case ModelKind::sde:
      cmd_sde(c, e);
      break;
    case ModelKind::interaction: {
      const auto d = integrate_interacting(s.three_var(), *s.noise, *s.interaction, s.initial_state<3>(), g);
      const auto rep = dominance_report(d, 0.01);
      std::printf("peaks: X1 %.6g, X2 %.6g; suppressed: %s\n", rep.peak1, rep.peak2,
                  to_string(rep.suppressed));
      write_trajectory(c, s, d.combined());
      break;
    }
  }
}

void cmd_ensemble(const Common& c, const Extra& e) {
  const auto s = load(c);
  require_three_var(s, "ensemble");
  if (!s.noise) throw ValidationError("noise", "required for ensemble");
  EnsembleOptions opt;
  opt.runs = e.runs.value_or(s.ensemble.runs);
  opt.bust_level = s.ensemble.bust_level;
  opt.workers = c.workers;
  const auto sum = ensemble_stats(s.three_var(), *s.noise, s.initial_state<3>(), s.time_grid(), opt);
  std::printf("runs %zu (failed %zu), base seed %llu\n", sum.runs, sum.failures.size(),
              static_cast<unsigned long long>(sum.base_seed));
  for (const auto& f : sum.failures)
    std::fprintf(stderr, "run %zu (seed %llu) failed: %s\n", f.run,
                 static_cast<unsigned long long>(f.seed), f.message.c_str());
  if (!sum.peaks.empty())
    std::printf("x peak: mean %.4g, median %.4g, sd %.4g; runs with >=1 bust %.3f, >=2 busts %.3f\n",
                mean(sum.peaks), median(sum.peaks), stddev(sum.peaks), sum.fraction_with_at_least(1),
                sum.fraction_with_at_least(2));
  write_file(out_file(c, s, "ensemble.csv"), [&](std::ostream& os) { io::write_ensemble_csv(os, sum); });
  write_file(out_file(c, s, "runs.csv"), [&](std::ostream& os) { io::write_runs_csv(os, sum); });
  if (s.outputs.plot) {
    std::vector<std::vector<io::Series>> panels;
    static constexpr const char* names[] = {"x", "y", "z"};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& b = sum.bands[k];
      const std::string n = names[k];
      panels.push_back({{"p10 " + n, sum.times, b.p10, io::palette[3], true},
                        {"median " + n, sum.times, b.p50, io::palette[k], false},
                        {"p90 " + n, sum.times, b.p90, io::palette[3], true}});
    }
    write_file(out_file(c, s, "ensemble.svg"),
               [&](std::ostream& os) { os << io::svg_time_series(panels, s.name + " ensemble"); });
  }
  if (sum.failures.size() == sum.runs) throw NonFiniteState("every run failed");
}

void cmd_interact(const Common& c, const Extra& e) {
  const auto s = load(c);
  if (s.model != ModelKind::interaction || !s.interaction)
    throw ValidationError("model.kind", "interact needs an interaction scenario");
  const auto& p = s.three_var();
  const auto g = s.time_grid();
  const auto path = brownian_path(g, 6, s.noise->seed);
  const auto d = integrate_interacting(p, *s.noise, *s.interaction, s.initial_state<3>(), g, path);
  std::optional<ReferencePeaks> refs;
  if (e.reference) {
    InteractionSpec off = *s.interaction;
    off.c1 = off.c2 = 0.0;
    const auto u = integrate_interacting(p, *s.noise, off, s.initial_state<3>(), g, path);
    refs = ReferencePeaks{u.ethnos1.peak(0).first, u.ethnos2.peak(0).first};
    std::printf("uncoupled reference peaks: X1 %.6g, X2 %.6g\n", refs->ethnos1, refs->ethnos2);
  }
  const auto rep = dominance_report(d, 0.01, refs);
  std::printf("peaks: X1 %.6g, X2 %.6g (ratio %.4g); suppressed: %s (margin %.4g)\n", rep.peak1,
              rep.peak2, rep.peak_ratio, to_string(rep.suppressed), rep.margin);
  write_trajectory(c, s, d.combined());
}

void cmd_prism(const Common& c, const Extra& e) {
  const auto s = load(c);
  require_three_var(s, "prism");
  const auto& p = s.three_var();
  const auto seq = build_prism_sequence(p, e.k, e.prisms, s.initial_state<3>());
  const auto v = verify_prism_sequence(p, seq, 50);
  std::printf("k = %.6g, growth e^k = %.10g\n", e.k, std::exp(e.k));
  for (std::size_t i = 0; i < seq.prisms.size(); ++i) {
    const auto& pr = seq.prisms[i];
    const auto& pv = v.prisms[i];
    std::printf("  P%zu: a=%.6g b=%.6g c=%.6g  worst x/y/z facet %.4g / %.4g / %.4g  %s\n", i, pr.a,
                pr.b, pr.c, pv.facets[0].worst, pv.facets[1].worst, pv.facets[2].worst,
                pv.pass() ? "inward" : "NOT inward");
  }
  for (const auto& sv : v.slabs)
    std::printf("  slab %zu: worst %.4g / %.4g / %.4g, growth %s\n", sv.index, sv.slabs[0].worst,
                sv.slabs[1].worst, sv.slabs[2].worst, sv.growth_ok ? "ok" : "short");
  std::printf("initial state inside P0: %s; sequence %s\n", v.base_contains_initial ? "yes" : "no",
              v.pass() ? "valid" : "INVALID");
  write_file(out_file(c, s, "prisms.csv"), [&](std::ostream& os) {
    os << "index,a,b,c,worst_x,worst_y,worst_z,pass\n";
    for (std::size_t i = 0; i < seq.prisms.size(); ++i) {
      const auto& pr = seq.prisms[i];
      const auto& pv = v.prisms[i];
      os << i << ',' << io::format_double(pr.a) << ',' << io::format_double(pr.b) << ','
         << io::format_double(pr.c) << ',' << io::format_double(pv.facets[0].worst) << ','
         << io::format_double(pv.facets[1].worst) << ',' << io::format_double(pv.facets[2].worst)
         << ',' << (pv.pass() ? "true" : "false") << '\n';
    }
  });
  if (!v.pass()) throw NonFiniteState("prism sequence failed verification");
}

void cmd_bounds(const Common& c, const Extra& e) {
  const std::uint64_t seed = c.seed.value_or(1);
  std::printf("tau,a,empirical,bound,std_error,paths\n");
  Scenario tag;
  tag.name = "bounds";
  std::ostringstream csv;
  csv << "tau,a,empirical,bound,std_error,paths\n";
  for (double tau : e.taus) {
    const auto res = brownian_range_bounds(e.levels, tau, e.samples, seed, e.mc_dt, c.workers);
    for (const auto& r : res) {
      std::printf("%g,%g,%.6g,%.6g,%.3g,%zu\n", tau, r.level, r.empirical, r.analytic,
                  r.standard_error(), r.samples);
      csv << io::format_double(tau) << ',' << io::format_double(r.level) << ','
          << io::format_double(r.empirical) << ',' << io::format_double(r.analytic) << ','
          << io::format_double(r.standard_error()) << ',' << r.samples << '\n';
    }
  }
  for (double tau : e.taus)
    std::printf("smallest k with exit probability < 1/3 for tau=%g, sigma=%g: %.6g\n", tau, e.sigma,
                min_k_for_tau(tau, e.sigma));
  write_file(out_file(c, tag, "range.csv"), [&](std::ostream& os) { os << csv.str(); });
}

void cmd_presets(const Common& c) {
  if (!c.preset_name.empty()) {
    std::cout << io::serialize_scenario(io::preset(c.preset_name));
    return;
  }
  for (const auto& n : io::preset_names()) {
    const auto s = io::preset(n);
    std::cout << n << "  " << io::to_string(s.model) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passionary-dynamics simulator: ODE, SDE, equilibria, nullclines and prism checks"};
  app.require_subcommand(1);
  Common c;
  Extra e;

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its outputs");
  add_common(simulate, c);
  auto* equilibria = app.add_subcommand("equilibria", "Find and classify equilibria");
  add_common(equilibria, c);
  auto* nullclines = app.add_subcommand("nullclines", "Trace nullclines in the (x, y) plane");
  add_common(nullclines, c);
  nullclines->add_option("--z", e.z_plane, "z of the section plane (three-variable models)");
  nullclines->add_option("--grid", e.grid_n, "Cells per axis")->capture_default_str();
  auto* sde = app.add_subcommand("sde", "Single stochastic realization");
  add_common(sde, c);
  sde->add_flag("--direct", e.direct, "Integrate in population coordinates instead of logs");
  auto* ensemble = app.add_subcommand("ensemble", "Seeded ensemble of stochastic runs");
  add_common(ensemble, c);
  ensemble->add_option("--runs", e.runs, "Override ensemble.runs");
  auto* interact = app.add_subcommand("interact", "Two interacting ethnoses");
  add_common(interact, c);
  interact->add_flag("--reference", e.reference, "Judge dominance against the uncoupled run");
  auto* prism = app.add_subcommand("prism", "Build and verify a sequence of inward prisms");
  add_common(prism, c);
  prism->add_option("--k", e.k, "Log growth step")->capture_default_str()->check(CLI::PositiveNumber);
  prism->add_option("--count", e.prisms, "Number of prisms")->capture_default_str();
  auto* bounds = app.add_subcommand("bounds", "Monte Carlo check of the Brownian range bound");
  add_common(bounds, c, false);
  bounds->add_option("--tau", e.taus, "Horizons")->capture_default_str();
  bounds->add_option("--levels", e.levels, "Levels a")->capture_default_str();
  bounds->add_option("--samples", e.samples, "Paths per horizon")->capture_default_str();
  bounds->add_option("--mc-dt", e.mc_dt, "Path time step")->capture_default_str();
  bounds->add_option("--sigma", e.sigma, "Volatility for the growth-step threshold")->capture_default_str();
  auto* presets = app.add_subcommand("presets", "List presets, or print one as config text");
  add_common(presets, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (c.workers == 0) c.workers = std::max(1u, std::thread::hardware_concurrency());
    if (*simulate) cmd_simulate(c, e);
    else if (*equilibria) cmd_equilibria(c);
    else if (*nullclines) cmd_nullclines(c, e);
    else if (*sde) cmd_sde(c, e);
    else if (*ensemble) cmd_ensemble(c, e);
    else if (*interact) cmd_interact(c, e);
    else if (*prism) cmd_prism(c, e);
    else if (*bounds) cmd_bounds(c, e);
    else if (*presets) cmd_presets(c);
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << '\n';
    return 2;
  } catch (const ValidationError& err) {
    std::cerr << "invalid scenario: " << err.what() << '\n';
    return 2;
  } catch (const UnknownPreset& err) {
    std::cerr << err.what() << '\n';
    return 2;
  } catch (const ParamSignViolation& err) {
    std::cerr << "invalid parameters: " << err.what() << '\n';
    return 2;
  } catch (const KnotMisalignment& err) {
    std::cerr << "invalid grid: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
