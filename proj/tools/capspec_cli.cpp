#include "capspec/io.hpp"
#include "capspec/scenario.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace capspec;

namespace {

struct Common {
  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::vector<double> gamma0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", c.preset_name, "named parameter set")
      ->check(CLI::IsMember(preset_names()));
  cmd->add_option("--out", c.out_dir, "output directory");
  cmd->add_option("--gamma0", c.gamma0, "comma separated CAP strengths (overrides the ladder)")
      ->delimiter(',');
}

ScenarioConfig resolve(const Common& c) {
  if (!c.config_path.empty() && !c.preset_name.empty()) {
    throw std::invalid_argument("--config and --preset are mutually exclusive");
  }
  ScenarioConfig cfg;
  if (!c.config_path.empty()) {
    cfg = load_config(c.config_path);
  } else if (!c.preset_name.empty()) {
    cfg = preset(c.preset_name);
  } else {
    throw std::invalid_argument("one of --config or --preset is required");
  }
  if (!c.gamma0.empty()) cfg.gamma0 = c.gamma0;
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (cfg.output_dir.empty()) cfg.output_dir = "capspec_out";
  return cfg;
}

void print_run(const RunRecord& r) {
  const SpectrumResult& s = r.spectrum;
  std::printf("gamma0=%-10.6g P2=%.6e P1=%.6e neg=%.3e extent=%.2f duration=%.1f%s "
              "|Psi2|^2=%.3e p0=%.3e max|res|=%.2e t_end=%.1f (%.1fs)\n",
              r.gamma0, s.P2, s.P1, s.neg_content, s.extent, s.duration,
              s.duration_reached ? "" : "*", r.norm2_final, r.p0_final, r.max_abs_residual,
              r.t_end, r.wall_seconds);
}

int cmd_groundstate(const Common& c) {
  ScenarioConfig cfg = resolve(c);
  validate(cfg);
  const Grid1D grid = build_grid(cfg.half_extent, cfg.points);
  const RealVector v = potential_values(grid, cfg.potential);
  const EigenBasis basis = eigendecompose(build_h0_dense(grid, v), grid);
  const OneBodyGroundState one = relax_one_body(grid, v, cfg.relax);
  const SystemOperators ops =
      make_operators(grid, cfg.potential, cfg.interaction, CapSpec{0.0, cfg.cap_onset});
  const TwoBodyGroundState two = relax_two_body(ops, cfg.relax);

  std::printf("one-body ground energy (diagonalization): %.8f\n", basis.energies[0]);
  std::printf("one-body ground energy (imaginary time):  %.8f  [%d steps]\n", one.energy,
              one.iterations);
  std::printf("bound states: %d\n", basis.bound_count);
  std::printf("two-body ground energy (imaginary time):  %.8f  [%d steps]\n", two.energy,
              two.iterations);

  nlohmann::json j;
  j["config_hash"] = config_hash(cfg);
  j["one_body_eigen"] = basis.energies[0];
  j["one_body_relaxed"] = one.energy;
  j["two_body_relaxed"] = two.energy;
  std::vector<double> bound;
  for (int k = 0; k < basis.bound_count; ++k) bound.push_back(basis.energies[k]);
  j["bound_energies"] = bound;
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / "groundstate.json";
  std::ofstream(path) << j.dump(1) << "\n";
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_run(const Common& c) {
  ScenarioConfig cfg = resolve(c);
  if (cfg.gamma0.size() != 1) {
    std::fprintf(stderr, "run: %zu gamma0 values given; using the first (use sweep for a ladder)\n",
                 cfg.gamma0.size());
    cfg.gamma0.resize(1);
  }
  const RunRecord rec = run_scenario(cfg, cfg.gamma0.front());
  print_run(rec);
  for (const auto& f : rec.files) std::printf("wrote %s\n", f.c_str());
  return 0;
}

int cmd_sweep(const Common& c, int jobs) {
  const ScenarioConfig cfg = resolve(c);
  const SweepResult sweep = sweep_gamma(cfg, jobs);
  int failed = 0;
  for (const auto& e : sweep.entries) {
    if (e.record) {
      print_run(*e.record);
    } else {
      ++failed;
      std::printf("gamma0=%-10.6g FAILED: %s\n", e.gamma0, e.error.c_str());
    }
  }
  std::printf("wrote %zu files under %s\n", sweep.files.size(), cfg.output_dir.c_str());
  return failed == 0 ? 0 : 3;
}

int cmd_config(const Common& c) {
  Common copy = c;
  ScenarioConfig cfg = resolve(copy);
  validate(cfg);
  std::cout << config_to_json(cfg) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CAP-based absorption spectra for one-dimensional two-particle systems"};
  app.set_version_flag("--version", std::string(CAPSPEC_VERSION));
  app.require_subcommand(1);

  Common common;
  int jobs = 1;
  auto* gs = app.add_subcommand("groundstate", "bound-state energies of the configured system");
  add_common(gs, common);
  auto* run = app.add_subcommand("run", "one propagation at a single gamma0");
  add_common(run, common);
  auto* sweep = app.add_subcommand("sweep", "independent runs over the gamma0 ladder");
  add_common(sweep, common);
  sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);
  auto* show = app.add_subcommand("config", "print the resolved configuration as JSON");
  add_common(show, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gs->parsed()) return cmd_groundstate(common);
    if (run->parsed()) return cmd_run(common);
    if (sweep->parsed()) return cmd_sweep(common, jobs);
    if (show->parsed()) return cmd_config(common);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
