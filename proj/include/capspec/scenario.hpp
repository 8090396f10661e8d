#pragma once

#include "capspec/eigenbasis.hpp"
#include "capspec/lindblad.hpp"
#include "capspec/spectra.hpp"
#include "capspec/twobody.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace capspec {

enum class ScenarioKind { scattering, photoionization, custom };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::custom;
  std::string name = "custom";

  double half_extent = 50.0;
  int points = 400;
  /// Half-extent of the box whose h0 eigenstates are used for projection;
  /// 0 means the propagation grid itself.
  double projection_half_extent = 0.0;

  PotentialSpec potential;
  InteractionSpec interaction;
  double cap_onset = 35.0;
  std::vector<double> gamma0{1.0};

  std::optional<WavePacketSpec> packet;  ///< scattering initial state
  std::optional<PulseSpec> pulse;        ///< laser field (photoionization)

  double tau = 0.05;
  double t_max = 1000.0;
  int stride = 1;         ///< Phi/R accumulated every `stride` steps with weight stride*tau
  int sample_every = 10;  ///< diagnostics cadence in steps

  /// Without rho1 tracking the run stops once |Psi2|^2 < norm_stop.
  double norm_stop = 0.01;
  /// With rho1 tracking Psi2 is dropped once |Psi2|^2 < psi_drop; the run
  /// then continues until h tr rho1 < rho1_stop_fraction * its peak, or t_max.
  bool track_rho1 = false;
  double psi_drop = 1e-7;
  double rho1_stop_fraction = 1e-3;

  RelaxOptions relax{0.05, 1e-10, 200000};

  std::string output_dir;
};

/// Named parameter sets: "scattering", "photo03", "photo10".
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// gamma0 = 2^-m for m = first..last.
std::vector<double> gamma_ladder(int first, int last);

/// Every violated constraint, one message each. Empty when valid.
std::vector<std::string> validation_errors(const ScenarioConfig& cfg);
/// Throws std::invalid_argument listing every error.
void validate(const ScenarioConfig& cfg);

/// Data shared by every gamma0 of one configuration: grid, h0 eigenbasis,
/// projection basis with its continuum weights and the initial two-body state.
struct ScenarioContext {
  Grid1D grid;
  RealVector potential;
  RealMatrix interaction;
  EigenBasis basis;       ///< on the propagation grid
  EigenBasis projection;  ///< states used for the spectra
  RealVector weights;     ///< continuum weights of `projection`
  TwoBodyState initial;
  double initial_energy = 0.0;
  int relax_iterations = 0;
};

ScenarioContext prepare_context(const ScenarioConfig& cfg);

struct RunRecord {
  std::string config_json;
  std::string config_hash;
  double gamma0 = 0.0;

  SpectrumResult spectrum;
  double p0_final = 0.0;
  double norm2_final = 0.0;
  double trace_rho1_final = 0.0;
  double max_abs_residual = 0.0;
  double residual_final = 0.0;
  double t_end = 0.0;
  long steps = 0;
  bool extent_resolved = true;
  double wall_seconds = 0.0;
  double initial_energy = 0.0;

  std::vector<NormSample> ledger;
  std::vector<std::string> files;
};

/// Full pipeline for one gamma0. Outputs are written when cfg.output_dir is set.
RunRecord run_scenario(const ScenarioConfig& cfg, double gamma0);
/// Same, reusing a prepared context; writes nothing.
RunRecord run_scenario(const ScenarioConfig& cfg, double gamma0, const ScenarioContext& context);

struct SweepEntry {
  double gamma0 = 0.0;
  std::optional<RunRecord> record;
  std::string error;
  double l1_first = 0.0;   ///< int |dP2 - dP2_ref| against the smallest gamma0
  double l1_second = 0.0;  ///< same for dP1
};

struct SweepResult {
  std::vector<SweepEntry> entries;  ///< in input gamma0 order
  std::vector<std::string> files;
};

/// Independent runs over cfg.gamma0 sharing one context; failures are
/// recorded per entry and do not stop the sweep. `jobs` > 1 runs entries
/// concurrently. Outputs are written when cfg.output_dir is set.
SweepResult sweep_gamma(const ScenarioConfig& cfg, int jobs = 1);

}  // namespace capspec
