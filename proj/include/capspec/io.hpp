#pragma once

#include "capspec/scenario.hpp"

#include <string>
#include <vector>

namespace capspec {

/// JSON text of the configuration. Keys:
///   kind, name,
///   grid {half_extent, points, projection_half_extent},
///   potential {kind, strength, width},
///   interaction {strength, smoothness},
///   cap {onset, gamma0: [..]},
///   packet {center, momentum, momentum_width}          (optional)
///   pulse {peak_field, omega, cycles}                  (optional)
///   propagation {tau, t_max, stride, sample_every, norm_stop,
///                track_rho1, psi_drop, rho1_stop_fraction},
///   relax {tau, tolerance, max_iterations},
///   output_dir
std::string config_to_json(const ScenarioConfig& cfg, int indent = 2);

/// Missing keys take the defaults of the kind's preset (custom: plain
/// defaults). Unknown keys and type mismatches are reported together.
ScenarioConfig config_from_json(const std::string& text);

ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& cfg, const std::string& path);

/// Compact serialization without the output directory, and its FNV-1a hash
/// as 16 hex digits.
std::string canonical_config(const ScenarioConfig& cfg);
std::string config_hash(const ScenarioConfig& cfg);

/// `# energy,dP2_dE,dP1_dE` and one row per energy, 17 significant digits.
std::string format_spectrum(const SpectrumResult& spectrum);
/// Config, hash, scalar results, trace-ledger series and version.
std::string format_metadata(const RunRecord& record);
/// gamma0,P2,P1,neg_content,extent,duration,l1_dP2,l1_dP1,status
std::string format_sweep_summary(const SweepResult& sweep);

/// Reads back the config hash stored in a metadata document.
std::string metadata_config_hash(const std::string& metadata_text);

/// spectrum.csv and metadata.json in `dir`; returns the paths.
std::vector<std::string> export_run(const RunRecord& record, const std::string& dir);
/// One gamma0_<value>/ directory per successful run plus sweep_summary.csv.
std::vector<std::string> export_sweep(const SweepResult& sweep, const std::string& dir);

std::string run_directory_name(double gamma0);

}  // namespace capspec
