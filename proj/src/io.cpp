#include "capspec/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace capspec {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json to_json_value(const ScenarioConfig& cfg, bool with_output) {
  json j;
  j["kind"] = to_string(cfg.kind);
  j["name"] = cfg.name;
  j["grid"] = {{"half_extent", cfg.half_extent},
               {"points", cfg.points},
               {"projection_half_extent", cfg.projection_half_extent}};
  j["potential"] = {{"kind", to_string(cfg.potential.kind)},
                    {"strength", cfg.potential.strength},
                    {"width", cfg.potential.width}};
  j["interaction"] = {{"strength", cfg.interaction.strength},
                      {"smoothness", cfg.interaction.smoothness}};
  j["cap"] = {{"onset", cfg.cap_onset}, {"gamma0", cfg.gamma0}};
  if (cfg.packet) {
    j["packet"] = {{"center", cfg.packet->center},
                   {"momentum", cfg.packet->momentum},
                   {"momentum_width", cfg.packet->momentum_width}};
  }
  if (cfg.pulse) {
    j["pulse"] = {{"peak_field", cfg.pulse->peak_field},
                  {"omega", cfg.pulse->omega},
                  {"cycles", cfg.pulse->n_cycles}};
  }
  j["propagation"] = {{"tau", cfg.tau},
                      {"t_max", cfg.t_max},
                      {"stride", cfg.stride},
                      {"sample_every", cfg.sample_every},
                      {"norm_stop", cfg.norm_stop},
                      {"track_rho1", cfg.track_rho1},
                      {"psi_drop", cfg.psi_drop},
                      {"rho1_stop_fraction", cfg.rho1_stop_fraction}};
  j["relax"] = {{"tau", cfg.relax.tau},
                {"tolerance", cfg.relax.tolerance},
                {"max_iterations", cfg.relax.max_iterations}};
  if (with_output) j["output_dir"] = cfg.output_dir;
  return j;
}

// Collects every problem instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  template <class T>
  void get(const json& obj, const std::string& path, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!it->is_number_integer()) throw std::runtime_error("expected an integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw std::runtime_error("expected a number");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw std::runtime_error("expected true or false");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw std::runtime_error("expected a string");
      }
      out = it->get<T>();
    } catch (const std::exception& e) {
      errors.push_back(path + key + ": " + e.what());
    }
  }

  void check_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
      errors.push_back((path.empty() ? std::string("document") : path) + ": expected an object");
      return;
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const char* a : allowed) known = known || it.key() == a;
      if (!known) errors.push_back(path + it.key() + ": unknown key");
    }
  }

  const json* section(const json& root, const char* key, std::initializer_list<const char*> allowed) {
    auto it = root.find(key);
    if (it == root.end()) return nullptr;
    const std::string path = std::string(key) + ".";
    if (!it->is_object()) {
      errors.push_back(std::string(key) + ": expected an object");
      return nullptr;
    }
    check_keys(*it, path, allowed);
    return &*it;
  }
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

}  // namespace

std::string config_to_json(const ScenarioConfig& cfg, int indent) {
  return to_json_value(cfg, true).dump(indent);
}

ScenarioConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  Reader r;
  r.check_keys(root, "",
               {"kind", "name", "grid", "potential", "interaction", "cap", "packet", "pulse",
                "propagation", "relax", "output_dir"});
  if (!r.errors.empty() && !root.is_object()) throw std::invalid_argument(r.errors.front());

  std::string kind_name = "custom";
  r.get(root, "", "kind", kind_name);
  ScenarioConfig cfg;
  try {
    const ScenarioKind kind = scenario_kind_from_string(kind_name);
    if (kind == ScenarioKind::scattering) cfg = preset("scattering");
    if (kind == ScenarioKind::photoionization) cfg = preset("photo03");
    cfg.kind = kind;
    cfg.name = kind_name;
  } catch (const std::exception& e) {
    r.errors.push_back(std::string("kind: ") + e.what());
  }
  r.get(root, "", "name", cfg.name);
  r.get(root, "", "output_dir", cfg.output_dir);

  if (const json* g = r.section(root, "grid", {"half_extent", "points", "projection_half_extent"})) {
    r.get(*g, "grid.", "half_extent", cfg.half_extent);
    r.get(*g, "grid.", "points", cfg.points);
    r.get(*g, "grid.", "projection_half_extent", cfg.projection_half_extent);
  }
  if (const json* p = r.section(root, "potential", {"kind", "strength", "width"})) {
    std::string k = to_string(cfg.potential.kind);
    r.get(*p, "potential.", "kind", k);
    try {
      cfg.potential.kind = potential_kind_from_string(k);
    } catch (const std::exception& e) {
      r.errors.push_back(std::string("potential.kind: ") + e.what());
    }
    r.get(*p, "potential.", "strength", cfg.potential.strength);
    r.get(*p, "potential.", "width", cfg.potential.width);
  }
  if (const json* w = r.section(root, "interaction", {"strength", "smoothness"})) {
    r.get(*w, "interaction.", "strength", cfg.interaction.strength);
    r.get(*w, "interaction.", "smoothness", cfg.interaction.smoothness);
  }
  if (const json* c = r.section(root, "cap", {"onset", "gamma0"})) {
    r.get(*c, "cap.", "onset", cfg.cap_onset);
    auto it = c->find("gamma0");
    if (it != c->end()) {
      if (it->is_number()) {
        cfg.gamma0 = {it->get<double>()};
      } else if (it->is_array() &&
                 std::all_of(it->begin(), it->end(), [](const json& v) { return v.is_number(); })) {
        cfg.gamma0 = it->get<std::vector<double>>();
      } else {
        r.errors.push_back("cap.gamma0: expected a number or an array of numbers");
      }
    }
  }
  if (root.contains("packet") && root["packet"].is_null()) {
    cfg.packet.reset();
  } else if (const json* p = r.section(root, "packet", {"center", "momentum", "momentum_width"})) {
    WavePacketSpec spec = cfg.packet.value_or(WavePacketSpec{});
    r.get(*p, "packet.", "center", spec.center);
    r.get(*p, "packet.", "momentum", spec.momentum);
    r.get(*p, "packet.", "momentum_width", spec.momentum_width);
    cfg.packet = spec;
  }
  if (root.contains("pulse") && root["pulse"].is_null()) {
    cfg.pulse.reset();
  } else if (const json* p = r.section(root, "pulse", {"peak_field", "omega", "cycles"})) {
    PulseSpec spec = cfg.pulse.value_or(PulseSpec{});
    r.get(*p, "pulse.", "peak_field", spec.peak_field);
    r.get(*p, "pulse.", "omega", spec.omega);
    r.get(*p, "pulse.", "cycles", spec.n_cycles);
    cfg.pulse = spec;
  }
  if (const json* p = r.section(root, "propagation",
                                {"tau", "t_max", "stride", "sample_every", "norm_stop",
                                 "track_rho1", "psi_drop", "rho1_stop_fraction"})) {
    r.get(*p, "propagation.", "tau", cfg.tau);
    r.get(*p, "propagation.", "t_max", cfg.t_max);
    r.get(*p, "propagation.", "stride", cfg.stride);
    r.get(*p, "propagation.", "sample_every", cfg.sample_every);
    r.get(*p, "propagation.", "norm_stop", cfg.norm_stop);
    r.get(*p, "propagation.", "track_rho1", cfg.track_rho1);
    r.get(*p, "propagation.", "psi_drop", cfg.psi_drop);
    r.get(*p, "propagation.", "rho1_stop_fraction", cfg.rho1_stop_fraction);
  }
  if (const json* p = r.section(root, "relax", {"tau", "tolerance", "max_iterations"})) {
    r.get(*p, "relax.", "tau", cfg.relax.tau);
    r.get(*p, "relax.", "tolerance", cfg.relax.tolerance);
    r.get(*p, "relax.", "max_iterations", cfg.relax.max_iterations);
  }

  if (!r.errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : r.errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  write_text(path, config_to_json(cfg) + "\n");
}

std::string canonical_config(const ScenarioConfig& cfg) {
  return to_json_value(cfg, false).dump();
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_config(cfg)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string format_spectrum(const SpectrumResult& s) {
  std::string out = "# energy,dP2_dE,dP1_dE\n";
  for (int k = 0; k < s.energies.size(); ++k) {
    out += fmt17(s.energies[k]) + "," + fmt17(s.dP2_dE[k]) + "," + fmt17(s.dP1_dE[k]) + "\n";
  }
  return out;
}

std::string format_metadata(const RunRecord& rec) {
  json j;
  j["version"] = CAPSPEC_VERSION;
  j["config"] = json::parse(rec.config_json);
  j["config_hash"] = rec.config_hash;
  j["gamma0"] = rec.gamma0;
  j["rho1_tracked"] = j["config"]["propagation"]["track_rho1"];
  const SpectrumResult& s = rec.spectrum;
  j["results"] = {{"P2", s.P2},
                  {"P1", s.P1},
                  {"neg_content", s.neg_content},
                  {"extent", s.extent},
                  {"extent_resolved", rec.extent_resolved},
                  {"duration", s.duration},
                  {"duration_reached", s.duration_reached},
                  {"p0_final", rec.p0_final},
                  {"norm2_final", rec.norm2_final},
                  {"trace_rho1_final", rec.trace_rho1_final},
                  {"residual_final", rec.residual_final},
                  {"max_abs_residual", rec.max_abs_residual},
                  {"t_end", rec.t_end},
                  {"steps", rec.steps},
                  {"initial_energy", rec.initial_energy},
                  {"spectrum_points", s.energies.size()}};
  json series = {{"t", json::array()},
                 {"norm2_psi", json::array()},
                 {"trace_rho1", json::array()},
                 {"p0", json::array()},
                 {"residual", json::array()}};
  for (const NormSample& n : rec.ledger) {
    series["t"].push_back(n.t);
    series["norm2_psi"].push_back(n.norm2_psi);
    series["trace_rho1"].push_back(n.trace_rho1);
    series["p0"].push_back(n.p0);
    series["residual"].push_back(n.residual);
  }
  j["ledger"] = std::move(series);
  j["files"] = {{"spectrum", "spectrum.csv"}};
  return j.dump(1) + "\n";
}

std::string metadata_config_hash(const std::string& text) {
  const json j = json::parse(text);
  return j.at("config_hash").get<std::string>();
}

std::string run_directory_name(double gamma0) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "gamma0_%.6e", gamma0);
  return buf;
}

std::string format_sweep_summary(const SweepResult& sweep) {
  std::string out = "# gamma0,P2,P1,neg_content,extent,duration,l1_dP2,l1_dP1,status\n";
  for (const SweepEntry& e : sweep.entries) {
    out += fmt17(e.gamma0);
    if (e.record) {
      const SpectrumResult& s = e.record->spectrum;
      for (double v : {s.P2, s.P1, s.neg_content, s.extent, s.duration, e.l1_first, e.l1_second}) {
        out += "," + fmt17(v);
      }
      out += ",ok\n";
    } else {
      out += ",nan,nan,nan,nan,nan,nan,nan,failed\n";
    }
  }
  return out;
}

std::vector<std::string> export_run(const RunRecord& rec, const std::string& dir) {
  const fs::path base(dir);
  ensure_dir(base);
  const fs::path spectrum = base / "spectrum.csv";
  const fs::path meta = base / "metadata.json";
  write_text(spectrum, format_spectrum(rec.spectrum));
  write_text(meta, format_metadata(rec));
  return {spectrum.string(), meta.string()};
}

std::vector<std::string> export_sweep(const SweepResult& sweep, const std::string& dir) {
  const fs::path base(dir);
  ensure_dir(base);
  std::vector<std::string> files;
  std::string failures;
  for (const SweepEntry& e : sweep.entries) {
    if (e.record) {
      auto f = export_run(*e.record, (base / run_directory_name(e.gamma0)).string());
      files.insert(files.end(), f.begin(), f.end());
    } else {
      failures += run_directory_name(e.gamma0) + ": " + e.error + "\n";
    }
  }
  const fs::path summary = base / "sweep_summary.csv";
  write_text(summary, format_sweep_summary(sweep));
  files.push_back(summary.string());
  if (!failures.empty()) {
    const fs::path log = base / "failures.txt";
    write_text(log, failures);
    files.push_back(log.string());
  }
  return files;
}

}  // namespace capspec
