#include "capspec/scenario.hpp"

#include "capspec/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace capspec {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::scattering: return "scattering";
    case ScenarioKind::photoionization: return "photoionization";
    case ScenarioKind::custom: return "custom";
  }
  return "custom";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "scattering") return ScenarioKind::scattering;
  if (name == "photoionization") return ScenarioKind::photoionization;
  if (name == "custom") return ScenarioKind::custom;
  throw std::invalid_argument("unknown scenario kind '" + name + "'");
}

std::vector<double> gamma_ladder(int first, int last) {
  std::vector<double> out;
  for (int m = first; m <= last; ++m) out.push_back(std::ldexp(1.0, -m));
  return out;
}

std::vector<std::string> preset_names() { return {"scattering", "photo03", "photo10"}; }

namespace {

ScenarioConfig photo_base() {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::photoionization;
  cfg.potential = {PotentialKind::soft_coulomb, 0.5, 0.5};
  cfg.interaction = {0.5, 0.5};
  cfg.pulse = PulseSpec{0.1, 0.3, 7};
  cfg.track_rho1 = true;
  cfg.tau = 0.05;
  return cfg;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  if (name == "scattering") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::scattering;
    cfg.name = name;
    cfg.half_extent = 50.0;
    cfg.points = 400;
    cfg.potential = {PotentialKind::gaussian_well, 4.0, 3.0 / (2.0 * std::sqrt(2.0))};
    cfg.interaction = {1.0, 0.1925};
    cfg.cap_onset = 35.0;
    cfg.gamma0 = gamma_ladder(0, 6);
    cfg.packet = WavePacketSpec{-20.0, 2.0, 0.1};
    cfg.tau = 0.05;
    cfg.t_max = 300.0;
    cfg.norm_stop = 1e-5;
    return cfg;
  }
  if (name == "photo03") {
    ScenarioConfig cfg = photo_base();
    cfg.name = name;
    cfg.half_extent = 80.0;
    cfg.points = 400;
    cfg.projection_half_extent = 320.0;
    cfg.cap_onset = 50.0;
    cfg.gamma0 = gamma_ladder(0, 8);
    cfg.t_max = 600.0;
    return cfg;
  }
  if (name == "photo10") {
    ScenarioConfig cfg = photo_base();
    cfg.name = name;
    cfg.pulse->omega = 1.0;
    cfg.half_extent = 50.0;
    cfg.points = 250;
    cfg.projection_half_extent = 200.0;
    cfg.cap_onset = 20.0;
    cfg.gamma0 = gamma_ladder(0, 8);
    cfg.t_max = 300.0;
    return cfg;
  }
  throw std::invalid_argument("unknown preset '" + name + "' (expected scattering, photo03 or photo10)");
}

std::vector<std::string> validation_errors(const ScenarioConfig& cfg) {
  std::vector<std::string> err;
  auto bad = [&](bool cond, const std::string& msg) {
    if (cond) err.push_back(msg);
  };
  bad(!(cfg.half_extent > 0.0), "grid.half_extent must be positive");
  bad(cfg.points < 8 || cfg.points % 2 != 0, "grid.points must be even and at least 8");
  bad(cfg.projection_half_extent != 0.0 && !(cfg.projection_half_extent >= cfg.half_extent),
      "grid.projection_half_extent must be 0 or at least half_extent");
  bad(!(cfg.cap_onset > 0.0), "cap.onset must be positive");
  bad(!(cfg.cap_onset < cfg.half_extent), "cap.onset must lie inside the grid (onset < half_extent)");
  bad(cfg.gamma0.empty(), "cap.gamma0 needs at least one value");
  for (double g : cfg.gamma0) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "cap.gamma0 value %g must be finite and >= 0", g);
      err.emplace_back(buf);
    }
  }
  bad(!(cfg.tau > 0.0), "propagation.tau must be positive");
  bad(!(cfg.t_max > 0.0), "propagation.t_max must be positive");
  bad(cfg.stride < 1, "propagation.stride must be >= 1");
  bad(cfg.sample_every < 1, "propagation.sample_every must be >= 1");
  bad(!(cfg.norm_stop > 0.0 && cfg.norm_stop < 1.0), "propagation.norm_stop must lie in (0, 1)");
  bad(!(cfg.psi_drop >= 0.0 && cfg.psi_drop < 1.0), "propagation.psi_drop must lie in [0, 1)");
  bad(!(cfg.rho1_stop_fraction >= 0.0 && cfg.rho1_stop_fraction < 1.0),
      "propagation.rho1_stop_fraction must lie in [0, 1)");
  bad(cfg.potential.kind != PotentialKind::none && !(cfg.potential.width > 0.0),
      "potential.width must be positive");
  bad(!(cfg.interaction.smoothness > 0.0), "interaction.smoothness must be positive");
  bad(!(cfg.relax.tau > 0.0), "relax.tau must be positive");
  bad(!(cfg.relax.tolerance > 0.0), "relax.tolerance must be positive");
  bad(cfg.relax.max_iterations < 1, "relax.max_iterations must be >= 1");

  if (cfg.kind == ScenarioKind::scattering) {
    bad(!cfg.packet, "scattering requires a packet block");
    bad(cfg.potential.kind == PotentialKind::none,
        "scattering requires a binding potential for the target");
  }
  if (cfg.kind == ScenarioKind::photoionization) {
    bad(!cfg.pulse, "photoionization requires a pulse block");
  }
  if (cfg.pulse) {
    bad(!(cfg.pulse->omega > 0.0), "pulse.omega must be positive");
    bad(cfg.pulse->n_cycles < 1, "pulse.cycles must be >= 1");
  }
  if (cfg.packet) {
    bad(!(cfg.packet->momentum_width > 0.0), "packet.momentum_width must be positive");
    const bool grid_ok = cfg.half_extent > 0.0 && cfg.points >= 8 && cfg.points % 2 == 0;
    if (grid_ok && cfg.packet->momentum_width > 0.0 && cfg.cap_onset > 0.0) {
      const Grid1D grid = build_grid(cfg.half_extent, cfg.points);
      const ComplexVector chi = gaussian_packet(grid, *cfg.packet);
      double inside = 0.0, outside = 0.0;
      for (int i = 0; i < grid.n; ++i) {
        (std::abs(grid.x[i]) >= cfg.cap_onset ? outside : inside) += std::norm(chi[i]);
      }
      const double fraction = outside / (inside + outside);
      if (fraction > 0.01) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "packet overlaps the CAP region by %.3g of its norm (limit 0.01)", fraction);
        err.emplace_back(buf);
      }
    }
  }
  return err;
}

void validate(const ScenarioConfig& cfg) {
  const auto err = validation_errors(cfg);
  if (err.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : err) msg += "\n  - " + e;
  throw std::invalid_argument(msg);
}

namespace {

PulseSpec pulse_of(const ScenarioConfig& cfg) { return cfg.pulse ? *cfg.pulse : PulseSpec{}; }

}  // namespace

ScenarioContext prepare_context(const ScenarioConfig& cfg) {
  validate(cfg);
  ScenarioContext ctx;
  ctx.grid = build_grid(cfg.half_extent, cfg.points);
  ctx.potential = potential_values(ctx.grid, cfg.potential);
  ctx.interaction = interaction_matrix(ctx.grid, cfg.interaction);
  ctx.basis = eigendecompose(build_h0_dense(ctx.grid, ctx.potential), ctx.grid);
  ctx.projection = cfg.projection_half_extent > cfg.half_extent
                       ? projection_basis(ctx.grid, cfg.potential, cfg.projection_half_extent)
                       : ctx.basis;
  ctx.weights = continuum_weights(ctx.projection);

  const SystemOperators free_ops =
      make_operators(ctx.grid, cfg.potential, cfg.interaction, CapSpec{0.0, cfg.cap_onset});
  if (cfg.packet) {
    ctx.initial = init_scattering_state(ctx.grid, *cfg.packet, ctx.basis, cfg.cap_onset);
  } else {
    TwoBodyGroundState gs = relax_two_body(free_ops, cfg.relax);
    ctx.initial = std::move(gs.state);
    ctx.relax_iterations = gs.iterations;
    const double fraction = cap_region_fraction(ctx.initial, ctx.grid, cfg.cap_onset);
    if (fraction > 0.01) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "initial state overlaps the CAP region by %.3g of its norm (limit 0.01)",
                    fraction);
      throw std::invalid_argument(buf);
    }
  }
  ctx.initial.t = 0.0;
  ctx.initial_energy = energy_expectation(ctx.initial, free_ops);
  return ctx;
}

RunRecord run_scenario(const ScenarioConfig& cfg, double gamma0, const ScenarioContext& ctx) {
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
    throw std::invalid_argument("gamma0 must be finite and >= 0");
  }
  const auto wall_start = std::chrono::steady_clock::now();
  const Grid1D& grid = ctx.grid;
  const double h = grid.h;
  const double tau = cfg.tau;

  SystemOperators ops = make_operators(grid, cfg.potential, cfg.interaction,
                                       CapSpec{gamma0, cfg.cap_onset}, pulse_of(cfg));
  const RealVector& cap = ops.cap;

  TwoBodyState state = ctx.initial;
  TwoBodyPropagator prop(ops, tau);
  SpectralAccumulator acc(grid.n, h);

  std::optional<DensityPropagator> dprop;
  OneBodyDensity density;
  ComplexMatrix source_now;
  if (cfg.track_rho1) {
    dprop.emplace(ops, tau);
    density.rho = ComplexMatrix::Zero(grid.n, grid.n);
    density.h = h;
    source_now = source_matrix(state.psi, cap, h);
  }

  TraceLedger ledger;
  ledger.norm2_psi = norm2(state);
  ledger.refresh_residual();

  RunRecord rec;
  rec.gamma0 = gamma0;
  rec.initial_energy = ctx.initial_energy;

  // Without rho1 the one-body sector is lumped: trace_rho1 then holds the
  // probability transferred out of Psi2, int h tr S dt (trapezoid).
  auto transfer_rate = [&]() {
    double acc_rate = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      if (cap[j] != 0.0) acc_rate += cap[j] * state.psi.col(j).squaredNorm();
    }
    return 4.0 * h * h * acc_rate;
  };
  double rate_prev = cfg.track_rho1 ? 0.0 : transfer_rate();

  bool psi_alive = true;
  double rho_peak = 0.0;
  double max_res = std::abs(ledger.residual);

  auto sample = [&](double t) {
    NormSample s{t, ledger.norm2_psi, ledger.trace_rho1, ledger.p0, ledger.residual};
    acc.record_sample(s);
    if (psi_alive) acc.record_tail(state.psi, grid);
  };

  const long max_steps = static_cast<long>(std::ceil(cfg.t_max / tau - 1e-9));
  long step = 0;
  sample(0.0);
  while (step < max_steps) {
    const double weight = cfg.stride * tau;
    if (step % cfg.stride == 0) {
      if (psi_alive) acc.add_two_body(state.psi, weight);
      if (cfg.track_rho1) acc.add_one_body(density.rho, weight);
    }

    if (psi_alive) prop.step(state);
    ++step;
    const double t = step * tau;

    if (psi_alive) {
      ledger.norm2_psi = norm2(state);
      if (ledger.norm2_psi > 1.0 + 1e-6) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "propagation blow-up at t=%.6g: |Psi2|^2 = %.12g exceeds 1 + 1e-6", t,
                      ledger.norm2_psi);
        throw std::runtime_error(buf);
      }
    }

    if (cfg.track_rho1) {
      ComplexMatrix source_next;
      if (psi_alive) {
        source_next = source_matrix(state.psi, cap, h);
      } else {
        source_next = ComplexMatrix::Zero(grid.n, grid.n);
      }
      dprop->step(density, source_now, source_next);
      source_now = std::move(source_next);
      update_p0(ledger, density.rho, cap, h, tau);
      ledger.trace_rho1 = trace_probability(density);
      if (ledger.trace_rho1 > 1.0 + 1e-6) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "propagation blow-up at t=%.6g: h tr rho1 = %.12g exceeds 1 + 1e-6", t,
                      ledger.trace_rho1);
        throw std::runtime_error(buf);
      }
      rho_peak = std::max(rho_peak, ledger.trace_rho1);
    }
    if (!cfg.track_rho1) {
      const double rate = transfer_rate();
      ledger.trace_rho1 += 0.5 * tau * (rate_prev + rate);
      rate_prev = rate;
    }
    ledger.t = t;
    ledger.refresh_residual();
    max_res = std::max(max_res, std::abs(ledger.residual));

    const bool last = step == max_steps;
    if (step % cfg.sample_every == 0 || last) sample(t);

    if (!cfg.track_rho1) {
      if (ledger.norm2_psi < cfg.norm_stop) {
        if (step % cfg.sample_every != 0 && !last) sample(t);
        break;
      }
    } else {
      if (psi_alive && ledger.norm2_psi < cfg.psi_drop) {
        psi_alive = false;
        source_now.setZero();
      }
      if (!psi_alive && ledger.trace_rho1 < cfg.rho1_stop_fraction * rho_peak) {
        if (step % cfg.sample_every != 0 && !last) sample(t);
        break;
      }
    }
  }

  rec.steps = step;
  rec.t_end = step * tau;
  rec.norm2_final = psi_alive ? ledger.norm2_psi : norm2(state);
  rec.trace_rho1_final = ledger.trace_rho1;
  rec.p0_final = ledger.p0;
  rec.residual_final = ledger.residual;
  rec.max_abs_residual = max_res;
  rec.ledger = acc.samples();

  const SpectrumCurve first = spectrum_first(acc, cap, ctx.projection, ctx.weights);
  SpectrumResult& out = rec.spectrum;
  out.energies = first.energies;
  out.dP2_dE = first.density;
  if (cfg.track_rho1) {
    out.dP1_dE = spectrum_second(acc, cap, ctx.projection, ctx.weights).density;
  } else {
    out.dP1_dE = RealVector::Zero(first.energies.size());
  }
  const Totals tot = totals(out);
  out.P2 = tot.P2;
  out.P1 = tot.P1;
  out.neg_content = negative_content(first);
  const ExtentDuration ed = extent_duration(acc, h, rec.t_end);
  out.extent = ed.extent;
  out.duration = ed.duration;
  out.duration_reached = ed.duration_reached;
  rec.extent_resolved = ed.extent_resolved;

  ScenarioConfig snapshot = cfg;
  snapshot.gamma0 = {gamma0};
  rec.config_json = config_to_json(snapshot);
  rec.config_hash = config_hash(snapshot);
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return rec;
}

RunRecord run_scenario(const ScenarioConfig& cfg, double gamma0) {
  const ScenarioContext ctx = prepare_context(cfg);
  RunRecord rec = run_scenario(cfg, gamma0, ctx);
  if (!cfg.output_dir.empty()) rec.files = export_run(rec, cfg.output_dir);
  return rec;
}

SweepResult sweep_gamma(const ScenarioConfig& cfg, int jobs) {
  const ScenarioContext ctx = prepare_context(cfg);
  SweepResult sweep;
  const std::size_t count = cfg.gamma0.size();
  sweep.entries.resize(count);
  for (std::size_t i = 0; i < count; ++i) sweep.entries[i].gamma0 = cfg.gamma0[i];

  auto run_one = [&](std::size_t i) {
    SweepEntry& e = sweep.entries[i];
    try {
      e.record = run_scenario(cfg, e.gamma0, ctx);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  };

  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  // reference: smallest gamma0 among the successful runs
  const SweepEntry* ref = nullptr;
  for (const auto& e : sweep.entries) {
    if (e.record && (!ref || e.gamma0 < ref->gamma0)) ref = &e;
  }
  if (ref) {
    const SpectrumCurve ref2{ref->record->spectrum.energies, ref->record->spectrum.dP2_dE};
    const SpectrumCurve ref1{ref->record->spectrum.energies, ref->record->spectrum.dP1_dE};
    for (auto& e : sweep.entries) {
      if (!e.record) continue;
      const SpectrumResult& s = e.record->spectrum;
      e.l1_first = l1_distance(SpectrumCurve{s.energies, s.dP2_dE}, ref2);
      e.l1_second = l1_distance(SpectrumCurve{s.energies, s.dP1_dE}, ref1);
    }
  }

  if (!cfg.output_dir.empty()) sweep.files = export_sweep(sweep, cfg.output_dir);
  return sweep;
}

}  // namespace capspec
