#include "lmg/commands.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>

#include "lmg/action.hpp"
#include "lmg/classical.hpp"
#include "lmg/errors.hpp"
#include "lmg/scaling.hpp"
#include "lmg/spectrum.hpp"

namespace lmg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

long long as_int(std::size_t x) { return static_cast<long long>(x); }

OutputTable make_table(const RunConfig& cfg, const std::string& name,
                       std::vector<std::string> columns, std::vector<std::string> notes = {}) {
  OutputTable t;
  t.header.push_back(kToolVersion);
  t.header.push_back("config: " + cfg.echo().dump());
  t.header.push_back("resolution: " + std::to_string(cfg.resolution));
  t.header.push_back("table: " + name);
  for (auto& note : notes) t.header.push_back(std::move(note));
  t.columns = std::move(columns);
  return t;
}

void add_failed_row(OutputTable& t) {
  std::vector<Cell> row(t.columns.size(), Cell{std::string()});
  row.front() = std::string("FAILED");
  t.add_row(std::move(row));
}

std::string point_label(double lambda, int n) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "lambda=%.17g N=%d", lambda, n);
  return buf;
}

void record_failure(CommandResult& result, OutputTable& table, double lambda, int n,
                    const std::exception& e) {
  add_failed_row(table);
  if (!result.failed) {
    result.failed = true;
    result.failure = point_label(lambda, n) + ": " + e.what();
  }
}

std::vector<double> lambdas_or(const RunConfig& cfg, std::vector<double> fallback) {
  if (!cfg.lambda_list.empty()) return cfg.lambda_list;
  if (cfg.lambda) return {*cfg.lambda};
  return fallback;
}

std::vector<int> ns_or(const RunConfig& cfg, std::vector<int> fallback) {
  if (!cfg.n_list.empty()) return cfg.n_list;
  if (cfg.n) return {*cfg.n};
  return fallback;
}

Resolution resolution_of(const RunConfig& cfg) { return {cfg.resolution, AreaMethod::grid}; }

const std::string kSectorNote = "sector codes: 0=even 1=odd";

// ---------------------------------------------------------------------------
// Single-point commands

CommandResult run_spectrum(const RunConfig& cfg) {
  const ModelParams params(*cfg.lambda, *cfg.n);
  const auto spectrum = merged_spectrum(params, cfg.threads);
  auto t = make_table(cfg, "spectrum", {"global_index", "sector", "sector_index", "energy", "K"},
                      {kSectorNote});
  for (const auto& level : spectrum.levels) {
    if (cfg.sector != "both" && cfg.sector != to_string(level.parity)) continue;
    t.add_row({as_int(level.global_index), static_cast<long long>(level.parity),
               as_int(level.sector_index), level.energy, level.scaled_energy});
  }
  return {{{"spectrum", std::move(t)}}};
}

CommandResult run_eigvec(const RunConfig& cfg) {
  const ModelParams params(*cfg.lambda, *cfg.n);
  const Parity parity = cfg.sector == "even" ? Parity::even : Parity::odd;
  const auto sector = build_sector(params, parity);
  if (*cfg.level >= sector.size()) {
    throw ConfigError("level", "sector index out of range (dimension " +
                                   std::to_string(sector.size()) + ")");
  }
  const auto pair = eigen_k(sector, *cfg.level);
  char energy[64];
  std::snprintf(energy, sizeof energy, "energy: %.17g", pair.value);
  auto t = make_table(cfg, "eigvec", {"component", "two_m", "amplitude"}, {energy});
  for (std::size_t i = 0; i < pair.vector.size(); ++i) {
    t.add_row({as_int(i), static_cast<long long>(sector.basis.two_m[i]), pair.vector[i]});
  }
  return {{{"eigvec", std::move(t)}}};
}

CommandResult run_classical(const RunConfig& cfg) {
  const double lambda = *cfg.lambda;
  CommandResult result;
  auto points = make_table(cfg, "stationary", {"mu", "phi", "K", "kind", "degenerate"},
                           {"kind codes: 0=minimum 1=maximum 2=saddle"});
  for (const auto& sp : stationary_points(lambda)) {
    points.add_row({sp.point.mu(), sp.point.phi(), sp.k_value, static_cast<long long>(sp.kind),
                    static_cast<long long>(sp.degenerate ? 1 : 0)});
  }
  auto summary = make_table(cfg, "summary",
                            {"lambda", "K_min", "K_max", "K_c", "critical_excitation",
                             "harmonic_frequency"});
  const auto kc = separatrix_energy(lambda);
  summary.add_row({lambda, k_min(lambda), k_max(lambda), kc ? *kc : kNaN,
                   lambda >= 1.0 ? critical_excitation(lambda) : kNaN,
                   lambda != 1.0 ? harmonic_frequency(lambda) : kNaN});
  result.tables.push_back({"stationary", std::move(points)});
  result.tables.push_back({"summary", std::move(summary)});
  if (cfg.action_samples > 0) {
    const auto table = action_table(lambda, cfg.action_samples, resolution_of(cfg));
    auto t = make_table(cfg, "action", {"K", "action", "period"});
    for (const auto& s : table.samples) t.add_row({s.k, s.action, s.period});
    result.tables.push_back({"action", std::move(t)});
  }
  return result;
}

CommandResult run_wkb(const RunConfig& cfg) {
  const ModelParams params(*cfg.lambda, *cfg.n);
  const auto levels = wkb_levels(params, cfg.count, resolution_of(cfg));
  auto t = make_table(cfg, "wkb", {"k_index", "K", "energy", "doublet"});
  for (const auto& l : levels) {
    t.add_row({as_int(l.index), l.k_value, l.energy, static_cast<long long>(l.doublet ? 1 : 0)});
  }
  return {{{"wkb", std::move(t)}}};
}

CommandResult run_localize(const RunConfig& cfg) {
  const ModelParams params(*cfg.lambda, *cfg.n);
  const auto spectrum = merged_spectrum(params, cfg.threads);
  std::optional<Level> level;
  if (cfg.level) {
    const Parity parity = cfg.sector == "even" ? Parity::even : Parity::odd;
    const auto sector = spectrum.sector(parity);
    if (*cfg.level >= sector.size()) throw ConfigError("level", "sector index out of range");
    level = sector[*cfg.level];
  } else {
    level = minimal_gap_level(spectrum, params.coupling());
    if (!level) throw ConfigError("level", "no minimal-gap level for lambda <= 1; pass --level");
  }
  const auto pair = eigenpair_for(spectrum, *level);
  const auto report = localization_report(spectrum, pair, cfg.n_components);
  auto t = make_table(cfg, "localize",
                      {"offset", "sector", "sector_index", "global_index", "energy", "K", "fraction"},
                      {kSectorNote});
  auto row = [&](int offset, const Level& l, double fraction) {
    t.add_row({static_cast<long long>(offset), static_cast<long long>(l.parity),
               as_int(l.sector_index), as_int(l.global_index), l.energy, l.scaled_energy, fraction});
  };
  bool centre_written = false;
  for (const auto& nb : report.neighbors) {
    if (nb.offset > 0 && !centre_written) {
      row(0, report.level, report.fraction);
      centre_written = true;
    }
    row(nb.offset, nb.level, nb.fraction);
  }
  if (!centre_written) row(0, report.level, report.fraction);
  return {{{"localize", std::move(t)}}};
}

CommandResult run_dos(const RunConfig& cfg) {
  const ModelParams params(*cfg.lambda, *cfg.n);
  const auto h = dos_histogram(merged_spectrum(params, cfg.threads), cfg.bins, cfg.density);
  auto t = make_table(cfg, "dos", {"bin_lo", "bin_hi", cfg.density ? "density" : "count"});
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (cfg.density) {
      t.add_row({h.bin_edges[i], h.bin_edges[i + 1], h.counts[i]});
    } else {
      t.add_row({h.bin_edges[i], h.bin_edges[i + 1], static_cast<long long>(h.counts[i])});
    }
  }
  return {{{"dos", std::move(t)}}};
}

// ---------------------------------------------------------------------------
// Scaling presets

std::vector<Cell> fit_cells(const FitResult& f) {
  return {f.slope, f.intercept, f.amplitude, f.r_squared, as_int(f.n_points), f.residual_max};
}

const std::vector<std::string> kFitColumns{"slope", "intercept", "amplitude", "r_squared",
                                           "n_points", "residual_max"};

std::vector<std::string> with_fit_columns(std::vector<std::string> lead) {
  lead.insert(lead.end(), kFitColumns.begin(), kFitColumns.end());
  return lead;
}

CommandResult preset_fig1(const RunConfig& cfg) {
  CommandResult result;
  const auto lambdas = lambdas_or(cfg, {1.2, 1.5, 2.0});
  const auto ns = ns_or(cfg, {500, 750, 1000, 1250, 1500});
  auto raw = make_table(cfg, "raw",
                        {"lambda", "N", "spacing", "K_at", "sector", "sector_index", "window_min",
                         "warning"},
                        {kSectorNote});
  auto summary = make_table(cfg, "summary",
                            with_fit_columns({"lambda", "f_predicted", "f_ratio"}));
  for (double lambda : lambdas) {
    std::vector<int> ok_ns;
    std::vector<double> spacings;
    for (int n : ns) {
      try {
        const auto s = measure_separatrix_spacing(merged_spectrum(ModelParams(lambda, n), cfg.threads),
                                                  lambda);
        raw.add_row({lambda, static_cast<long long>(n), s.spacing, s.at_level.scaled_energy,
                     static_cast<long long>(s.at_level.parity), as_int(s.at_level.sector_index),
                     s.window_min, static_cast<long long>(s.warning ? 1 : 0)});
        ok_ns.push_back(n);
        spacings.push_back(s.spacing);
      } catch (const NumericalError& e) {
        record_failure(result, raw, lambda, n, e);
      }
    }
    const double predicted = 2.0 * std::numbers::pi * std::sqrt(lambda * lambda - 1.0);
    try {
      const auto fit = fit_inverse_log(ok_ns, spacings);
      std::vector<Cell> row{lambda, predicted, fit.slope / predicted};
      for (auto& c : fit_cells(fit)) row.push_back(std::move(c));
      summary.add_row(std::move(row));
    } catch (const NumericalError& e) {
      record_failure(result, summary, lambda, 0, e);
    }
  }
  result.tables.push_back({"raw", std::move(raw)});
  result.tables.push_back({"summary", std::move(summary)});
  return result;
}

CommandResult preset_fig2(const RunConfig& cfg) {
  CommandResult result;
  const double lambda = cfg.lambda.value_or(1.0);
  const int n = cfg.n.value_or(5000);
  auto raw = make_table(cfg, "raw", {"k", "excitation"},
                        {"even-sector levels k = 8, 16, ..., 496 above the merged ground state"});
  auto summary = make_table(cfg, "summary", with_fit_columns({"lambda", "N", "slope_ratio"}));
  try {
    const ModelParams params(lambda, n);
    const auto even = build_sector(params, Parity::even);
    const auto odd = build_sector(params, Parity::odd);
    const std::size_t top = std::min<std::size_t>(500, even.size());
    const auto values = eigenvalues(even.matrix, 0, top, cfg.threads);
    const double ground = std::min(values.front(), eigenvalue(odd.matrix, 0));
    std::vector<double> ks;
    std::vector<double> excitations;
    for (std::size_t k = 8; k < top; k += 8) {
      ks.push_back(static_cast<double>(k));
      excitations.push_back(values[k] - ground);
      raw.add_row({as_int(k), values[k] - ground});
    }
    const auto fit = fit_power_law(ks, excitations);
    std::vector<Cell> row{lambda, static_cast<long long>(n), fit.slope / (4.0 / 3.0)};
    for (auto& c : fit_cells(fit)) row.push_back(std::move(c));
    summary.add_row(std::move(row));
  } catch (const NumericalError& e) {
    record_failure(result, raw, lambda, n, e);
    add_failed_row(summary);
  }
  result.tables.push_back({"raw", std::move(raw)});
  result.tables.push_back({"summary", std::move(summary)});
  return result;
}

CommandResult preset_gap13(const RunConfig& cfg) {
  CommandResult result;
  const double lambda = cfg.lambda.value_or(1.0);
  const auto ns = ns_or(cfg, {500, 1000, 2000, 4000, 8000});
  auto raw = make_table(cfg, "raw", {"N", "gap"});
  auto summary = make_table(cfg, "summary", with_fit_columns({"lambda"}));
  std::vector<double> xs;
  std::vector<double> gaps;
  for (int n : ns) {
    try {
      const double g = gap(ModelParams(lambda, n));
      raw.add_row({static_cast<long long>(n), g});
      xs.push_back(static_cast<double>(n));
      gaps.push_back(g);
    } catch (const NumericalError& e) {
      record_failure(result, raw, lambda, n, e);
    }
  }
  try {
    std::vector<Cell> row{lambda};
    for (auto& c : fit_cells(fit_power_law(xs, gaps))) row.push_back(std::move(c));
    summary.add_row(std::move(row));
  } catch (const NumericalError& e) {
    record_failure(result, summary, lambda, 0, e);
  }
  result.tables.push_back({"raw", std::move(raw)});
  result.tables.push_back({"summary", std::move(summary)});
  return result;
}

CommandResult preset_doublet(const RunConfig& cfg) {
  CommandResult result;
  const auto lambdas = lambdas_or(cfg, {1.5});
  const auto ns = ns_or(cfg, {60, 80, 100, 120});
  auto raw = make_table(cfg, "raw", {"lambda", "N", "splitting", "below_resolution"});
  auto summary = make_table(cfg, "summary", with_fit_columns({"lambda"}));
  for (double lambda : lambdas) {
    try {
      const auto decay = doublet_decay_fit(lambda, ns);
      for (std::size_t i = 0; i < decay.ns.size(); ++i) {
        raw.add_row({lambda, static_cast<long long>(decay.ns[i]), decay.splittings[i],
                     static_cast<long long>(decay.flagged[i] ? 1 : 0)});
      }
      std::vector<Cell> row{lambda};
      for (auto& c : fit_cells(decay.fit)) row.push_back(std::move(c));
      summary.add_row(std::move(row));
    } catch (const NumericalError& e) {
      record_failure(result, summary, lambda, ns.empty() ? 0 : ns.front(), e);
    }
  }
  result.tables.push_back({"raw", std::move(raw)});
  result.tables.push_back({"summary", std::move(summary)});
  return result;
}

CommandResult preset_scar(const RunConfig& cfg) {
  CommandResult result;
  const auto lambdas = lambdas_or(cfg, {1.5, 2.0});
  const auto ns = ns_or(cfg, {800, 1600, 3200});
  auto raw = make_table(cfg, "raw",
                        {"lambda", "N", "sector", "sector_index", "global_index", "energy", "K",
                         "fraction", "max_neighbor_fraction", "exceeds_neighbors"},
                        {kSectorNote, "fraction over the first n_components sector components"});
  auto summary = make_table(cfg, "summary",
                            {"lambda", "min_fraction", "max_fraction", "all_exceed_neighbors"});
  for (double lambda : lambdas) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    bool all_exceed = true;
    bool any = false;
    for (int n : ns) {
      try {
        const auto spectrum = merged_spectrum(ModelParams(lambda, n), cfg.threads);
        const auto level = minimal_gap_level(spectrum, lambda);
        if (!level) throw DomainError("scar preset needs lambda > 1");
        const auto report =
            localization_report(spectrum, eigenpair_for(spectrum, *level), cfg.n_components);
        double best_neighbor = 0.0;
        for (const auto& nb : report.neighbors) best_neighbor = std::max(best_neighbor, nb.fraction);
        const bool exceeds = report.fraction > best_neighbor;
        raw.add_row({lambda, static_cast<long long>(n), static_cast<long long>(level->parity),
                     as_int(level->sector_index), as_int(level->global_index), level->energy,
                     level->scaled_energy, report.fraction, best_neighbor,
                     static_cast<long long>(exceeds ? 1 : 0)});
        lo = std::min(lo, report.fraction);
        hi = std::max(hi, report.fraction);
        all_exceed = all_exceed && exceeds;
        any = true;
      } catch (const NumericalError& e) {
        record_failure(result, raw, lambda, n, e);
      }
    }
    if (any) {
      summary.add_row({lambda, lo, hi, static_cast<long long>(all_exceed ? 1 : 0)});
    } else {
      add_failed_row(summary);
    }
  }
  result.tables.push_back({"raw", std::move(raw)});
  result.tables.push_back({"summary", std::move(summary)});
  return result;
}

CommandResult preset_weyl(const RunConfig& cfg) {
  CommandResult result;
  const auto lambdas = lambdas_or(cfg, {0.5, 1.5});
  const auto ns = ns_or(cfg, {1000});
  auto staircase = make_table(cfg, "staircase",
                              {"lambda", "N", "max_deviation", "offset", "samples"});
  for (double lambda : lambdas) {
    for (int n : ns) {
      try {
        const auto spectrum = merged_spectrum(ModelParams(lambda, n), cfg.threads);
        const auto dev = staircase_deviation(spectrum, resolution_of(cfg));
        staircase.add_row({lambda, static_cast<long long>(n), dev.max_deviation,
                           static_cast<long long>(dev.offset), as_int(dev.samples)});
      } catch (const NumericalError& e) {
        record_failure(result, staircase, lambda, n, e);
      }
    }
  }

  // Logarithmic divergence of the per-well period at the lower separatrix.
  const double lambda = 2.0;
  const double omega = std::sqrt(lambda * lambda - 1.0);
  auto periods = make_table(cfg, "period", {"lambda", "side", "decade", "K", "half_period"},
                            {"half_period = (dS/dK)/2 from the strip quadrature"});
  auto summary = make_table(cfg, "summary",
                            with_fit_columns({"lambda", "side", "predicted_slope", "slope_ratio"}));
  for (int side : {-1, 1}) {
    std::vector<double> decades;
    std::vector<double> halves;
    for (int d = 2; d <= 6; ++d) {
      const double k = -1.0 + side * std::pow(10.0, -d);
      const double half = 0.5 * period(k, lambda, {cfg.resolution, AreaMethod::strip});
      periods.add_row({lambda, static_cast<long long>(side), static_cast<long long>(d), k, half});
      decades.push_back(d);
      halves.push_back(half);
    }
    const auto fit = fit_line(decades, halves);
    const double predicted = std::log(10.0) / omega;
    std::vector<Cell> row{lambda, static_cast<long long>(side), predicted, fit.slope / predicted};
    for (auto& c : fit_cells(fit)) row.push_back(std::move(c));
    summary.add_row(std::move(row));
  }
  result.tables.push_back({"staircase", std::move(staircase)});
  result.tables.push_back({"period", std::move(periods)});
  result.tables.push_back({"summary", std::move(summary)});
  return result;
}

CommandResult run_scaling(const RunConfig& cfg) {
  if (cfg.preset == "fig1") return preset_fig1(cfg);
  if (cfg.preset == "fig2") return preset_fig2(cfg);
  if (cfg.preset == "gap13") return preset_gap13(cfg);
  if (cfg.preset == "doublet") return preset_doublet(cfg);
  if (cfg.preset == "scar") return preset_scar(cfg);
  if (cfg.preset == "weyl") return preset_weyl(cfg);
  throw ConfigError("preset", "unknown preset '" + cfg.preset + "'");
}

}  // namespace

CommandResult run_command(const RunConfig& config) {
  switch (config.command) {
    case Command::spectrum: return run_spectrum(config);
    case Command::eigvec: return run_eigvec(config);
    case Command::classical: return run_classical(config);
    case Command::wkb: return run_wkb(config);
    case Command::scaling: return run_scaling(config);
    case Command::localize: return run_localize(config);
    case Command::dos: return run_dos(config);
  }
  throw ConfigError("command", "unhandled command");
}

void write_result(const RunConfig& config, const CommandResult& result, std::ostream& stdout_stream) {
  namespace fs = std::filesystem;
  if (result.tables.size() == 1) {
    if (config.out.empty()) {
      stdout_stream << render(result.tables.front().table);
      if (!stdout_stream) throw IoError("failed writing to stdout");
      return;
    }
    write_table(result.tables.front().table, config.out);
    return;
  }
  const fs::path dir = config.out.empty()
                           ? fs::path(config.preset.empty() ? std::string(to_string(config.command))
                                                            : config.preset)
                           : fs::path(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  for (const auto& named : result.tables) write_table(named.table, dir / (named.name + ".csv"));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_config(args);
    if (!config) return 0;
  } catch (const ConfigError& e) {
    err << "lmg: invalid configuration: " << e.what() << '\n';
    return 2;
  }

  const std::string where =
      config->lambda && config->n ? " (" + point_label(*config->lambda, *config->n) + ")" : "";
  CommandResult result;
  try {
    result = run_command(*config);
  } catch (const ConfigError& e) {
    err << "lmg: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParams& e) {
    err << "lmg: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "lmg: numerical failure" << where << ": " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    err << "lmg: numerical failure" << where << ": " << e.what() << '\n';
    return 3;
  } catch (const IndexError& e) {
    err << "lmg: invalid configuration: " << e.what() << '\n';
    return 2;
  }

  try {
    write_result(*config, result, out);
  } catch (const IoError& e) {
    err << "lmg: I/O failure: " << e.what() << '\n';
    return 4;
  }
  if (result.failed) {
    err << "lmg: numerical failure at " << result.failure << '\n';
    return 3;
  }
  return 0;
}

}  // namespace lmg
